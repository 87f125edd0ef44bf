#include <doctest.h>

#include <memory>

#include "bfl/congest.hpp"

using namespace bfl;

namespace {

// Minimal scripted node: runs a lambda each round.
class Script : public NodeProgram {
 public:
  using Fn = std::function<void(NodeContext&, const std::vector<Received>&, std::vector<Send>&)>;
  explicit Script(Fn fn) : fn_(std::move(fn)) {}
  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    fn_(ctx, inbox, out);
  }
  bool halted() const override { return false; }
  Fn fn_;
};

std::unique_ptr<Script> script(Script::Fn fn) { return std::make_unique<Script>(std::move(fn)); }

std::unique_ptr<Script> idle() { return script([](NodeContext&, const auto&, auto&) {}); }

}  // namespace

TEST_CASE("messages sent in round t are readable in round t+1") {
  Network net(1, 3, 9, 1000);
  std::vector<int64_t> ack_rounds;
  net.install_facility(1, script([&](NodeContext& ctx, const std::vector<Received>& in,
                                     std::vector<Send>& out) {
    if (ctx.round == 1)
      for (int j = 1; j <= ctx.n_c; ++j) out.push_back(Send{j, Message{42, 0, MsgKind::edge}});
    for (const Received& r : in)
      if (r.msg.kind == MsgKind::held_count) ack_rounds.push_back(ctx.round);
  }));
  for (int j = 1; j <= 3; ++j)
    net.install_client(j, script([](NodeContext&, const std::vector<Received>& in,
                                    std::vector<Send>& out) {
      for (const Received& r : in)
        if (r.msg.kind == MsgKind::edge && r.msg.a == 42)
          out.push_back(Send{1, Message{1, 0, MsgKind::held_count}});
    }));
  net.run_round();
  net.run_round();
  net.run_round();
  CHECK(net.round() == 3);
  CHECK(ack_rounds == std::vector<int64_t>{3, 3, 3});  // broadcast 1, reply 2, read 3
}

TEST_CASE("inboxes arrive sorted by sender") {
  Network net(4, 1, 9, 1000);
  for (int i = 1; i <= 4; ++i)
    net.install_facility(i, script([i](NodeContext& ctx, const auto&, std::vector<Send>& out) {
      if (ctx.round == 1) out.push_back(Send{1, Message{static_cast<int64_t>(i), 0, MsgKind::edge}});
    }));
  std::vector<int> senders;
  net.install_client(1, script([&](NodeContext&, const std::vector<Received>& in, auto&) {
    for (const Received& r : in) senders.push_back(r.from);
  }));
  net.run_round();
  net.run_round();
  CHECK(senders == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("two messages on one edge in one round blow up") {
  Network net(1, 2, 9, 1000);
  net.install_facility(1, script([](NodeContext&, const auto&, std::vector<Send>& out) {
    out.push_back(Send{1, Message{0, 0, MsgKind::edge}});
    out.push_back(Send{1, Message{1, 0, MsgKind::edge}});
  }));
  net.install_client(1, idle());
  net.install_client(2, idle());
  CHECK_THROWS_AS(net.run_round(), SimulationError);
}

TEST_CASE("payload and addressing violations blow up") {
  auto run_one = [](Script::Fn fn) {
    Network net(1, 1, 9, 100);
    net.install_facility(1, script(std::move(fn)));
    net.install_client(1, idle());
    net.run_round();
  };
  CHECK_THROWS_AS(run_one([](NodeContext&, const auto&, std::vector<Send>& out) {
                    out.push_back(Send{1, Message{101, 0, MsgKind::edge}});
                  }),
                  SimulationError);
  CHECK_THROWS_AS(run_one([](NodeContext&, const auto&, std::vector<Send>& out) {
                    out.push_back(Send{1, Message{0, -1, MsgKind::edge}});
                  }),
                  SimulationError);
  CHECK_THROWS_AS(run_one([](NodeContext&, const auto&, std::vector<Send>& out) {
                    out.push_back(Send{2, Message{0, 0, MsgKind::edge}});
                  }),
                  SimulationError);
  CHECK_NOTHROW(run_one([](NodeContext&, const auto&, std::vector<Send>& out) {
    out.push_back(Send{1, Message{100, 100, MsgKind::edge}});
  }));
}

TEST_CASE("per-node uniform draws pass a chi-square sanity check") {
  Network net(1, 1, 12345, 10);
  std::vector<int64_t> bucket(16, 0);
  const int N = 100000;
  for (int t = 0; t < N; ++t) ++bucket[net.node_random_int(Side::client, 1, 16) - 1];
  double chi = 0;
  double expect = N / 16.0;
  for (int64_t c : bucket) chi += (c - expect) * (c - expect) / expect;
  // df = 15, two-sided 0.999 interval
  CHECK(chi > 3.4827);
  CHECK(chi < 37.6973);
  for (int t = 0; t < 100; ++t) CHECK(net.node_random_int(Side::facility, 1, 1) == 1);
}

TEST_CASE("node streams are seed-stable and index-separated") {
  Network a(3, 3, 777, 10), b(3, 3, 777, 10), c(3, 3, 778, 10);
  bool any_diff = false;
  for (int t = 0; t < 64; ++t) {
    uint64_t x = a.node_random_int(Side::facility, 2, 1u << 30);
    CHECK(x == b.node_random_int(Side::facility, 2, 1u << 30));
    if (x != c.node_random_int(Side::facility, 2, 1u << 30)) any_diff = true;
  }
  CHECK(any_diff);
  bool cross_diff = false;
  for (int t = 0; t < 64; ++t)
    if (a.node_random_int(Side::facility, 1, 1u << 30) !=
        a.node_random_int(Side::client, 1, 1u << 30))
      cross_diff = true;
  CHECK(cross_diff);
}

TEST_CASE("transcripts are deterministic and line-formatted") {
  auto run = [](uint64_t seed, std::string* t) {
    Network net(2, 2, seed, 1000, t);
    for (int i = 1; i <= 2; ++i)
      net.install_facility(i, script([i](NodeContext& ctx, const auto&, std::vector<Send>& out) {
        if (ctx.round == 1)
          out.push_back(Send{i, Message{static_cast<int64_t>(ctx.rng->one_to(50)), 7,
                                        MsgKind::hash_shift}});
      }));
    net.install_client(1, idle());
    net.install_client(2, script([](NodeContext& ctx, const auto&, std::vector<Send>& out) {
      if (ctx.round == 2) out.push_back(Send{1, Message{3, 0, MsgKind::held_count}});
    }));
    net.run_round();
    net.run_round();
  };
  std::string t1, t2;
  run(5, &t1);
  run(5, &t2);
  CHECK(t1 == t2);
  CHECK(t1.find("1 f1->c1 hash_shift ") == 0);
  CHECK(t1.find("2 c2->f1 held_count 3 0\n") != std::string::npos);
  std::string t3;
  run(6, &t3);
  CHECK(t1 != t3);
}

TEST_CASE("run_until_halted counts rounds and enforces the cap") {
  class Stopper : public NodeProgram {
   public:
    void step(NodeContext& ctx, const std::vector<Received>&, std::vector<Send>&) override {
      if (ctx.round >= 4) done_ = true;
    }
    bool halted() const override { return done_; }
    bool done_ = false;
  };
  Network net(1, 1, 1, 10);
  net.install_facility(1, std::make_unique<Stopper>());
  net.install_client(1, std::make_unique<Stopper>());
  CHECK(net.run_until_halted(100) == 4);

  Network stuck(1, 1, 1, 10);
  stuck.install_facility(1, idle());
  stuck.install_client(1, idle());
  CHECK_THROWS_AS(stuck.run_until_halted(16), SimulationError);
}

TEST_CASE("default scalar bound covers the protocol payload families") {
  CHECK(Network::default_scalar_bound(10, 5, 2, 3) >= 100);   // pair indices
  CHECK(Network::default_scalar_bound(10, 5, 2, 3) >= 480);   // final-phase totals
  CHECK(Network::default_scalar_bound(2, 50, 1, 1) >= 100);   // radius denominators
  CHECK(Network::default_scalar_bound(2, 10, 7, 3) >= 100);   // radius numerators
  Instance inst = generate_instance(4, 4, 2);
  CHECK(Network::default_scalar_bound(inst) ==
        Network::default_scalar_bound(4, 4, inst.max_f(), inst.max_d()));
}

#include "bfl/locate.hpp"

#include <memory>

namespace bfl {

namespace {

class LocFacilityProgram : public NodeProgram {
 public:
  LocFacilityProgram(int index, const OverlayGraph* ov, const RulingSetConfig& cfg)
      : index_(index), ov_(ov) {
    rs_.start(index, ov, cfg);
  }

  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    if (halted_) return;
    ++steps_;
    if (steps_ == 1) {
      for (int j = 1; j <= ctx.n_c; ++j)
        out.push_back(Send{j, Message{ov_->radius_num(index_), ov_->radius_den(index_),
                                      MsgKind::radius}});
      return;
    }
    if (!rs_.done()) {
      rs_.step(ctx, inbox, out);
      return;
    }
    int votes = 0;
    for (const Received& r : inbox)
      if (r.msg.kind == MsgKind::open_vote) ++votes;
    open_ = votes == ctx.n_c;
    for (int j = 1; j <= ctx.n_c; ++j)
      out.push_back(Send{j, Message{open_ ? 1 : 0, 0, MsgKind::open_status}});
    halted_ = true;
  }

  bool halted() const override { return halted_; }

  int index_;
  const OverlayGraph* ov_;
  RsFacilityCore rs_;
  int64_t steps_ = 0;
  bool open_ = false;
  bool halted_ = false;
};

class LocClientProgram : public NodeProgram {
 public:
  LocClientProgram(int index, const Instance* inst, const OverlayGraph* ov,
                   const RulingSetConfig& cfg)
      : index_(index), inst_(inst), ov_(ov) {
    rs_.start(index, ov, cfg);
  }

  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    if (halted_) return;
    ++steps_;
    if (steps_ == 1) return;  // radii in flight
    if (steps_ == 2) {
      int seen = 0;
      for (const Received& r : inbox) {
        if (r.msg.kind != MsgKind::radius) continue;
        ++seen;
        if (r.msg.a != ov_->radius_num(r.from) || r.msg.b != ov_->radius_den(r.from))
          throw SimulationError("broadcast radius disagrees with the local value");
      }
      if (seen != ctx.n_f) throw SimulationError("missing radius broadcast");
    }
    if (!rs_.done()) {
      rs_.step(ctx, inbox, out);
      return;
    }
    if (stage_ == 0) {  // approve unvetoed ruling-set members
      const std::vector<char>& t = rs_.in_T();
      for (int i = 1; i <= ctx.n_f; ++i)
        if (t[i] && !ov_->client_vetoes(index_, i))
          out.push_back(Send{i, Message{1, 0, MsgKind::open_vote}});
      stage_ = 1;
      return;
    }
    if (stage_ == 1) {  // statuses in flight
      stage_ = 2;
      return;
    }
    assign_ = 0;
    int64_t best = 0;
    for (const Received& r : inbox) {
      if (r.msg.kind != MsgKind::open_status || r.msg.a != 1) continue;
      int64_t d = inst_->dist(r.from, index_);
      if (assign_ == 0 || d < best) {  // inbox ascending, so ties keep the lowest id
        assign_ = r.from;
        best = d;
      }
    }
    halted_ = true;
  }

  bool halted() const override { return halted_; }

  int index_;
  const Instance* inst_;
  const OverlayGraph* ov_;
  RsClientCore rs_;
  int64_t steps_ = 0;
  int stage_ = 0;
  int assign_ = 0;
  bool halted_ = false;
};

}  // namespace

LocateResult locate_facilities(const Instance& inst, uint64_t seed, std::string* transcript) {
  RadiusProfile profile = radius_profile(inst);
  OverlayGraph overlay(inst, profile);
  Network net(inst.n_f, inst.n_c, seed, Network::default_scalar_bound(inst), transcript);

  RulingSetConfig cfg;
  std::vector<LocFacilityProgram*> fac(inst.n_f + 1, nullptr);
  std::vector<LocClientProgram*> cli(inst.n_c + 1, nullptr);
  for (int i = 1; i <= inst.n_f; ++i) {
    auto p = std::make_unique<LocFacilityProgram>(i, &overlay, cfg);
    fac[i] = p.get();
    net.install_facility(i, std::move(p));
  }
  for (int j = 1; j <= inst.n_c; ++j) {
    auto p = std::make_unique<LocClientProgram>(j, &inst, &overlay, cfg);
    cli[j] = p.get();
    net.install_client(j, std::move(p));
  }

  int64_t used = net.run_until_halted(cfg.round_cap);

  LocateResult res;
  res.rounds = used;
  res.walk = cli[1]->rs_.stats();
  res.walk.total_mdd_iterations = fac[1]->rs_.total_mdd_iterations();
  if (used != res.walk.rounds + 3) throw SimulationError("pipeline round accounting mismatch");
  if (fac[1]->rs_.walk_iterations() != res.walk.iterations)
    throw SimulationError("walk iteration accounting mismatch");
  for (int j = 2; j <= inst.n_c; ++j)
    if (cli[j]->rs_.in_T() != cli[1]->rs_.in_T())
      throw SimulationError("clients disagree on the ruling set");

  std::vector<int> open;
  for (int i = 1; i <= inst.n_f; ++i)
    if (fac[i]->open_) open.push_back(i);
  res.solution = solution_cost(inst, open);
  for (int j = 1; j <= inst.n_c; ++j)
    if (cli[j]->assign_ != res.solution.assign[j])
      throw SimulationError("protocol assignment disagrees with the cost oracle");
  return res;
}

std::optional<SolutionViolation> verify_solution(const Instance& inst,
                                                 const RadiusProfile& radii,
                                                 const Solution& sol) {
  if (sol.open.empty()) return SolutionViolation{"no facility opened"};
  std::vector<char> open(inst.n_f + 1, 0);
  for (int i : sol.open) {
    if (i < 1 || i > inst.n_f)
      return SolutionViolation{"open id " + std::to_string(i) + " out of range"};
    open[i] = 1;
  }
  for (int j = 1; j <= inst.n_c; ++j) {
    int inside = 0, first = 0;
    for (int i = 1; i <= inst.n_f; ++i) {
      if (!open[i]) continue;
      __int128 lhs = static_cast<__int128>(radii.r[i].den_i64()) * inst.dist(i, j);
      __int128 rhs = radii.r[i].num_i64();
      if (lhs <= rhs) {
        ++inside;
        if (inside == 1)
          first = i;
        else
          return SolutionViolation{"client " + std::to_string(j) + " has open facilities " +
                                   std::to_string(first) + " and " + std::to_string(i) +
                                   " inside their radii"};
      }
    }
  }
  if (static_cast<int>(sol.assign.size()) != inst.n_c + 1)
    return SolutionViolation{"assignment vector has the wrong length"};
  for (int j = 1; j <= inst.n_c; ++j) {
    int best = 0;
    int64_t bd = 0;
    for (int i = 1; i <= inst.n_f; ++i)
      if (open[i] && (best == 0 || inst.dist(i, j) < bd)) {
        best = i;
        bd = inst.dist(i, j);
      }
    if (sol.assign[j] != best)
      return SolutionViolation{"client " + std::to_string(j) + " assigned to " +
                               std::to_string(sol.assign[j]) + ", nearest open is " +
                               std::to_string(best)};
  }
  return std::nullopt;
}

}  // namespace bfl

#include "bfl/congest.hpp"

#include <algorithm>

namespace bfl {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::held_count: return "held_count";
    case MsgKind::ctrl_continue: return "ctrl_continue";
    case MsgKind::ctrl_break: return "ctrl_break";
    case MsgKind::ctrl_abort: return "ctrl_abort";
    case MsgKind::hash_shift: return "hash_shift";
    case MsgKind::edge: return "edge";
    case MsgKind::facility_count: return "facility_count";
    case MsgKind::spread_index: return "spread_index";
    case MsgKind::witness_count: return "witness_count";
    case MsgKind::ctrl_run: return "ctrl_run";
    case MsgKind::ctrl_done: return "ctrl_done";
    case MsgKind::candidacy: return "candidacy";
    case MsgKind::dominated: return "dominated";
    case MsgKind::removed: return "removed";
    case MsgKind::radius: return "radius";
    case MsgKind::open_vote: return "open_vote";
    case MsgKind::open_status: return "open_status";
  }
  return "?";
}

Network::Network(int n_f, int n_c, uint64_t seed, int64_t scalar_bound, std::string* transcript)
    : n_f_(n_f), n_c_(n_c), scalar_bound_(scalar_bound), transcript_(transcript) {
  if (n_f < 1 || n_c < 1) throw std::invalid_argument("network needs n_f >= 1 and n_c >= 1");
  f_prog_.resize(n_f + 1);
  c_prog_.resize(n_c + 1);
  f_inbox_.resize(n_f + 1);
  c_inbox_.resize(n_c + 1);
  f_next_.resize(n_f + 1);
  c_next_.resize(n_c + 1);
  f_rng_.reserve(n_f + 1);
  c_rng_.reserve(n_c + 1);
  for (int i = 0; i <= n_f; ++i) f_rng_.emplace_back(mix_seed(seed, 0x10000000ull + i));
  for (int j = 0; j <= n_c; ++j) c_rng_.emplace_back(mix_seed(seed, 0x20000000ull + j));
}

int64_t Network::default_scalar_bound(int n_f, int n_c, int64_t f_max, int64_t d_max) {
  // Covers ids, counts (<= n_f^2), the final-phase total (<= 48 n_f) and
  // radius numerators (<= n_c * (f_i + nearest distance)).
  int64_t b = static_cast<int64_t>(n_f) * n_f;
  b = std::max(b, static_cast<int64_t>(48) * n_f);
  b = std::max(b, static_cast<int64_t>(n_c));
  b = std::max(b, f_max * n_c + n_c * d_max);
  return b;
}

int64_t Network::default_scalar_bound(const Instance& inst) {
  return default_scalar_bound(inst.n_f, inst.n_c, inst.max_f(), inst.max_d());
}

void Network::install_facility(int i, std::unique_ptr<NodeProgram> p) {
  f_prog_[i] = std::move(p);
}

void Network::install_client(int j, std::unique_ptr<NodeProgram> p) {
  c_prog_[j] = std::move(p);
}

void Network::validate_and_deliver(Side sender_side, int sender, std::vector<Send>& out,
                                   std::vector<uint8_t>& seen) {
  const int opposite = sender_side == Side::facility ? n_c_ : n_f_;
  for (const Send& s : out) {
    if (s.to < 1 || s.to > opposite)
      throw SimulationError("receiver index out of range in round " + std::to_string(round_));
    if (seen[s.to])
      throw SimulationError("bandwidth violation: two messages on one edge in round " +
                            std::to_string(round_));
    seen[s.to] = 1;
    if (s.msg.a < 0 || s.msg.a > scalar_bound_ || s.msg.b < 0 || s.msg.b > scalar_bound_)
      throw SimulationError("payload scalar exceeds declared bound in round " +
                            std::to_string(round_));
    auto& staged = sender_side == Side::facility ? c_staged_ : f_staged_;
    staged.push_back(Delivery{s.to, sender, s.msg});
    if (transcript_) {
      transcript_->append(std::to_string(round_));
      transcript_->push_back(' ');
      transcript_->push_back(sender_side == Side::facility ? 'f' : 'c');
      transcript_->append(std::to_string(sender));
      transcript_->append("->");
      transcript_->push_back(sender_side == Side::facility ? 'c' : 'f');
      transcript_->append(std::to_string(s.to));
      transcript_->push_back(' ');
      transcript_->append(msg_kind_name(s.msg.kind));
      transcript_->push_back(' ');
      transcript_->append(std::to_string(s.msg.a));
      transcript_->push_back(' ');
      transcript_->append(std::to_string(s.msg.b));
      transcript_->push_back('\n');
    }
  }
  for (const Send& s : out) seen[s.to] = 0;
  out.clear();
}

void Network::scatter(std::vector<Delivery>& staged, std::vector<std::vector<Received>>& next,
                      int n) {
  scatter_cnt_.assign(n + 1, 0);
  for (const Delivery& d : staged) ++scatter_cnt_[d.to];
  for (int k = 1; k <= n; ++k) {
    next[k].clear();
    next[k].reserve(scatter_cnt_[k]);
  }
  for (const Delivery& d : staged) next[d.to].push_back(Received{d.from, d.msg});
  staged.clear();
}

void Network::run_round() {
  ++round_;
  std::vector<Send> out;
  std::vector<uint8_t> seen_c(n_c_ + 1, 0), seen_f(n_f_ + 1, 0);
  // Stepping in ascending sender id makes inbox order sorted by sender.
  for (int i = 1; i <= n_f_; ++i) {
    if (!f_prog_[i]) continue;
    NodeContext ctx{round_, &f_rng_[i], n_f_, n_c_};
    f_prog_[i]->step(ctx, f_inbox_[i], out);
    validate_and_deliver(Side::facility, i, out, seen_c);
  }
  for (int j = 1; j <= n_c_; ++j) {
    if (!c_prog_[j]) continue;
    NodeContext ctx{round_, &c_rng_[j], n_f_, n_c_};
    c_prog_[j]->step(ctx, c_inbox_[j], out);
    validate_and_deliver(Side::client, j, out, seen_f);
  }
  scatter(c_staged_, c_next_, n_c_);
  scatter(f_staged_, f_next_, n_f_);
  for (int i = 1; i <= n_f_; ++i) std::swap(f_inbox_[i], f_next_[i]);
  for (int j = 1; j <= n_c_; ++j) std::swap(c_inbox_[j], c_next_[j]);
}

int64_t Network::run_until(const std::function<bool(const Network&)>& pred, int64_t round_cap) {
  int64_t start = round_;
  while (!pred(*this)) {
    if (round_ - start >= round_cap)
      throw SimulationError("round cap " + std::to_string(round_cap) + " exceeded at round " +
                            std::to_string(round_));
    run_round();
  }
  return round_ - start;
}

int64_t Network::run_until_halted(int64_t round_cap) {
  return run_until([](const Network& n) { return n.all_halted(); }, round_cap);
}

bool Network::all_halted() const {
  for (int i = 1; i <= n_f_; ++i)
    if (f_prog_[i] && !f_prog_[i]->halted()) return false;
  for (int j = 1; j <= n_c_; ++j)
    if (c_prog_[j] && !c_prog_[j]->halted()) return false;
  return true;
}

uint64_t Network::node_random_int(Side side, int index, uint64_t range) {
  auto& rng = side == Side::facility ? f_rng_.at(index) : c_rng_.at(index);
  return rng.one_to(range);
}

}  // namespace bfl

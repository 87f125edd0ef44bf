#include "bfl/rulingset.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace bfl {

namespace {
constexpr int64_t kGrid = 9007199254740992LL;  // 2^53
}

int ruling_i_max(int n_f) {
  double x = std::log2(std::log2(static_cast<double>(std::max(n_f, 4))));
  int64_t snap = std::llround(x);
  int c = (std::abs(x - static_cast<double>(snap)) < 1e-9) ? static_cast<int>(snap)
                                                           : static_cast<int>(std::ceil(x));
  return c + 1;
}

double walk_probability(int n_f, int i) {
  return 1.0 / (8.0 * std::pow(static_cast<double>(n_f), std::exp2(-static_cast<double>(i))));
}

std::vector<int> greedy_mis(int n_f, const std::vector<EdgeMessage>& edges,
                            const std::vector<int>& candidates) {
  std::vector<char> cand(n_f + 1, 0), chosen(n_f + 1, 0);
  std::vector<int> ids;
  for (int c : candidates)
    if (c >= 1 && c <= n_f && !cand[c]) {
      cand[c] = 1;
      ids.push_back(c);
    }
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<int>> adj(n_f + 1);
  for (const EdgeMessage& e : edges)
    if (e.u >= 1 && e.v <= n_f && cand[e.u] && cand[e.v]) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  std::vector<int> out;
  for (int c : ids) {
    bool blocked = false;
    for (int nb : adj[c])
      if (chosen[nb]) {
        blocked = true;
        break;
      }
    if (!blocked) {
      chosen[c] = 1;
      out.push_back(c);
    }
  }
  return out;
}

// ---------- client core ----------

void RsClientCore::start(int index, const OverlayGraph* overlay, const RulingSetConfig& cfg) {
  index_ = index;
  ov_ = overlay;
  cfg_ = cfg;
  phase_ = Phase::walk;
  k_ = 0;
  steps_total_ = 0;
  i_max_ = ruling_i_max(overlay->n_f());
  i_ = std::clamp(cfg.initial_i, 0, i_max_);
  active_.assign(overlay->n_f() + 1, 1);
  active_[0] = 0;
  in_T_.assign(overlay->n_f() + 1, 0);
  candidate_.assign(overlay->n_f() + 1, 0);
  m_list_.clear();
  cur_mdd_iters_ = 0;
  stats_ = RulingSetStats{};
}

void RsClientCore::begin_iteration(std::vector<Send>& out) {
  if (index_ == 1)
    stats_.trace.push_back(WalkStep{i_, ov_->edge_count_among(active_), false, 0});
  out.push_back(Send{1, Message{ov_->witness_count(index_, active_), 0, MsgKind::witness_count}});
  k_ = 1;
}

void RsClientCore::success_sends(std::vector<Send>& out) {
  std::vector<int> mis = greedy_mis(ov_->n_f(), mdd_.held(), m_list_);
  for (int m : mis) in_T_[m] = 1;
  for (int i : ov_->dominated_by(index_, candidate_, active_))
    out.push_back(Send{i, Message{1, 0, MsgKind::dominated}});
  if (index_ == 1) {
    stats_.trace.back().success = true;
    stats_.trace.back().mdd_iterations = cur_mdd_iters_;
    ++stats_.iterations;
    ++stats_.successes;
  }
}

void RsClientCore::step(NodeContext& ctx, const std::vector<Received>& inbox,
                        std::vector<Send>& out) {
  if (phase_ == Phase::done) return;
  ++steps_total_;

  if (phase_ == Phase::walk) {
    if (k_ == 0) {
      begin_iteration(out);
      return;
    }
    if (k_ == 1 || k_ == 3) {
      ++k_;
      return;
    }
    if (k_ == 2) {
      const Received* ctrl = nullptr;
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::ctrl_run || r.msg.kind == MsgKind::ctrl_done) ctrl = &r;
      if (!ctrl) throw SimulationError("client missing walk control");
      if (index_ == 1)
        for (int i = 1; i <= ctx.n_f; ++i)
          out.push_back(Send{i, Message{0, 0, ctrl->msg.kind}});
      if (ctrl->msg.kind == MsgKind::ctrl_done) {
        if (index_ == 1 && !stats_.trace.empty()) {
          stats_.final_active_edges = stats_.trace.back().active_edges;
          stats_.trace.pop_back();
        }
        for (int i = 1; i <= ctx.n_f; ++i)
          if (active_[i]) in_T_[i] = 1;
        stats_.in_T = in_T_;
        for (int i = 1; i <= ctx.n_f; ++i)
          if (in_T_[i]) stats_.ruling.push_back(i);
        stats_.rounds = steps_total_ + 1;  // facilities read the forward next round
        phase_ = Phase::done;
        return;
      }
      ++k_;
      return;
    }
    // k 4: candidacy bits arrived; assemble H[M] witnesses and start hashing
    candidate_.assign(ctx.n_f + 1, 0);
    m_list_.clear();
    for (const Received& r : inbox)
      if (r.msg.kind == MsgKind::candidacy && r.msg.a == 1) {
        candidate_[r.from] = 1;
        m_list_.push_back(r.from);
      }
    mdd_.start(index_, ov_->witness_edges(index_, candidate_));
    cur_mdd_iters_ = 0;
    phase_ = Phase::mdd;
  }

  if (phase_ == Phase::mdd) {
    if (index_ == 1)
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::ctrl_continue) ++cur_mdd_iters_;
    mdd_.step(ctx, inbox, out);
    if (mdd_.done()) {
      if (mdd_.aborted()) {
        if (index_ == 1) {
          stats_.trace.back().mdd_iterations = cur_mdd_iters_;
          ++stats_.iterations;
          ++stats_.timeouts;
        }
        i_ = std::max(i_ - 1, 0);
        candidate_.assign(ctx.n_f + 1, 0);
        m_list_.clear();
        phase_ = Phase::walk;
        k_ = 0;  // counts go out next round, one round behind the facilities' abort read
        return;
      }
      if (k_ == 7 + 2 * mdd_.broadcast_rounds()) {
        success_sends(out);
        phase_ = Phase::await_removed;
      } else {
        phase_ = Phase::await_dominated;  // instant break finished a round early
      }
    }
    ++k_;
    return;
  }

  if (phase_ == Phase::await_dominated) {
    success_sends(out);
    phase_ = Phase::await_removed;
    ++k_;
    return;
  }

  // await_removed: idle while facilities fold in the dominated bits, then the
  // removed broadcasts arrive and this round doubles as the next k 0.
  if (k_ == 8 + 2 * mdd_.broadcast_rounds()) {
    ++k_;
    return;
  }
  for (const Received& r : inbox)
    if (r.msg.kind == MsgKind::removed && r.msg.a == 1) active_[r.from] = 0;
  i_ = std::min(i_ + 1, i_max_);
  candidate_.assign(ctx.n_f + 1, 0);
  m_list_.clear();
  phase_ = Phase::walk;
  begin_iteration(out);
}

// ---------- facility core ----------

void RsFacilityCore::start(int index, const OverlayGraph* overlay, const RulingSetConfig& cfg) {
  index_ = index;
  ov_ = overlay;
  cfg_ = cfg;
  mdd_cap_ = cfg.mdd_cap > 0 ? cfg.mdd_cap : mdd_iteration_cap(overlay->n_f(), overlay->n_c());
  phase_ = Phase::walk;
  k_ = 0;
  i_max_ = ruling_i_max(overlay->n_f());
  i_ = std::clamp(cfg.initial_i, 0, i_max_);
  active_ = true;
  in_M_ = false;
  completed_ = 0;
  total_mdd_iterations_ = 0;
}

void RsFacilityCore::step(NodeContext& ctx, const std::vector<Received>& inbox,
                          std::vector<Send>& out) {
  if (phase_ == Phase::done) return;

  if (phase_ == Phase::walk) {
    if (k_ == 0 || k_ == 2) {
      ++k_;
      return;
    }
    if (k_ == 1) {
      if (index_ == 1) {
        int64_t sum = 0;
        for (const Received& r : inbox)
          if (r.msg.kind == MsgKind::witness_count) sum += r.msg.a;
        bool stop = sum == 0 || (cfg_.max_iterations > 0 && completed_ >= cfg_.max_iterations);
        MsgKind kind = stop ? MsgKind::ctrl_done : MsgKind::ctrl_run;
        for (int j = 1; j <= ctx.n_c; ++j) out.push_back(Send{j, Message{0, 0, kind}});
      }
      ++k_;
      return;
    }
    // k 3: control forwarded by y1
    const Received* ctrl = nullptr;
    for (const Received& r : inbox)
      if (r.msg.kind == MsgKind::ctrl_run || r.msg.kind == MsgKind::ctrl_done) ctrl = &r;
    if (!ctrl) throw SimulationError("facility missing walk control");
    if (ctrl->msg.kind == MsgKind::ctrl_done) {
      phase_ = Phase::done;
      return;
    }
    in_M_ = false;
    if (active_) {
      int64_t tau = std::llround(walk_probability(ctx.n_f, i_) * static_cast<double>(kGrid));
      tau = std::clamp<int64_t>(tau, 1, kGrid);
      in_M_ = ctx.rng->one_to(kGrid) <= static_cast<uint64_t>(tau);
      for (int j = 1; j <= ctx.n_c; ++j)
        out.push_back(Send{j, Message{in_M_ ? 1 : 0, 0, MsgKind::candidacy}});
    }
    mdd_.start(index_, mdd_cap_);
    phase_ = Phase::mdd;
    ++k_;
    return;
  }

  if (phase_ == Phase::mdd) {
    mdd_.step(ctx, inbox, out);
    ++k_;
    if (mdd_.done()) {
      total_mdd_iterations_ += mdd_.iterations_done();
      if (mdd_.aborted()) {
        i_ = std::max(i_ - 1, 0);
        in_M_ = false;
        ++completed_;
        phase_ = Phase::walk;
        k_ = 1;  // this round was the next iteration's k 0
      } else {
        phase_ = Phase::await_dominated;
      }
    }
    return;
  }

  // await_dominated
  if (k_ == 8 + 2 * mdd_.broadcast_rounds()) {
    bool hit = false;
    for (const Received& r : inbox)
      if (r.msg.kind == MsgKind::dominated) hit = true;
    if (active_ && (in_M_ || hit)) {
      active_ = false;
      for (int j = 1; j <= ctx.n_c; ++j)
        out.push_back(Send{j, Message{1, 0, MsgKind::removed}});
    }
    i_ = std::min(i_ + 1, i_max_);
    in_M_ = false;
    ++completed_;
    phase_ = Phase::walk;
    k_ = 0;  // clients restart next round; k 0 is facility-idle
    return;
  }
  ++k_;
}

// ---------- standalone driver ----------

namespace {

class RsClientProgram : public NodeProgram {
 public:
  RsClientProgram(int index, const OverlayGraph* ov, const RulingSetConfig& cfg) {
    core_.start(index, ov, cfg);
  }
  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    core_.step(ctx, inbox, out);
  }
  bool halted() const override { return core_.done(); }
  RsClientCore core_;
};

class RsFacilityProgram : public NodeProgram {
 public:
  RsFacilityProgram(int index, const OverlayGraph* ov, const RulingSetConfig& cfg) {
    core_.start(index, ov, cfg);
  }
  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    core_.step(ctx, inbox, out);
  }
  bool halted() const override { return core_.done(); }
  RsFacilityCore core_;
};

}  // namespace

RulingSetStats compute_2ruling_set(Network& net, const OverlayGraph& overlay,
                                   const RulingSetConfig& cfg) {
  if (net.n_f() != overlay.n_f() || net.n_c() != overlay.n_c())
    throw std::invalid_argument("network and overlay sizes disagree");

  RsFacilityProgram* x1 = nullptr;
  std::vector<RsClientProgram*> clients(net.n_c() + 1, nullptr);
  for (int i = 1; i <= net.n_f(); ++i) {
    auto p = std::make_unique<RsFacilityProgram>(i, &overlay, cfg);
    if (i == 1) x1 = p.get();
    net.install_facility(i, std::move(p));
  }
  for (int j = 1; j <= net.n_c(); ++j) {
    auto p = std::make_unique<RsClientProgram>(j, &overlay, cfg);
    clients[j] = p.get();
    net.install_client(j, std::move(p));
  }

  int64_t used = net.run_until_halted(cfg.round_cap);
  RulingSetStats stats = clients[1]->core_.stats();
  stats.total_mdd_iterations = x1->core_.total_mdd_iterations();
  if (stats.rounds != used) throw SimulationError("walk round accounting mismatch");
  if (x1->core_.walk_iterations() != stats.iterations)
    throw SimulationError("walk iteration accounting mismatch");
  for (int j = 2; j <= net.n_c(); ++j) {
    if (clients[j]->core_.in_T() != clients[1]->core_.in_T())
      throw SimulationError("clients disagree on the ruling set");
    if (clients[j]->core_.active() != clients[1]->core_.active())
      throw SimulationError("clients disagree on the active set");
  }
  return stats;
}

std::optional<RulingViolation> verify_ruling(const OverlayGraph& overlay,
                                             const std::vector<int>& ruling) {
  const int n_f = overlay.n_f();
  std::vector<char> t(n_f + 1, 0);
  for (int i : ruling) {
    if (i < 1 || i > n_f) return RulingViolation{"ruling id " + std::to_string(i) + " out of range"};
    t[i] = 1;
  }
  std::vector<std::vector<int>> adj(n_f + 1);
  for (const EdgeMessage& e : overlay.edges()) {
    if (t[e.u] && t[e.v])
      return RulingViolation{"members " + std::to_string(e.u) + " and " + std::to_string(e.v) +
                             " are adjacent"};
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<int> dist(n_f + 1, -1);
  std::deque<int> q;
  for (int i = 1; i <= n_f; ++i)
    if (t[i]) {
      dist[i] = 0;
      q.push_back(i);
    }
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  for (int i = 1; i <= n_f; ++i)
    if (dist[i] < 0 || dist[i] > 2)
      return RulingViolation{"facility " + std::to_string(i) + " is not within 2 hops"};
  return std::nullopt;
}

}  // namespace bfl

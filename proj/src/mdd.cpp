#include "bfl/mdd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfl {

int64_t message_index(int n_f, EdgeMessage e) {
  return static_cast<int64_t>(e.u - 1) * n_f + e.v;
}

int64_t message_group(int n_f, int64_t index) { return (index + n_f - 1) / n_f; }

int hash_message(int n_f, int64_t index, const std::vector<int64_t>& shifts) {
  int64_t g = message_group(n_f, index);
  return static_cast<int>(((index - 1) % n_f + shifts[g]) % n_f + 1);
}

std::vector<EdgeMessage> normalize_edges(int n_f, std::vector<EdgeMessage> edges) {
  for (const EdgeMessage& e : edges)
    if (e.u < 1 || e.v <= e.u || e.v > n_f)
      throw std::invalid_argument("edge message must satisfy 1 <= u < v <= n_f");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

int mdd_iteration_cap(int n_f, int n_c) {
  int m = std::max(std::min(n_f, n_c), 4);
  double it = 7.0 * std::log2(std::log2(static_cast<double>(m)));
  return std::max(7, static_cast<int>(std::ceil(it)));
}

// ---------- client core ----------

void MddClientCore::start(int index, std::vector<EdgeMessage> initial) {
  index_ = index;
  mode_ = Mode::hashing;
  rel_ = 0;
  held_ = std::move(initial);
  std::sort(held_.begin(), held_.end());
  held_.erase(std::unique(held_.begin(), held_.end()), held_.end());
  spread_queue_.clear();
  spread_start_ = total_ = bcast_rounds_ = 0;
}

void MddClientCore::merge_edges(const std::vector<Received>& inbox) {
  size_t before = held_.size();
  for (const Received& r : inbox)
    if (r.msg.kind == MsgKind::edge)
      held_.push_back(EdgeMessage{static_cast<int32_t>(r.msg.a), static_cast<int32_t>(r.msg.b)});
  if (held_.size() != before) {
    std::sort(held_.begin(), held_.end());
    held_.erase(std::unique(held_.begin(), held_.end()), held_.end());
  }
}

void MddClientCore::step(NodeContext& ctx, const std::vector<Received>& inbox,
                         std::vector<Send>& out) {
  if (done()) return;
  const int n_f = ctx.n_f;

  if (mode_ == Mode::spreading) {
    // Own chunks go out at rel 3+t; broadcast arrivals land at rel 4+B..3+2B.
    int64_t t = rel_ - 3;
    if (t >= 0 && t * n_f < static_cast<int64_t>(spread_queue_.size())) {
      int64_t lo = t * n_f;
      int64_t hi = std::min<int64_t>(lo + n_f, spread_queue_.size());
      for (int64_t q = lo; q < hi; ++q) {
        int dest = static_cast<int>((spread_start_ + q) % n_f + 1);
        out.push_back(Send{dest, Message{spread_queue_[q].u, spread_queue_[q].v, MsgKind::edge}});
      }
    }
    if (rel_ >= 4 + bcast_rounds_) {
      // held_ stays sorted; only the new arrivals need a sort, the rest is a
      // linear merge. Re-sorting the whole buffer every round dominated the
      // profile at n = 4096.
      size_t mid = held_.size();
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::edge)
          held_.push_back(
              EdgeMessage{static_cast<int32_t>(r.msg.a), static_cast<int32_t>(r.msg.b)});
      if (held_.size() != mid) {
        std::sort(held_.begin() + mid, held_.end());
        std::inplace_merge(held_.begin(), held_.begin() + mid, held_.end());
        held_.erase(std::unique(held_.begin(), held_.end()), held_.end());
      }
    }
    if (rel_ >= 3 + 2 * bcast_rounds_) mode_ = Mode::succeeded;
    ++rel_;
    return;
  }

  switch (rel_ % 8) {
    case 0: {
      merge_edges(inbox);
      out.push_back(Send{1, Message{static_cast<int64_t>(held_.size()), 0, MsgKind::held_count}});
      break;
    }
    case 2: {
      const Received* ctrl = nullptr;
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::ctrl_continue || r.msg.kind == MsgKind::ctrl_break ||
            r.msg.kind == MsgKind::ctrl_abort)
          ctrl = &r;
      if (!ctrl) throw SimulationError("client missing control message");
      if (index_ == 1)
        for (int i = 1; i <= n_f; ++i)
          out.push_back(Send{i, Message{0, ctrl->msg.b, ctrl->msg.kind}});
      if (ctrl->msg.kind == MsgKind::ctrl_abort) {
        mode_ = Mode::aborted;
        return;
      }
      if (ctrl->msg.kind == MsgKind::ctrl_break) {
        spread_start_ = ctrl->msg.a;
        total_ = ctrl->msg.b;
        bcast_rounds_ = (total_ + n_f - 1) / n_f;
        spread_queue_ = std::move(held_);
        held_.clear();
        if (bcast_rounds_ == 0) {
          mode_ = Mode::succeeded;
          return;
        }
        mode_ = Mode::spreading;
      }
      break;
    }
    case 4: {
      // Shared hash known; choose one message per destination, route
      // leftovers to unused facilities in ascending order, keep the rest.
      std::vector<int64_t> shifts(n_f + 1, 0);
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::hash_shift) shifts[r.from] = r.msg.a;

      std::vector<std::pair<int, EdgeMessage>> routed;  // (dest, edge), held_ is sorted
      routed.reserve(held_.size());
      for (const EdgeMessage& e : held_)
        routed.emplace_back(hash_message(n_f, message_index(n_f, e), shifts), e);
      std::stable_sort(routed.begin(), routed.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });

      std::vector<uint8_t> used(n_f + 1, 0);
      std::vector<EdgeMessage> leftovers;
      for (size_t lo = 0; lo < routed.size();) {
        size_t hi = lo;
        while (hi < routed.size() && routed[hi].first == routed[lo].first) ++hi;
        size_t pick = lo + ctx.rng->below(hi - lo);
        out.push_back(Send{routed[lo].first,
                           Message{routed[pick].second.u, routed[pick].second.v, MsgKind::edge}});
        used[routed[lo].first] = 1;
        for (size_t k = lo; k < hi; ++k)
          if (k != pick) leftovers.push_back(routed[k].second);
        lo = hi;
      }
      std::sort(leftovers.begin(), leftovers.end());
      held_.clear();
      int dest = 1;
      for (const EdgeMessage& e : leftovers) {
        while (dest <= n_f && used[dest]) ++dest;
        if (dest > n_f) {
          held_.push_back(e);  // unassignable tail stays for the next iteration
        } else {
          out.push_back(Send{dest, Message{e.u, e.v, MsgKind::edge}});
          used[dest] = 1;
        }
      }
      std::sort(held_.begin(), held_.end());
      break;
    }
    case 6: {
      if (index_ == 1) {
        // Prefix sums of deduped facility counts, mod n_c.
        int64_t running = 0;
        for (const Received& r : inbox) {
          if (r.msg.kind != MsgKind::facility_count) continue;
          out.push_back(Send{r.from, Message{running % ctx.n_c, 0, MsgKind::spread_index}});
          running += r.msg.a;
        }
      }
      break;
    }
    default:
      break;
  }
  ++rel_;
  if (rel_ == 8) rel_ = 0;
}

// ---------- facility core ----------

void MddFacilityCore::start(int index, int iteration_cap) {
  index_ = index;
  iteration_cap_ = iteration_cap;
  mode_ = Mode::hashing;
  rel_ = 0;
  iterations_done_ = 0;
  held_.clear();
  total_ = bcast_rounds_ = 0;
}

void MddFacilityCore::merge_edges(const std::vector<Received>& inbox) {
  for (const Received& r : inbox)
    if (r.msg.kind == MsgKind::edge)
      held_.push_back(EdgeMessage{static_cast<int32_t>(r.msg.a), static_cast<int32_t>(r.msg.b)});
  std::sort(held_.begin(), held_.end());
  held_.erase(std::unique(held_.begin(), held_.end()), held_.end());
}

void MddFacilityCore::step(NodeContext& ctx, const std::vector<Received>& inbox,
                           std::vector<Send>& out) {
  if (done()) return;
  const int n_f = ctx.n_f;
  const int n_c = ctx.n_c;

  if (mode_ == Mode::collecting) {
    // Spread arrivals land at rel 4..3+B; broadcast slot t is rel 3+B+t.
    if (rel_ <= 3 + bcast_rounds_) merge_edges(inbox);
    int64_t t = rel_ - (3 + bcast_rounds_);
    if (t >= 0 && t < static_cast<int64_t>(held_.size()))
      for (int j = 1; j <= n_c; ++j)
        out.push_back(Send{j, Message{held_[t].u, held_[t].v, MsgKind::edge}});
    if (rel_ >= 2 + 2 * bcast_rounds_) mode_ = Mode::succeeded;
    ++rel_;
    return;
  }

  switch (rel_ % 8) {
    case 1: {
      if (index_ == 1) {
        int64_t sum = 0;
        for (const Received& r : inbox)
          if (r.msg.kind == MsgKind::held_count) sum += r.msg.a;
        if (sum <= 48LL * n_f) {
          int64_t prefix = 0;
          for (const Received& r : inbox) {
            if (r.msg.kind != MsgKind::held_count) continue;
            out.push_back(Send{r.from, Message{prefix, sum, MsgKind::ctrl_break}});
            prefix += r.msg.a;
          }
        } else if (iterations_done_ >= iteration_cap_) {
          for (int j = 1; j <= n_c; ++j)
            out.push_back(Send{j, Message{0, 0, MsgKind::ctrl_abort}});
        } else {
          ++iterations_done_;
          for (int j = 1; j <= n_c; ++j)
            out.push_back(Send{j, Message{0, 0, MsgKind::ctrl_continue}});
        }
      }
      break;
    }
    case 3: {
      const Received* ctrl = nullptr;
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::ctrl_continue || r.msg.kind == MsgKind::ctrl_break ||
            r.msg.kind == MsgKind::ctrl_abort)
          ctrl = &r;
      if (!ctrl) throw SimulationError("facility missing control message");
      if (ctrl->msg.kind == MsgKind::ctrl_abort) {
        mode_ = Mode::aborted;
        return;
      }
      if (ctrl->msg.kind == MsgKind::ctrl_break) {
        total_ = ctrl->msg.b;
        bcast_rounds_ = (total_ + n_f - 1) / n_f;
        if (bcast_rounds_ == 0) {
          mode_ = Mode::succeeded;
          return;
        }
        held_.clear();
        mode_ = Mode::collecting;
        ++rel_;
        return;
      }
      int64_t shift = static_cast<int64_t>(ctx.rng->one_to(n_f));
      for (int j = 1; j <= n_c; ++j)
        out.push_back(Send{j, Message{shift, 0, MsgKind::hash_shift}});
      break;
    }
    case 5: {
      held_.clear();
      merge_edges(inbox);
      out.push_back(Send{1, Message{static_cast<int64_t>(held_.size()), 0,
                                    MsgKind::facility_count}});
      break;
    }
    case 7: {
      int64_t c = -1;
      for (const Received& r : inbox)
        if (r.msg.kind == MsgKind::spread_index) c = r.msg.a;
      if (c < 0) throw SimulationError("facility missing spread index");
      for (size_t k = 0; k < held_.size(); ++k) {
        int dest = static_cast<int>((c + static_cast<int64_t>(k)) % n_c + 1);
        out.push_back(Send{dest, Message{held_[k].u, held_[k].v, MsgKind::edge}});
      }
      held_.clear();
      break;
    }
    default:
      break;
  }
  ++rel_;
  if (rel_ == 8) rel_ = 0;
}

// ---------- standalone driver ----------

namespace {

class MddClientProgram : public NodeProgram {
 public:
  MddClientProgram(int index, std::vector<EdgeMessage> initial) {
    core_.start(index, std::move(initial));
  }
  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    core_.step(ctx, inbox, out);
  }
  bool halted() const override { return core_.done(); }
  MddClientCore core_;
};

class MddFacilityProgram : public NodeProgram {
 public:
  MddFacilityProgram(int index, int cap) { core_.start(index, cap); }
  void step(NodeContext& ctx, const std::vector<Received>& inbox,
            std::vector<Send>& out) override {
    core_.step(ctx, inbox, out);
  }
  bool halted() const override { return core_.done(); }
  MddFacilityCore core_;
};

}  // namespace

DisseminateResult disseminate(Network& net,
                              const std::vector<std::vector<EdgeMessage>>& witness_sets,
                              int iteration_cap) {
  const int n_f = net.n_f(), n_c = net.n_c();
  if (static_cast<int>(witness_sets.size()) != n_c + 1)
    throw std::invalid_argument("witness_sets must have n_c + 1 entries (index 0 unused)");

  DisseminateResult res;
  std::vector<MddClientProgram*> clients(n_c + 1, nullptr);
  MddFacilityProgram* coord = nullptr;
  for (int i = 1; i <= n_f; ++i) {
    auto p = std::make_unique<MddFacilityProgram>(i, iteration_cap);
    if (i == 1) coord = p.get();
    net.install_facility(i, std::move(p));
  }
  for (int j = 1; j <= n_c; ++j) {
    auto normalized = normalize_edges(n_f, witness_sets[j]);
    res.initial_total_copies += static_cast<int64_t>(normalized.size());
    auto p = std::make_unique<MddClientProgram>(j, std::move(normalized));
    clients[j] = p.get();
    net.install_client(j, std::move(p));
  }

  res.rounds = net.run_until_halted(1'000'000);
  res.iterations = coord->core_.iterations_done();
  res.success = true;
  for (int j = 1; j <= n_c; ++j) res.success = res.success && clients[j]->core_.succeeded();
  res.final_sets.resize(n_c + 1);
  for (int j = 1; j <= n_c; ++j) res.final_sets[j] = clients[j]->core_.held();
  return res;
}

}  // namespace bfl

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfl/congest.hpp"
#include "bfl/mdd.hpp"
#include "bfl/overlay.hpp"

namespace bfl {

struct RulingSetConfig {
  int initial_i = 1;       // starting probability state
  int max_iterations = 0;  // >0 stops the walk early (measurement hook; the
                           // returned set is then not a valid ruling set)
  int mdd_cap = 0;         // 0 = mdd_iteration_cap(n_f, n_c)
  int64_t round_cap = 2'000'000;
};

// ceil(log2 log2 n_f) + 1, n_f clamped to >= 4.
int ruling_i_max(int n_f);
// p_i = 1 / (8 * n_f^(2^-i)); drives the Bernoulli draw only.
double walk_probability(int n_f, int i);

// Ascending-id greedy MIS over candidates; edges outside the candidate set
// are ignored. Isolated candidates are always included.
std::vector<int> greedy_mis(int n_f, const std::vector<EdgeMessage>& edges,
                            const std::vector<int>& candidates);

struct WalkStep {
  int i = 0;
  int64_t active_edges = 0;
  bool success = false;
  int mdd_iterations = 0;
};

struct RulingSetStats {
  std::vector<int> ruling;  // ascending facility ids
  std::vector<char> in_T;   // 1-based flags
  int64_t rounds = 0;
  int iterations = 0;
  int successes = 0;
  int timeouts = 0;
  int64_t total_mdd_iterations = 0;
  int64_t final_active_edges = 0;
  std::vector<WalkStep> trace;
};

// One walk iteration, k = rounds since the iteration start:
//   k 0: clients send witnessed-active-pair counts to x1
//   k 1: x1 answers ctrl_run, or ctrl_done when the sum is zero
//   k 2: clients read it; y1 forwards to facilities; on done clients add all
//        still-active facilities to T and stop
//   k 3: facilities read it (done: stop); active ones draw candidacy with
//        probability p_i and broadcast the bit
//   k 4+R: embedded dissemination of the witnessed H[M] edges, R as in mdd
//   success (B = final-phase broadcast rounds): clients hold E(H[M]) at
//        k 7+2B, compute the shared greedy MIS, send dominated bits; at
//        k 8+2B facilities in M or hit by a bit deactivate and broadcast
//        removed; at k 9+2B clients update their active view and the next
//        iteration's k 0 runs in the same round; i <- min(i+1, i_max)
//   timeout: the dissemination abort reaches clients at k 8*cap+6 and
//        facilities one round later, which doubles as the next iteration's
//        k 0; i <- max(i-1, 0)
class RsClientCore {
 public:
  void start(int index, const OverlayGraph* overlay, const RulingSetConfig& cfg);
  void step(NodeContext& ctx, const std::vector<Received>& inbox, std::vector<Send>& out);
  bool done() const { return phase_ == Phase::done; }
  const std::vector<char>& in_T() const { return in_T_; }
  const std::vector<char>& active() const { return active_; }
  const RulingSetStats& stats() const { return stats_; }  // tracked on client 1

 private:
  enum class Phase { walk, mdd, await_dominated, await_removed, done };
  void begin_iteration(std::vector<Send>& out);
  void success_sends(std::vector<Send>& out);

  int index_ = 0;
  const OverlayGraph* ov_ = nullptr;
  RulingSetConfig cfg_;
  Phase phase_ = Phase::walk;
  int64_t k_ = 0;
  int i_ = 1;
  int i_max_ = 1;
  std::vector<char> active_, in_T_, candidate_;
  std::vector<int> m_list_;
  MddClientCore mdd_;
  int cur_mdd_iters_ = 0;
  int64_t steps_total_ = 0;
  RulingSetStats stats_;
};

class RsFacilityCore {
 public:
  void start(int index, const OverlayGraph* overlay, const RulingSetConfig& cfg);
  void step(NodeContext& ctx, const std::vector<Received>& inbox, std::vector<Send>& out);
  bool done() const { return phase_ == Phase::done; }
  bool active() const { return active_; }
  int walk_iterations() const { return completed_; }
  int64_t total_mdd_iterations() const { return total_mdd_iterations_; }

 private:
  enum class Phase { walk, mdd, await_dominated, done };

  int index_ = 0;
  const OverlayGraph* ov_ = nullptr;
  RulingSetConfig cfg_;
  int mdd_cap_ = 0;
  Phase phase_ = Phase::walk;
  int64_t k_ = 0;
  int i_ = 1;
  int i_max_ = 1;
  bool active_ = true;
  bool in_M_ = false;
  MddFacilityCore mdd_;
  int completed_ = 0;
  int64_t total_mdd_iterations_ = 0;
};

// Runs the walk on a fresh network over the given overlay; deterministic per
// the network seed. All clients end with identical T and active views (the
// driver checks). stats.rounds counts through the facilities' done round.
RulingSetStats compute_2ruling_set(Network& net, const OverlayGraph& overlay,
                                   const RulingSetConfig& cfg = {});

struct RulingViolation {
  std::string what;
};

// Independence over E(H) plus 2-hop coverage of every facility, by BFS.
std::optional<RulingViolation> verify_ruling(const OverlayGraph& overlay,
                                             const std::vector<int>& ruling);

}  // namespace bfl

#pragma once

#include <cstdint>
#include <vector>

#include "bfl/congest.hpp"

namespace bfl {

// Canonical undirected facility pair, u < v.
struct EdgeMessage {
  int32_t u = 0;
  int32_t v = 0;
  friend auto operator<=>(const EdgeMessage&, const EdgeMessage&) = default;
};

// Universe index of a pair: (u-1)*n_f + v, in 1..n_f^2.
int64_t message_index(int n_f, EdgeMessage e);
// Group of an index: ceil(index / n_f), in 1..n_f.
int64_t message_group(int n_f, int64_t index);
// Shared cyclic-shift hash; shifts[g] in 1..n_f is group g's shift,
// broadcast by facility g. h = ((index-1) mod n_f + shift_g) mod n_f + 1.
int hash_message(int n_f, int64_t index, const std::vector<int64_t>& shifts);

// Sorts, dedupes and validates edges for one client.
std::vector<EdgeMessage> normalize_edges(int n_f, std::vector<EdgeMessage> edges);

// Client-side state machine for one dissemination run. Embeddable: the first
// step must land on the same network round for every core of the run.
//
// Round schedule, rel = rounds since iteration start:
//   rel 0: merge rebalanced edges, send held count to x1
//   rel 1: (x1 decides)
//   rel 2: read ctrl; y1 forwards it to facilities
//   continue: rel 4 read shifts, deliver hashed edges + leftovers
//   break:    rel 3+t send spread chunk t; rel 4+B..3+2B collect broadcasts
class MddClientCore {
 public:
  void start(int index, std::vector<EdgeMessage> initial);
  void step(NodeContext& ctx, const std::vector<Received>& inbox, std::vector<Send>& out);
  bool done() const { return mode_ == Mode::succeeded || mode_ == Mode::aborted; }
  bool succeeded() const { return mode_ == Mode::succeeded; }
  bool aborted() const { return mode_ == Mode::aborted; }
  const std::vector<EdgeMessage>& held() const { return held_; }
  int64_t broadcast_rounds() const { return bcast_rounds_; }

 private:
  enum class Mode { hashing, spreading, succeeded, aborted };
  void merge_edges(const std::vector<Received>& inbox);

  int index_ = 0;
  Mode mode_ = Mode::hashing;
  int64_t rel_ = 0;
  std::vector<EdgeMessage> held_;
  std::vector<EdgeMessage> spread_queue_;
  int64_t spread_start_ = 0;
  int64_t total_ = 0;
  int64_t bcast_rounds_ = 0;
};

// Facility-side counterpart. Facility 1 doubles as the coordinator that sums
// client counts and decides continue / break / abort against iteration_cap.
class MddFacilityCore {
 public:
  void start(int index, int iteration_cap);
  void step(NodeContext& ctx, const std::vector<Received>& inbox, std::vector<Send>& out);
  bool done() const { return mode_ == Mode::succeeded || mode_ == Mode::aborted; }
  bool succeeded() const { return mode_ == Mode::succeeded; }
  bool aborted() const { return mode_ == Mode::aborted; }
  int iterations_done() const { return iterations_done_; }
  int64_t broadcast_rounds() const { return bcast_rounds_; }

 private:
  enum class Mode { hashing, collecting, succeeded, aborted };
  void merge_edges(const std::vector<Received>& inbox);

  int index_ = 0;
  int iteration_cap_ = 0;
  Mode mode_ = Mode::hashing;
  int64_t rel_ = 0;
  int iterations_done_ = 0;
  std::vector<EdgeMessage> held_;
  int64_t total_ = 0;
  int64_t bcast_rounds_ = 0;
};

struct DisseminateResult {
  bool success = false;
  int64_t rounds = 0;
  int iterations = 0;  // hashing iterations performed
  int64_t initial_total_copies = 0;
  std::vector<std::vector<EdgeMessage>> final_sets;  // per client, index 0 unused
};

// Runs one dissemination over a fresh network. witness_sets is 1-based per
// client; every edge must be canonical within n_f. On timeout the abort has
// already been broadcast and final_sets carries the partial state.
DisseminateResult disseminate(Network& net,
                              const std::vector<std::vector<EdgeMessage>>& witness_sets,
                              int iteration_cap);

// max(7, ceil(7 * log2 log2 min(n_f, n_c))), the min clamped to >= 4.
int mdd_iteration_cap(int n_f, int n_c);

}  // namespace bfl

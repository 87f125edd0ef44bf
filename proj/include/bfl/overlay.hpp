#pragma once

#include <cstdint>
#include <vector>

#include "bfl/instance.hpp"
#include "bfl/mdd.hpp"

namespace bfl {

// Facility graph H: an edge {i,i'} exists iff both share a radius class and
// some client y has D(x_i,y) + D(x_{i'},y) <= r_i + r_{i'}. Edges live only
// as client witness records; every query below is parameterized by a single
// client index and uses only that client's distance column plus the radii,
// which all clients know after the broadcast round.
//
// All comparisons are exact: with r_i = num_i/den_i the witness test for a
// pair is A_i*den_{i'} + A_{i'}*den_i <= 0 where A_i = den_i*D(x_i,y) - num_i,
// evaluated in 128-bit arithmetic (inputs are capped at 10^12 by validation).
class OverlayGraph {
 public:
  OverlayGraph(const Instance& inst, const RadiusProfile& profile);

  int n_f() const { return inst_->n_f; }
  int n_c() const { return inst_->n_c; }
  int num_classes() const { return num_classes_; }
  int class_of(int i) const { return class_of_[i]; }
  int64_t radius_num(int i) const { return num_[i]; }
  int64_t radius_den(int i) const { return den_[i]; }

  // Pair test for client j; false when the classes differ.
  bool witnesses(int j, int i, int i2) const;

  // Number of witnessed pairs among flagged facilities (flags are 1-based).
  int64_t witness_count(int j, const std::vector<char>& active) const;

  // Witnessed pairs among flagged facilities, canonical and sorted.
  std::vector<EdgeMessage> witness_edges(int j, const std::vector<char>& members) const;

  // Active non-candidates that client j sees adjacent to some candidate.
  std::vector<int> dominated_by(int j, const std::vector<char>& candidate,
                                const std::vector<char>& active) const;

  // Opening veto: some facility of a strictly lower class has
  // D(x_i,y_j) + D(x_{i'},y_j) <= 2*r_i from client j's viewpoint.
  bool client_vetoes(int j, int i) const;

  // Logical E(H) over all facilities, materialized at construction.
  const std::vector<EdgeMessage>& edges() const { return edges_; }
  int64_t edge_count_among(const std::vector<char>& active) const;

 private:
  int64_t slack_num(int i, int j) const {  // den_i*D(i,j) - num_i
    return den_[i] * inst_->dist(i, j) - num_[i];
  }
  bool pair_le(int j, int i, int i2) const;

  const Instance* inst_;
  std::vector<int64_t> num_, den_;
  std::vector<int> class_of_;
  int num_classes_ = 0;
  std::vector<std::vector<int>> class_members_;
  // Per client: all facility ids, grouped by class, ascending by slack value.
  std::vector<int32_t> ord_;
  std::vector<int> class_offset_;
  // Per client per class: min distance to any facility of a strictly lower class.
  std::vector<int64_t> lower_min_;
  std::vector<EdgeMessage> edges_;
};

}  // namespace bfl

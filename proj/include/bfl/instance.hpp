#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfl/rational.hpp"

namespace bfl {

// Bipartite facility location instance. Facilities and clients are 1-based;
// index 0 of every per-node vector is an unused sentinel.
struct Instance {
  int n_f = 0;
  int n_c = 0;
  std::vector<int64_t> f;  // opening costs, f[1..n_f], all > 0
  std::vector<int64_t> d;  // (n_f+1) x (n_c+1) row-major distance matrix

  int64_t dist(int i, int j) const { return d[static_cast<size_t>(i) * (n_c + 1) + j]; }
  int64_t& dist(int i, int j) { return d[static_cast<size_t>(i) * (n_c + 1) + j]; }

  static Instance blank(int n_f, int n_c);
  int64_t max_f() const;
  int64_t max_d() const;
};

struct MetricViolation {
  std::string what;
};

// Checks f > 0, D >= 0 and the bipartite triangle inequality
// D(i,j) + D(i',j) + D(i',j') >= D(i,j'). Full sweep when n_f*n_c <= 64,
// a seeded sample of quadruples above that.
std::optional<MetricViolation> validate_metric(const Instance& inst, uint64_t sample_seed = 1);

// Seeded L1 instance on an integer grid; span 4*max(n_f, n_c, 4).
// f_max = 0 picks the default 4*span.
Instance generate_instance(int n_f, int n_c, uint64_t seed, int64_t f_max = 0);
int64_t generator_span(int n_f, int n_c);

Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst);
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);

// Characteristic radius: the unique r with sum_{y in B(x_i, r)} (r - D(x_i, y)) = f_i.
Rational compute_radius(const Instance& inst, int i);

struct RadiusProfile {
  std::vector<Rational> r;   // r[1..n_f]
  Rational r0;               // min radius
  std::vector<int> class_of; // class k holds 3^k * r0 <= r_i < 3^(k+1) * r0
  int num_classes = 0;
};

RadiusProfile radius_profile(const Instance& inst);

// Distance between facilities through their best shared client:
// min_y (D(i,y) + D(i',y)). Note fd(i,i) = 2 * min_y D(i,y), not 0.
int64_t facility_distance(const Instance& inst, int i, int i2);

// rbar_j = min_i (r_i + D(i,j)).
Rational rbar(const Instance& inst, const RadiusProfile& profile, int j);
Rational rbar_sum(const Instance& inst, const RadiusProfile& profile);

// charge(y_j, F) = D(F, y_j) + sum_{i in F} max(0, r_i - D(i,j)).
// Summed over clients this equals the exact cost of F.
Rational charge(const Instance& inst, const RadiusProfile& profile,
                const std::vector<int>& open_set, int j);

struct Solution {
  std::vector<int> open;    // ascending facility ids, nonempty
  std::vector<int> assign;  // assign[1..n_c] = serving facility (nearest open, lowest id on ties)
  Rational cost;
};

Solution solution_cost(const Instance& inst, const std::vector<int>& open_set);

}  // namespace bfl

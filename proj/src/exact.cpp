#include "bfl/exact.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bfl {

Solution mettu_plaxton(const Instance& inst, const RadiusProfile& profile) {
  std::vector<int> order(inst.n_f);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return profile.r[a] < profile.r[b]; });

  std::vector<int> open;
  // dmin[i] = facility_distance(i, opened set), maintained incrementally.
  std::vector<int64_t> dmin(inst.n_f + 1, INT64_MAX);
  for (int i : order) {
    if (open.empty() || Rational(dmin[i]) > Rational(2) * profile.r[i]) {
      open.push_back(i);
      for (int k = 1; k <= inst.n_f; ++k)
        dmin[k] = std::min(dmin[k], facility_distance(inst, k, i));
    }
  }
  std::sort(open.begin(), open.end());
  return solution_cost(inst, open);
}

Solution brute_force_opt(const Instance& inst) {
  if (inst.n_f > 20) throw std::invalid_argument("brute_force_opt is limited to n_f <= 20");
  const uint32_t limit = 1u << inst.n_f;
  int64_t best_cost = INT64_MAX;
  std::vector<int> best_open;
  std::vector<int> open;
  for (uint32_t mask = 1; mask < limit; ++mask) {
    open.clear();
    for (int i = 1; i <= inst.n_f; ++i)
      if (mask & (1u << (i - 1))) open.push_back(i);
    int64_t total = 0;
    for (int i : open) total += inst.f[i];
    int j = 1;
    for (; j <= inst.n_c && total < best_cost; ++j) {
      int64_t conn = INT64_MAX;
      for (int i : open) conn = std::min(conn, inst.dist(i, j));
      total += conn;
    }
    // A pruned scan leaves total partial; ties are only real on full scans.
    if (total < best_cost ||
        (j > inst.n_c && total == best_cost &&
         std::lexicographical_compare(open.begin(), open.end(), best_open.begin(),
                                      best_open.end()))) {
      best_cost = total;
      best_open = open;
    }
  }
  return solution_cost(inst, best_open);
}

std::optional<SparsenessViolation> verify_mp_sparseness(const Instance& inst,
                                                        const RadiusProfile& profile,
                                                        const std::vector<int>& open_set) {
  for (size_t a = 0; a < open_set.size(); ++a)
    for (size_t b = a + 1; b < open_set.size(); ++b) {
      int i = open_set[a], i2 = open_set[b];
      Rational bound = Rational(2) * std::max(profile.r[i], profile.r[i2]);
      if (!(Rational(facility_distance(inst, i, i2)) > bound)) {
        std::ostringstream os;
        os << "opened pair (" << i << "," << i2 << ") violates sparseness";
        return SparsenessViolation{i, i2, os.str()};
      }
    }
  return std::nullopt;
}

}  // namespace bfl

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfl/instance.hpp"

namespace bfl {

// Sequential baseline: scan facilities by nondecreasing radius (ties by id),
// open when the facility distance to the opened set exceeds twice the radius.
Solution mettu_plaxton(const Instance& inst, const RadiusProfile& profile);

// Exhaustive optimum over all nonempty subsets; ties resolved toward the
// lexicographically smallest open set. Guarded to n_f <= 20.
Solution brute_force_opt(const Instance& inst);

struct SparsenessViolation {
  int i = 0, i2 = 0;
  std::string what;
};

// Opened pairs must satisfy facility_distance(i, i2) > 2 * max(r_i, r_i2).
std::optional<SparsenessViolation> verify_mp_sparseness(const Instance& inst,
                                                        const RadiusProfile& profile,
                                                        const std::vector<int>& open_set);

}  // namespace bfl

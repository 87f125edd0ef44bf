#pragma once

#include <optional>
#include <string>

#include "bfl/congest.hpp"
#include "bfl/instance.hpp"
#include "bfl/overlay.hpp"
#include "bfl/rulingset.hpp"

namespace bfl {

struct LocateResult {
  Solution solution;
  int64_t rounds = 0;
  RulingSetStats walk;
};

// End-to-end pipeline: radius broadcast (1 round), ruling-set walk over the
// class overlay, one voting round, one status round, one assignment round.
// rounds == walk.rounds + 3, asserted. Deterministic per seed.
LocateResult locate_facilities(const Instance& inst, uint64_t seed,
                               std::string* transcript = nullptr);

struct SolutionViolation {
  std::string what;
};

// (a) per client at most one open facility inside its radius,
// (b) nonempty open set, (c) nearest-open lowest-id assignment.
std::optional<SolutionViolation> verify_solution(const Instance& inst,
                                                 const RadiusProfile& radii,
                                                 const Solution& sol);

}  // namespace bfl

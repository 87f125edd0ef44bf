#include "bfl/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "bfl/exact.hpp"
#include "bfl/locate.hpp"
#include "bfl/overlay.hpp"

namespace bfl {

std::vector<BenchRow> run_bench(const BenchOptions& opt) {
  std::vector<BenchRow> rows;
  for (int n : opt.sizes) {
    if (n < 1) throw std::invalid_argument("bench size must be positive");
    for (int t = 0; t < opt.trials; ++t) {
      uint64_t seed = opt.seed_base + static_cast<uint64_t>(t);
      Instance inst = generate_instance(n, n, seed);
      LocateResult res = locate_facilities(inst, seed);

      RadiusProfile profile = radius_profile(inst);
      OverlayGraph overlay(inst, profile);
      if (auto v = verify_ruling(overlay, res.walk.ruling))
        throw std::runtime_error("bench cell n=" + std::to_string(n) + " seed=" +
                                 std::to_string(seed) + ": " + v->what);
      if (auto v = verify_solution(inst, profile, res.solution))
        throw std::runtime_error("bench cell n=" + std::to_string(n) + " seed=" +
                                 std::to_string(seed) + ": " + v->what);

      Solution mp = mettu_plaxton(inst, profile);
      rows.push_back(BenchRow{n, n, seed, res.rounds, res.walk.total_mdd_iterations,
                              res.solution.cost / mp.cost});
    }
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.n_f != b.n_f) return a.n_f < b.n_f;
    return a.seed < b.seed;
  });
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "n_f,n_c,seed,rounds,mdd_iterations,cost_ratio_vs_mp\n";
  char buf[64];
  for (const BenchRow& r : rows) {
    out += std::to_string(r.n_f) + ',' + std::to_string(r.n_c) + ',' + std::to_string(r.seed) +
           ',' + std::to_string(r.rounds) + ',' + std::to_string(r.mdd_iterations) + ',';
    std::snprintf(buf, sizeof buf, "%.6f", r.cost_ratio_vs_mp.to_double());
    out += buf;
    out += '\n';
  }
  return out;
}

}  // namespace bfl

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bfl/instance.hpp"

namespace bfl {

struct BenchRow {
  int n_f = 0;
  int n_c = 0;
  uint64_t seed = 0;
  int64_t rounds = 0;
  int64_t mdd_iterations = 0;
  Rational cost_ratio_vs_mp;
};

struct BenchOptions {
  std::vector<int> sizes;  // square instances, n_f = n_c = n
  int trials = 20;
  uint64_t seed_base = 1;
};

// Runs the full pipeline on every (size, seed) cell, re-verifying the ruling
// set and the solution; any violation throws. Rows come back sorted by
// (n_f, seed).
std::vector<BenchRow> run_bench(const BenchOptions& opt);

std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace bfl

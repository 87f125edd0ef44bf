#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bfl::cli {

int cmd_gen(int n_f, int n_c, uint64_t seed, int64_t f_max, const std::string& out_path);
int cmd_run(const std::string& instance_path, const std::string& algorithm, uint64_t seed,
            const std::string& out_path);
int cmd_bench(const std::vector<int>& sizes, int trials, uint64_t seed,
              const std::string& out_path);
int cmd_verify(const std::string& instance_path);

int run_main(int argc, char** argv);

}  // namespace bfl::cli

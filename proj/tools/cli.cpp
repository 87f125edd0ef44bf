#include "cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfl/bench.hpp"
#include "bfl/exact.hpp"
#include "bfl/instance.hpp"
#include "bfl/locate.hpp"
#include "bfl/overlay.hpp"
#include "bfl/rulingset.hpp"

namespace bfl::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out_path);
  f << text;
}

std::vector<int> tail(const std::vector<int>& v) { return {v.begin() + 1, v.end()}; }

}  // namespace

int cmd_gen(int n_f, int n_c, uint64_t seed, int64_t f_max, const std::string& out_path) {
  if (out_path.empty()) throw std::runtime_error("gen requires --out");
  Instance inst = generate_instance(n_f, n_c, seed, f_max);
  save_instance(inst, out_path);
  std::cout << "wrote " << out_path << ": n_f=" << n_f << " n_c=" << n_c << " seed=" << seed
            << " max_f=" << inst.max_f() << " max_d=" << inst.max_d() << "\n";
  return 0;
}

int cmd_run(const std::string& instance_path, const std::string& algorithm, uint64_t seed,
            const std::string& out_path) {
  Instance inst = load_instance(instance_path);
  RadiusProfile profile = radius_profile(inst);

  ordered_json j;
  j["algorithm"] = algorithm;
  j["instance"] = instance_path;
  j["n_f"] = inst.n_f;
  j["n_c"] = inst.n_c;
  bool ok = true;

  if (algorithm == "locate") {
    j["seed"] = seed;
    LocateResult res = locate_facilities(inst, seed);
    j["cost"] = res.solution.cost.str();
    j["open"] = res.solution.open;
    j["assign"] = tail(res.solution.assign);
    j["rounds"] = res.rounds;
    ordered_json walk;
    walk["iterations"] = res.walk.iterations;
    walk["successes"] = res.walk.successes;
    walk["timeouts"] = res.walk.timeouts;
    walk["mdd_iterations"] = res.walk.total_mdd_iterations;
    walk["ruling"] = res.walk.ruling;
    ordered_json trace = ordered_json::array();
    for (const WalkStep& s : res.walk.trace) {
      ordered_json e;
      e["i"] = s.i;
      e["active_edges"] = s.active_edges;
      e["success"] = s.success;
      e["mdd_iterations"] = s.mdd_iterations;
      trace.push_back(e);
    }
    walk["trace"] = trace;
    j["walk"] = walk;
    if (inst.n_f <= 12) {
      Solution opt = brute_force_opt(inst);
      j["ratio_vs_opt"] = (res.solution.cost / opt.cost).to_double();
    }
    OverlayGraph overlay(inst, profile);
    auto sv = verify_solution(inst, profile, res.solution);
    auto rv = verify_ruling(overlay, res.walk.ruling);
    ordered_json verdicts;
    verdicts["solution"] = sv ? sv->what : "ok";
    verdicts["ruling"] = rv ? rv->what : "ok";
    j["verify"] = verdicts;
    ok = !sv && !rv;
  } else if (algorithm == "mp") {
    Solution mp = mettu_plaxton(inst, profile);
    j["cost"] = mp.cost.str();
    j["open"] = mp.open;
    j["assign"] = tail(mp.assign);
    auto v = verify_mp_sparseness(inst, profile, mp.open);
    ordered_json verdicts;
    verdicts["sparseness"] = v ? v->what : "ok";
    j["verify"] = verdicts;
    ok = !v;
  } else if (algorithm == "opt") {
    Solution opt = brute_force_opt(inst);
    j["cost"] = opt.cost.str();
    j["open"] = opt.open;
    j["assign"] = tail(opt.assign);
  } else {
    throw std::runtime_error("unknown algorithm: " + algorithm);
  }

  emit(j.dump(2) + "\n", out_path);
  return ok ? 0 : 1;
}

int cmd_bench(const std::vector<int>& sizes, int trials, uint64_t seed,
              const std::string& out_path) {
  BenchOptions opt;
  opt.sizes = sizes;
  opt.trials = trials;
  opt.seed_base = seed;
  std::vector<BenchRow> rows = run_bench(opt);
  emit(bench_csv(rows), out_path);
  std::cerr << "bench: " << rows.size() << " cells, all verifications passed\n";
  return 0;
}

int cmd_verify(const std::string& instance_path) {
  Instance inst = load_instance(instance_path);
  std::cout << "ok: n_f=" << inst.n_f << " n_c=" << inst.n_c << " max_f=" << inst.max_f()
            << " max_d=" << inst.max_d() << "\n";
  return 0;
}

int run_main(int argc, char** argv) {
  CLI::App app{"synchronous bipartite facility location simulator"};
  app.require_subcommand(1);

  int n_f = 8, n_c = 32, trials = 20;
  uint64_t seed = 1;
  int64_t f_max = 0;
  std::string out, algorithm = "locate", path;
  std::vector<int> sizes{64, 256, 1024};

  CLI::App* gen = app.add_subcommand("gen", "generate a seeded instance");
  gen->add_option("n_f", n_f, "facility count")->required();
  gen->add_option("n_c", n_c, "client count")->required();
  gen->add_option("seed_arg", seed, "generator seed");
  gen->add_option("--seed", seed, "generator seed")->excludes("seed_arg");
  gen->add_option("--f-max", f_max, "opening cost bound (0 = 4x grid span)");
  gen->add_option("--out", out, "output instance path")->required();

  CLI::App* run = app.add_subcommand("run", "run one algorithm on an instance");
  run->add_option("instance", path, "instance path")->required();
  run->add_option("--algorithm", algorithm, "locate | mp | opt")
      ->check(CLI::IsMember({"locate", "mp", "opt"}));
  run->add_option("--seed", seed, "simulation seed");
  run->add_option("--out", out, "result JSON path (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "run the size/seed grid, emit CSV");
  bench->add_option("--sizes", sizes, "square sizes")->delimiter(',');
  bench->add_option("--trials", trials, "seeds per size");
  bench->add_option("--seed", seed, "base seed");
  bench->add_option("--out", out, "CSV path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "validate an instance file");
  verify->add_option("instance", path, "instance path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) return cmd_gen(n_f, n_c, seed, f_max, out);
    if (run->parsed()) return cmd_run(path, algorithm, seed, out);
    if (bench->parsed()) return cmd_bench(sizes, trials, seed, out);
    if (verify->parsed()) return cmd_verify(path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace bfl::cli

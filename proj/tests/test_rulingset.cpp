#include <doctest.h>

#include <cmath>

#include "bfl/overlay.hpp"
#include "bfl/rulingset.hpp"

using namespace bfl;

namespace {

// One client at distance 0 from every facility; f_i = r_i, so radii and
// classes are dialed in directly.
Instance radii_instance(const std::vector<int64_t>& fs) {
  Instance inst = Instance::blank(static_cast<int>(fs.size()), 1);
  for (size_t i = 0; i < fs.size(); ++i) {
    inst.f[i + 1] = fs[i];
    inst.dist(static_cast<int>(i) + 1, 1) = 0;
  }
  return inst;
}

RulingSetStats run_walk(const Instance& inst, uint64_t seed, RulingSetConfig cfg = {}) {
  RadiusProfile p = radius_profile(inst);
  OverlayGraph ov(inst, p);
  Network net(inst.n_f, inst.n_c, seed, Network::default_scalar_bound(inst));
  return compute_2ruling_set(net, ov, cfg);
}

}  // namespace

TEST_CASE("probability ladder endpoints are pinned") {
  CHECK(ruling_i_max(4) == 2);
  CHECK(ruling_i_max(16) == 3);
  CHECK(ruling_i_max(64) == 4);
  CHECK(ruling_i_max(256) == 4);
  CHECK(ruling_i_max(4096) == 5);
  CHECK(ruling_i_max(2) == 2);  // clamped to 4
  CHECK(ruling_i_max(5) == 3);

  CHECK(walk_probability(64, 0) == doctest::Approx(1.0 / 512));
  CHECK(walk_probability(64, 1) == doctest::Approx(1.0 / 64));
  CHECK(walk_probability(16, 1) == doctest::Approx(1.0 / 32));
  CHECK(walk_probability(256, 2) == doctest::Approx(1.0 / 32));
}

TEST_CASE("greedy MIS picks lowest ids first") {
  CHECK(greedy_mis(3, {{1, 2}, {2, 3}}, {1, 2, 3}) == std::vector<int>{1, 3});
  CHECK(greedy_mis(4, {}, {1, 2, 3, 4}) == std::vector<int>{1, 2, 3, 4});
  CHECK(greedy_mis(4, {{2, 3}}, {2, 3, 4}) == std::vector<int>{2, 4});
  // edges touching non-candidates do not block
  CHECK(greedy_mis(4, {{1, 2}, {3, 4}}, {2, 3}) == std::vector<int>{2, 3});
  // complete graph keeps only the smallest
  CHECK(greedy_mis(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}, {1, 2, 3, 4}) ==
        std::vector<int>{1});
  CHECK(greedy_mis(4, {{1, 2}}, {}).empty());
}

TEST_CASE("edgeless overlay finishes in one probe with everyone ruling") {
  Instance inst = radii_instance({1, 3, 9, 27});  // four distinct classes
  RadiusProfile p = radius_profile(inst);
  OverlayGraph ov(inst, p);
  CHECK(ov.edges().empty());

  Network net(4, 1, 11, Network::default_scalar_bound(inst));
  RulingSetStats st = compute_2ruling_set(net, ov, {});
  CHECK(st.ruling == std::vector<int>{1, 2, 3, 4});
  CHECK(st.iterations == 0);
  CHECK(st.rounds == 4);  // count, decide, client done, facility done
  CHECK(st.trace.empty());
  CHECK(st.final_active_edges == 0);
  CHECK_FALSE(verify_ruling(ov, st.ruling).has_value());
}

TEST_CASE("complete overlay shrinks to a single ruler") {
  Instance inst = radii_instance({5, 5, 5, 5, 5});
  RadiusProfile p = radius_profile(inst);
  OverlayGraph ov(inst, p);
  CHECK(ov.edges().size() == 10);  // co-located same-class clique

  for (uint64_t seed = 1; seed <= 10; ++seed) {
    RulingSetStats st = run_walk(inst, seed);
    CHECK(st.ruling.size() == 1);
    CHECK_FALSE(verify_ruling(ov, st.ruling).has_value());
    CHECK(st.iterations == st.successes + st.timeouts);
    CHECK(st.iterations == static_cast<int>(st.trace.size()));
    CHECK(st.final_active_edges == 0);
    int i_max = ruling_i_max(inst.n_f);
    for (const WalkStep& w : st.trace) {
      CHECK(w.i >= 0);
      CHECK(w.i <= i_max);
    }
  }
}

TEST_CASE("seeded walks always produce verified 2-ruling sets") {
  for (uint64_t seed = 1; seed <= 12; ++seed) {
    int n = 8 << (seed % 3);  // 8, 16, 32
    Instance inst = generate_instance(n, n, seed);
    RadiusProfile p = radius_profile(inst);
    OverlayGraph ov(inst, p);
    Network net(n, n, seed * 7, Network::default_scalar_bound(inst));
    RulingSetStats st = compute_2ruling_set(net, ov, {});
    CHECK_FALSE(verify_ruling(ov, st.ruling).has_value());
    CHECK(st.rounds >= 4);
    CHECK(st.iterations == static_cast<int>(st.trace.size()));
  }
}

TEST_CASE("ruling checker catches bad sets") {
  Instance inst = radii_instance({5, 5, 5});
  RadiusProfile p = radius_profile(inst);
  OverlayGraph ov(inst, p);

  auto adjacent = verify_ruling(ov, {1, 2});
  REQUIRE(adjacent.has_value());
  CHECK(adjacent->what.find("adjacent") != std::string::npos);

  auto uncovered = verify_ruling(ov, {});
  REQUIRE(uncovered.has_value());
  CHECK(uncovered->what.find("2 hops") != std::string::npos);

  CHECK(verify_ruling(ov, {7}).has_value());
  CHECK_FALSE(verify_ruling(ov, {2}).has_value());

  Instance far = radii_instance({1, 27});  // classes 0 and 3, no edges
  RadiusProfile fp = radius_profile(far);
  OverlayGraph fov(far, fp);
  CHECK(verify_ruling(fov, {1}).has_value());  // facility 2 has no path to the set
}

TEST_CASE("iteration limit freezes the walk for measurements") {
  Instance inst = radii_instance({5, 5, 5, 5, 5, 5, 5, 5});
  RulingSetConfig cfg;
  cfg.max_iterations = 1;
  cfg.initial_i = 2;
  RulingSetStats st = run_walk(inst, 21, cfg);
  CHECK(st.iterations == 1);
  CHECK(st.trace.size() == 1);
  CHECK(st.trace[0].i == 2);
  CHECK(st.trace[0].active_edges == 28);
  // the popped probe recorded how many edges iteration 1 left behind
  CHECK(st.final_active_edges <= 28);
}

TEST_CASE("initial state is clamped into the ladder") {
  Instance inst = radii_instance({5, 5});
  RulingSetConfig cfg;
  cfg.initial_i = 99;
  RulingSetStats st = run_walk(inst, 3, cfg);
  int i_max = ruling_i_max(2);
  for (const WalkStep& w : st.trace) CHECK(w.i <= i_max);
  CHECK_FALSE(st.ruling.empty());
}

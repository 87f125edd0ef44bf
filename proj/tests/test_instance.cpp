#include <doctest.h>

#include <cstdio>
#include <string>

#include "bfl/instance.hpp"

using namespace bfl;

namespace {

Instance single_facility(int64_t f, const std::vector<int64_t>& dists) {
  Instance inst = Instance::blank(1, static_cast<int>(dists.size()));
  inst.f[1] = f;
  for (size_t j = 0; j < dists.size(); ++j) inst.dist(1, static_cast<int>(j) + 1) = dists[j];
  return inst;
}

Instance two_by_two() {
  Instance inst = Instance::blank(2, 2);
  inst.f[1] = 1;
  inst.f[2] = 1;
  inst.dist(1, 1) = 1;
  inst.dist(1, 2) = 5;
  inst.dist(2, 1) = 4;
  inst.dist(2, 2) = 2;
  return inst;
}

// Piecewise-linear ball load at radius r, the quantity the radius pins to f.
Rational ball_load(const Instance& inst, int i, const Rational& r) {
  Rational s(0);
  for (int j = 1; j <= inst.n_c; ++j)
    if (Rational(inst.dist(i, j)) <= r) s += r - Rational(inst.dist(i, j));
  return s;
}

}  // namespace

TEST_CASE("characteristic radius on pinned instances") {
  CHECK(compute_radius(single_facility(3, {1, 2, 4}), 1) == Rational(3));
  CHECK(compute_radius(single_facility(1, {10, 10}), 1) == Rational(21, 2));
  CHECK(compute_radius(single_facility(5, {7}), 1) == Rational(12));
  CHECK(compute_radius(single_facility(2, {0, 0}), 1) == Rational(1));
}

TEST_CASE("radius satisfies the defining equation exactly and uniquely") {
  for (uint64_t seed = 1; seed <= 50; ++seed) {
    Instance inst = generate_instance(1 + static_cast<int>(seed % 6), 12, seed);
    for (int i = 1; i <= inst.n_f; ++i) {
      Rational r = compute_radius(inst, i);
      CHECK(r > Rational(0));
      CHECK(ball_load(inst, i, r) == Rational(inst.f[i]));
      Rational eps(1, 997);
      CHECK(ball_load(inst, i, r - eps) < Rational(inst.f[i]));
      CHECK(ball_load(inst, i, r + eps) > Rational(inst.f[i]));

      // independent bisection oracle
      double lo = 0.0, hi = static_cast<double>(inst.max_d() + inst.f[i]) + 1.0;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double s = 0;
        for (int j = 1; j <= inst.n_c; ++j)
          if (static_cast<double>(inst.dist(i, j)) <= mid)
            s += mid - static_cast<double>(inst.dist(i, j));
        (s < static_cast<double>(inst.f[i]) ? lo : hi) = mid;
      }
      CHECK(std::abs(r.to_double() - lo) < 1e-6);
    }
  }
}

TEST_CASE("class partition uses half-open powers of three") {
  Instance inst = Instance::blank(5, 1);
  int64_t fs[] = {1, 2, 3, 9, 28};  // one client at distance 0 makes r_i = f_i
  for (int i = 1; i <= 5; ++i) {
    inst.f[i] = fs[i - 1];
    inst.dist(i, 1) = 0;
  }
  RadiusProfile p = radius_profile(inst);
  CHECK(p.r0 == Rational(1));
  CHECK(p.r[1] == Rational(1));
  CHECK(p.r[5] == Rational(28));
  CHECK(p.class_of[1] == 0);
  CHECK(p.class_of[2] == 0);  // 2 < 3
  CHECK(p.class_of[3] == 1);  // boundary lands in the upper class
  CHECK(p.class_of[4] == 2);
  CHECK(p.class_of[5] == 3);  // 27 <= 28 < 81
  CHECK(p.num_classes == 4);
}

TEST_CASE("facility distance routes through the best shared client") {
  Instance inst = two_by_two();
  CHECK(facility_distance(inst, 1, 2) == 5);
  CHECK(facility_distance(inst, 2, 1) == 5);
  CHECK(facility_distance(inst, 1, 1) == 2);  // self distance is twice the nearest client
  CHECK(facility_distance(inst, 2, 2) == 4);
}

TEST_CASE("solution cost and assignment on a pinned instance") {
  Instance inst = two_by_two();
  Solution s1 = solution_cost(inst, {1});
  CHECK(s1.cost == Rational(7));
  CHECK(s1.assign[1] == 1);
  CHECK(s1.assign[2] == 1);
  Solution s12 = solution_cost(inst, {1, 2});
  CHECK(s12.cost == Rational(5));
  CHECK(s12.assign[1] == 1);
  CHECK(s12.assign[2] == 2);

  inst.dist(2, 1) = 1;  // tie at client 1 resolves to the lowest id
  Solution tie = solution_cost(inst, {1, 2});
  CHECK(tie.assign[1] == 1);
}

TEST_CASE("rbar lower-bound ingredients") {
  Instance inst = two_by_two();
  RadiusProfile p = radius_profile(inst);
  CHECK(p.r[1] == Rational(2));
  CHECK(p.r[2] == Rational(3));
  CHECK(rbar(inst, p, 1) == Rational(3));
  CHECK(rbar(inst, p, 2) == Rational(5));
  CHECK(rbar_sum(inst, p) == Rational(8));
}

TEST_CASE("charge shares sum to the exact cost") {
  for (uint64_t seed = 1; seed <= 25; ++seed) {
    Instance inst = generate_instance(6, 10, seed);
    RadiusProfile p = radius_profile(inst);
    std::vector<std::vector<int>> subsets = {{1}, {2, 5}, {1, 3, 6}, {1, 2, 3, 4, 5, 6}, {4}};
    for (const auto& open : subsets) {
      Rational total(0);
      for (int j = 1; j <= inst.n_c; ++j) total += charge(inst, p, open, j);
      CHECK(total == solution_cost(inst, open).cost);
    }
  }
}

TEST_CASE("metric validation accepts generated instances") {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = generate_instance(5, 9, seed);
    CHECK_FALSE(validate_metric(inst).has_value());
  }
}

TEST_CASE("metric validation rejects bad inputs") {
  Instance q = Instance::blank(2, 2);
  q.f[1] = q.f[2] = 1;
  q.dist(1, 1) = 1;
  q.dist(1, 2) = 100;  // 100 > 1 + 1 + 1 breaks the four-point inequality
  q.dist(2, 1) = 1;
  q.dist(2, 2) = 1;
  CHECK(validate_metric(q).has_value());

  Instance z = two_by_two();
  z.f[1] = 0;
  CHECK(validate_metric(z).has_value());
  z.f[1] = -3;
  CHECK(validate_metric(z).has_value());

  Instance neg = two_by_two();
  neg.dist(1, 1) = -1;
  CHECK(validate_metric(neg).has_value());

  Instance huge = two_by_two();
  huge.f[1] = 2'000'000'000'000LL;
  CHECK(validate_metric(huge).has_value());
  Instance far = two_by_two();
  far.dist(1, 1) = 2'000'000'000'000LL;
  CHECK(validate_metric(far).has_value());
}

TEST_CASE("generator is deterministic and in range") {
  Instance a = generate_instance(8, 32, 7);
  Instance b = generate_instance(8, 32, 7);
  CHECK(a.f == b.f);
  CHECK(a.d == b.d);
  CHECK(generate_instance(8, 32, 8).d != a.d);

  int64_t span = generator_span(8, 32);
  CHECK(span == 128);
  CHECK(a.max_d() <= 2 * span);
  CHECK(a.max_f() <= 4 * span);
  for (int i = 1; i <= a.n_f; ++i) CHECK(a.f[i] >= 1);
  CHECK_FALSE(validate_metric(a).has_value());
}

TEST_CASE("json io round-trips") {
  Instance a = generate_instance(4, 6, 11);
  Instance b = instance_from_json(instance_to_json(a));
  CHECK(a.n_f == b.n_f);
  CHECK(a.n_c == b.n_c);
  CHECK(a.f == b.f);
  CHECK(a.d == b.d);

  std::string path = "test_instance_roundtrip.json";
  save_instance(a, path);
  Instance c = load_instance(path);
  CHECK(a.d == c.d);
  std::remove(path.c_str());

  CHECK_THROWS(instance_from_json("not json"));
  Instance bad = two_by_two();
  bad.f[1] = 0;
  CHECK_THROWS(instance_from_json(instance_to_json(bad)));
}

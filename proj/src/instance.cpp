#include "bfl/instance.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bfl/rng.hpp"

namespace bfl {

Instance Instance::blank(int n_f, int n_c) {
  if (n_f < 1 || n_c < 1) throw std::invalid_argument("instance needs n_f >= 1 and n_c >= 1");
  Instance inst;
  inst.n_f = n_f;
  inst.n_c = n_c;
  inst.f.assign(n_f + 1, 0);
  inst.d.assign(static_cast<size_t>(n_f + 1) * (n_c + 1), 0);
  return inst;
}

int64_t Instance::max_f() const {
  int64_t m = 0;
  for (int i = 1; i <= n_f; ++i) m = std::max(m, f[i]);
  return m;
}

int64_t Instance::max_d() const {
  int64_t m = 0;
  for (int i = 1; i <= n_f; ++i)
    for (int j = 1; j <= n_c; ++j) m = std::max(m, dist(i, j));
  return m;
}

std::optional<MetricViolation> validate_metric(const Instance& inst, uint64_t sample_seed) {
  for (int i = 1; i <= inst.n_f; ++i)
    if (inst.f[i] <= 0)
      return MetricViolation{"opening cost f[" + std::to_string(i) + "] must be positive"};
  // The 10^12 cap keeps every derived quantity (radius numerators, witness
  // cross-products) inside int64/int128 without overflow checks downstream.
  constexpr int64_t kMaxCost = 1'000'000'000'000LL;
  for (int i = 1; i <= inst.n_f; ++i)
    if (inst.f[i] > kMaxCost)
      return MetricViolation{"opening cost f[" + std::to_string(i) + "] exceeds 10^12"};
  for (int i = 1; i <= inst.n_f; ++i)
    for (int j = 1; j <= inst.n_c; ++j) {
      if (inst.dist(i, j) < 0)
        return MetricViolation{"negative distance at (" + std::to_string(i) + "," +
                               std::to_string(j) + ")"};
      if (inst.dist(i, j) > kMaxCost)
        return MetricViolation{"distance at (" + std::to_string(i) + "," + std::to_string(j) +
                               ") exceeds 10^12"};
    }

  auto quad = [&](int i, int j, int i2, int j2) -> bool {
    return inst.dist(i, j) + inst.dist(i2, j) + inst.dist(i2, j2) >= inst.dist(i, j2);
  };
  auto report = [](int i, int j, int i2, int j2) {
    std::ostringstream os;
    os << "bipartite triangle inequality fails for (x" << i << ",y" << j << ",x" << i2 << ",y"
       << j2 << ")";
    return MetricViolation{os.str()};
  };

  if (static_cast<int64_t>(inst.n_f) * inst.n_c <= 64) {
    for (int i = 1; i <= inst.n_f; ++i)
      for (int j = 1; j <= inst.n_c; ++j)
        for (int i2 = 1; i2 <= inst.n_f; ++i2)
          for (int j2 = 1; j2 <= inst.n_c; ++j2)
            if (!quad(i, j, i2, j2)) return report(i, j, i2, j2);
    return std::nullopt;
  }

  Rng rng(mix_seed(sample_seed, 0x6d657472u));
  for (int t = 0; t < 200000; ++t) {
    int i = static_cast<int>(rng.one_to(inst.n_f));
    int i2 = static_cast<int>(rng.one_to(inst.n_f));
    int j = static_cast<int>(rng.one_to(inst.n_c));
    int j2 = static_cast<int>(rng.one_to(inst.n_c));
    if (!quad(i, j, i2, j2)) return report(i, j, i2, j2);
  }
  return std::nullopt;
}

int64_t generator_span(int n_f, int n_c) { return 4 * std::max({n_f, n_c, 4}); }

Instance generate_instance(int n_f, int n_c, uint64_t seed, int64_t f_max) {
  Instance inst = Instance::blank(n_f, n_c);
  int64_t span = generator_span(n_f, n_c);
  if (f_max <= 0) f_max = 4 * span;
  Rng rng(mix_seed(seed, 0x67656e69u));

  std::vector<std::pair<int64_t, int64_t>> fp(n_f + 1), cp(n_c + 1);
  for (int i = 1; i <= n_f; ++i) fp[i] = {static_cast<int64_t>(rng.below(span + 1)),
                                          static_cast<int64_t>(rng.below(span + 1))};
  for (int j = 1; j <= n_c; ++j) cp[j] = {static_cast<int64_t>(rng.below(span + 1)),
                                          static_cast<int64_t>(rng.below(span + 1))};
  for (int i = 1; i <= n_f; ++i) inst.f[i] = static_cast<int64_t>(rng.one_to(f_max));
  for (int i = 1; i <= n_f; ++i)
    for (int j = 1; j <= n_c; ++j)
      inst.dist(i, j) =
          std::abs(fp[i].first - cp[j].first) + std::abs(fp[i].second - cp[j].second);
  return inst;
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  int n_f = j.at("n_f").get<int>();
  int n_c = j.at("n_c").get<int>();
  Instance inst = Instance::blank(n_f, n_c);
  const auto& jf = j.at("f");
  const auto& jd = j.at("D");
  if (static_cast<int>(jf.size()) != n_f) throw std::invalid_argument("f must have n_f entries");
  if (static_cast<int>(jd.size()) != n_f) throw std::invalid_argument("D must have n_f rows");
  for (int i = 1; i <= n_f; ++i) inst.f[i] = jf.at(i - 1).get<int64_t>();
  for (int i = 1; i <= n_f; ++i) {
    const auto& row = jd.at(i - 1);
    if (static_cast<int>(row.size()) != n_c)
      throw std::invalid_argument("D row " + std::to_string(i) + " must have n_c entries");
    for (int jj = 1; jj <= n_c; ++jj) inst.dist(i, jj) = row.at(jj - 1).get<int64_t>();
  }
  if (auto v = validate_metric(inst)) throw std::invalid_argument("invalid instance: " + v->what);
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  nlohmann::ordered_json j;
  j["n_f"] = inst.n_f;
  j["n_c"] = inst.n_c;
  j["f"] = nlohmann::json::array();
  for (int i = 1; i <= inst.n_f; ++i) j["f"].push_back(inst.f[i]);
  j["D"] = nlohmann::json::array();
  for (int i = 1; i <= inst.n_f; ++i) {
    nlohmann::ordered_json row = nlohmann::json::array();
    for (int jj = 1; jj <= inst.n_c; ++jj) row.push_back(inst.dist(i, jj));
    j["D"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return instance_from_json(ss.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << instance_to_json(inst);
}

Rational compute_radius(const Instance& inst, int i) {
  if (i < 1 || i > inst.n_f) throw std::invalid_argument("facility id out of range");
  if (inst.f[i] <= 0) throw std::invalid_argument("compute_radius needs f_i > 0");
  std::vector<int64_t> ds(inst.n_c);
  for (int j = 1; j <= inst.n_c; ++j) ds[j - 1] = inst.dist(i, j);
  std::sort(ds.begin(), ds.end());

  // g(r) = sum max(0, r - d) is piecewise linear with slope t on
  // [d_(t), d_(t+1)); solve t*r - S_t = f_i on the first segment containing
  // the root. The last segment always does.
  int64_t prefix = 0;
  for (int t = 1; t <= inst.n_c; ++t) {
    prefix += ds[t - 1];
    Rational r(inst.f[i] + prefix, t);
    if (r >= Rational(ds[t - 1]) && (t == inst.n_c || r < Rational(ds[t]))) return r;
  }
  throw std::logic_error("radius segment walk found no root");
}

RadiusProfile radius_profile(const Instance& inst) {
  RadiusProfile p;
  p.r.assign(inst.n_f + 1, Rational());
  p.class_of.assign(inst.n_f + 1, 0);
  for (int i = 1; i <= inst.n_f; ++i) p.r[i] = compute_radius(inst, i);
  p.r0 = p.r[1];
  for (int i = 2; i <= inst.n_f; ++i) p.r0 = std::min(p.r0, p.r[i]);
  for (int i = 1; i <= inst.n_f; ++i) {
    int k = 0;
    Rational bound = p.r0 * Rational(3);
    while (p.r[i] >= bound) {
      bound = bound * Rational(3);
      ++k;
    }
    p.class_of[i] = k;
    p.num_classes = std::max(p.num_classes, k + 1);
  }
  return p;
}

int64_t facility_distance(const Instance& inst, int i, int i2) {
  int64_t best = INT64_MAX;
  for (int j = 1; j <= inst.n_c; ++j) best = std::min(best, inst.dist(i, j) + inst.dist(i2, j));
  return best;
}

Rational rbar(const Instance& inst, const RadiusProfile& profile, int j) {
  Rational best = profile.r[1] + Rational(inst.dist(1, j));
  for (int i = 2; i <= inst.n_f; ++i)
    best = std::min(best, profile.r[i] + Rational(inst.dist(i, j)));
  return best;
}

Rational rbar_sum(const Instance& inst, const RadiusProfile& profile) {
  Rational s;
  for (int j = 1; j <= inst.n_c; ++j) s += rbar(inst, profile, j);
  return s;
}

static void check_open_set(const Instance& inst, const std::vector<int>& open_set) {
  if (open_set.empty()) throw std::invalid_argument("open set must be nonempty");
  for (size_t k = 0; k < open_set.size(); ++k) {
    if (open_set[k] < 1 || open_set[k] > inst.n_f)
      throw std::invalid_argument("open set id out of range");
    if (k > 0 && open_set[k] <= open_set[k - 1])
      throw std::invalid_argument("open set must be strictly ascending");
  }
}

Rational charge(const Instance& inst, const RadiusProfile& profile,
                const std::vector<int>& open_set, int j) {
  check_open_set(inst, open_set);
  int64_t conn = INT64_MAX;
  for (int i : open_set) conn = std::min(conn, inst.dist(i, j));
  Rational total(conn);
  for (int i : open_set) {
    Rational slack = profile.r[i] - Rational(inst.dist(i, j));
    if (slack.sign() > 0) total += slack;
  }
  return total;
}

Solution solution_cost(const Instance& inst, const std::vector<int>& open_set) {
  check_open_set(inst, open_set);
  Solution sol;
  sol.open = open_set;
  sol.assign.assign(inst.n_c + 1, 0);
  int64_t total = 0;
  for (int i : open_set) total += inst.f[i];
  for (int j = 1; j <= inst.n_c; ++j) {
    int best = open_set[0];
    for (int i : open_set)
      if (inst.dist(i, j) < inst.dist(best, j)) best = i;
    sol.assign[j] = best;
    total += inst.dist(best, j);
  }
  sol.cost = Rational(total);
  return sol;
}

}  // namespace bfl

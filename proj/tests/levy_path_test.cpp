#include "multifrac/levy_path.hpp"
#include "multifrac/path_io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace multifrac;

namespace {

SamplePath brownian(std::int64_t n, std::uint64_t seed) {
  SynthesisConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return simulate_levy(GeneratingTriplet{0.0, 1.0, AtomicSymmetric{}}, cfg);
}

}  // namespace

TEST_CASE("Brownian triplet gives Gaussian increments of variance dt") {
  const std::int64_t n = 1 << 16;
  const SamplePath p = brownian(n, 3);
  CHECK(p.values[0] == 0.0);
  const Vector dx = p.values.tail(n) - p.values.head(n);
  CHECK(dx.squaredNorm() / n * n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(p.jumps.empty());
}

TEST_CASE("compound Poisson path is piecewise constant") {
  SynthesisConfig cfg;
  cfg.n = 1 << 12;
  cfg.eps = 0.25;
  cfg.small_jump_mode = SmallJumpMode::CompensateOnly;
  double total = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    cfg.seed = stream_seed(11, r);
    const SamplePath p = simulate_levy(GeneratingTriplet{0.0, 0.0, AtomicSymmetric{{{0.5, 3.0}}}}, cfg);
    total += static_cast<double>(p.jumps.size());
    int moves = 0;
    for (Eigen::Index k = 1; k < p.values.size(); ++k) moves += p.values[k] != p.values[k - 1];
    CHECK(moves <= static_cast<int>(p.jumps.size()));
    for (const auto& j : p.jumps) CHECK(std::abs(j.size) == 0.5);
  }
  CHECK(total / reps == doctest::Approx(6.0).epsilon(0.1));
}

TEST_CASE("synthesis is deterministic in the seed") {
  SynthesisConfig cfg;
  cfg.n = 1 << 12;
  cfg.eps = 1e-3;
  cfg.seed = 42;
  const GeneratingTriplet tri{0.1, 0.5, StablePower{1.2, 1.0, 0.5}};
  const SamplePath a = simulate_levy(tri, cfg);
  const SamplePath b = simulate_levy(tri, cfg);
  CHECK(a.values == b.values);
  cfg.seed = 43;
  CHECK(simulate_levy(tri, cfg).values != a.values);
}

TEST_CASE("stable increments: Gaussian and Cauchy cases") {
  const std::int64_t n = 1 << 16;
  const Vector g = simulate_stable_increments(2.0, 0.0, n, 5);
  CHECK(g.squaredNorm() / n * n == doctest::Approx(2.0).epsilon(0.03));
  Vector c = simulate_stable_increments(1.0, 0.0, n, 6);
  std::vector<double> v(c.data(), c.data() + n);
  std::nth_element(v.begin(), v.begin() + n / 2, v.end());
  CHECK(std::abs(v[n / 2]) * n < 0.02);
}

TEST_CASE("integrate_path is exact on lines") {
  SamplePath p;
  p.n = 1 << 10;
  p.values = Vector::Constant(p.n + 1, 2.5);
  const SamplePath c = integrate_path(p);
  for (std::int64_t k = 0; k <= p.n; k += 97) CHECK(c.values[k] == doctest::Approx(2.5 * p.time(k)));
  for (std::int64_t k = 0; k <= p.n; ++k) p.values[k] = p.time(k);
  const SamplePath q = integrate_path(p);
  double err = 0.0;
  for (std::int64_t k = 0; k <= p.n; ++k) err = std::max(err, std::abs(q.values[k] - 0.5 * p.time(k) * p.time(k)));
  CHECK(err < 1e-12);
}

TEST_CASE("stable motion on an extended window is pinned at zero") {
  const SamplePath L = stable_levy_path(1.5, 0.0, 1 << 10, -2.0, 9);
  CHECK(L.values.size() == 3 * 1024 + 1);
  CHECK(L.values[L.index_of(0.0)] == 0.0);
  CHECK(L.unit_window().values.size() == 1025);
}

TEST_CASE("path CSV and sidecar round trip") {
  SynthesisConfig cfg;
  cfg.n = 1 << 10;
  cfg.eps = 0.01;
  cfg.seed = 1;
  cfg.record_floor = 0.05;
  SamplePath p = simulate_levy(GeneratingTriplet{0.0, 0.0, StablePower{1.2, 1.0, 1.0}}, cfg);
  std::stringstream csv, js;
  write_path_csv(p, csv);
  write_path_json(p, js);
  const SamplePath q = read_path(csv, &js);
  CHECK(q.values == p.values);
  CHECK(q.n == p.n);
  REQUIRE(q.jumps.size() == p.jumps.size());
  if (!p.jumps.empty()) CHECK(q.jumps.back().size == p.jumps.back().size);
}

TEST_CASE("bad configurations are rejected") {
  SynthesisConfig cfg;
  cfg.n = 1000;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg.n = 1 << 10;
  cfg.t0 = -1.5;
  CHECK_THROWS_AS(validate(cfg), Error);
}

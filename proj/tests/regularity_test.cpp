#include "multifrac/regularity.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>

using namespace multifrac;

namespace {

SamplePath sampled(std::int64_t n, const std::function<double(double)>& f) {
  SamplePath p;
  p.n = n;
  p.values.resize(n + 1);
  for (std::int64_t k = 0; k <= n; ++k) p.values[k] = f(p.time(k));
  return p;
}

SamplePath brownian(std::int64_t n, std::uint64_t seed) {
  SynthesisConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return simulate_levy(GeneratingTriplet{0.0, 1.0, AtomicSymmetric{}}, cfg);
}

}  // namespace

TEST_CASE("pointwise exponent of a cusp") {
  const std::int64_t n = 1 << 16;
  const SamplePath f = sampled(n, [](double u) { return std::sqrt(std::abs(u - 0.5)); });
  CHECK(pointwise_exponent(f, 0.5, default_window(n)).value == doctest::Approx(0.5).epsilon(0.04));
  const SamplePath flat = sampled(n, [](double) { return 1.0; });
  CHECK(pointwise_exponent(flat, 0.5, default_window(n)).infinite);
}

TEST_CASE("Brownian exponents") {
  const std::int64_t n = 1 << 18;
  const SamplePath p = brownian(n, 21);
  double pw = 0.0, loc = 0.0;
  const auto ts = interior_times(10, 0.1);
  for (double t : ts) {
    pw += pointwise_exponent(p, t, default_window(n)).value;
    loc += local_exponent(p, t, local_window(n)).value;
  }
  CHECK(std::abs(pw / 10 - 0.5) < 0.1);
  CHECK(std::abs(loc / 10 - 0.5) < 0.1);
}

TEST_CASE("local exponent of smooth and constant paths") {
  const std::int64_t n = 1 << 14;
  const SamplePath line = sampled(n, [](double u) { return 3.0 * u; });
  CHECK(local_exponent(line, 0.5, local_window(n)).value >= 1.0 - 1e-6);
  const SamplePath flat = sampled(n, [](double) { return 2.0; });
  CHECK(local_exponent(flat, 0.5, local_window(n)).infinite);
}

TEST_CASE("jump oracle arithmetic") {
  const std::vector<JumpRecord> one{{0.5, 0.1}};
  CHECK(jump_oracle_exponent(one, 0.501, 0.09).value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(jump_oracle_exponent(one, 0.5, 0.09).value == 0.0);
  CHECK_THROWS_AS(jump_oracle_exponent(one, 0.5, 0.01), Error);
  // beta floor caps the exponent at 1/beta
  CHECK(jump_oracle_exponent(one, 0.9, 0.09, 1.2).value <= 1.0 / 1.2 + 1e-12);
}

TEST_CASE("frontier of power cusps") {
  const std::int64_t n = 1 << 16;
  const std::vector<double> grid{-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5};
  for (double a : {0.3, 0.5}) {
    const SamplePath f = sampled(n, [a](double u) { return std::pow(std::abs(u - 0.5), a); });
    const FrontierEstimate fr = frontier_estimate(f, 0.5, grid, default_window(n));
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK_MESSAGE(std::abs(fr.sigma[k] - std::min(a + grid[k], 1.0)) < 0.05, "a=" << a << " s'=" << grid[k]);
    // -inf{s' : sigma(s') >= 0} recovers the pointwise exponent
    double cross = grid.back();
    for (std::size_t k = 1; k < grid.size(); ++k)
      if (fr.sigma[k - 1] < 0.0 && fr.sigma[k] >= 0.0)
        cross = grid[k - 1] - fr.sigma[k - 1] * (grid[k] - grid[k - 1]) / (fr.sigma[k] - fr.sigma[k - 1]);
    CHECK(std::abs(-cross - pointwise_exponent(f, 0.5, default_window(n)).value) < 0.08);
  }
}

TEST_CASE("integration shifts the frontier by one") {
  const std::int64_t n = 1 << 18;
  const SamplePath p = brownian(n, 5);
  const std::vector<double> grid{-1.0, -0.75, -0.6};
  for (double t : {0.3, 0.6}) {
    const FrontierEstimate a = frontier_estimate(p, t, grid, default_window(n));
    const FrontierEstimate b = frontier_estimate(integrate_path(p), t, grid, default_window(n));
    for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(b.sigma[k] - a.sigma[k] - 1.0) < 0.1);
  }
}

TEST_CASE("concave projection postconditions") {
  const std::vector<double> x{-1.5, -1.0, -0.5, 0.0, 0.5};
  const std::vector<double> y{-2.0, -0.3, 0.4, 0.2, 0.9};
  const auto z = concave_projection(x, y);
  double prev = 2.0;
  for (std::size_t k = 1; k < z.size(); ++k) {
    const double s = (z[k] - z[k - 1]) / (x[k] - x[k - 1]);
    CHECK(s >= -1e-12);
    CHECK(s <= 1.0 + 1e-12);
    CHECK(s <= prev + 1e-12);
    prev = s;
  }
  // an admissible input is a fixed point
  const std::vector<double> good{-1.0, -0.5, 0.0, 0.25, 0.3};
  const auto same = concave_projection(x, good);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(same[k] == doctest::Approx(good[k]));
}

TEST_CASE("frontier classification") {
  const std::int64_t n = 1 << 18;
  const SamplePath p = brownian(n, 17);
  const FrontierEstimate bm =
      frontier_estimate(p, 0.5, {-1.0, -0.75, -0.5, -0.25, 0.0, 0.25}, default_window(n));
  CHECK(classify_frontier(bm, 0.5, 2.0) == FrontierClass::Regular);

  const double beta = 0.7, h = 1.0 / 0.62;
  FrontierEstimate syn;
  for (int k = 0; k <= 20; ++k) {
    const double s = -2.0 + 0.1 * k;
    syn.sprime.push_back(s);
    syn.sigma.push_back((h + s) / (2 * beta * h));
    syn.sigma_raw.push_back(syn.sigma.back());
    syn.stderr_.push_back(0.01);
    syn.shifted.push_back(false);
  }
  CHECK(classify_frontier(syn, h, beta) == FrontierClass::Anomalous);
  for (auto& e : syn.stderr_) e = 0.5;
  CHECK(classify_frontier(syn, h, beta) == FrontierClass::Undecided);
  CHECK_THROWS_AS(classify_frontier(syn, 3.0, beta), Error);
}

TEST_CASE("stable path: oracle and regression agree") {
  const std::int64_t n = 1 << 18;
  SynthesisConfig cfg;
  cfg.n = n;
  cfg.eps = std::ldexp(1.0, -18);
  cfg.seed = 77;
  cfg.record_floor = std::ldexp(1.0, -12);
  cfg.include_large_jumps = true;
  const SamplePath p = simulate_levy(GeneratingTriplet{0.0, 0.0, StablePower{1.2, 1.0, 1.0}}, cfg);
  const JumpOracle oracle(p.jumps, cfg.record_floor);
  std::vector<double> a, b;
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double t = 0.1 + 0.8 * rng.uniform();
    a.push_back(oracle.exponent(t).value);
    b.push_back(pointwise_exponent(p, t, default_window(n)).value);
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(std::abs(a[50] - b[50]) < 0.1);
}

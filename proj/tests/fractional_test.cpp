#include "multifrac/fractional.hpp"

#include <doctest.h>

#include <cmath>

using namespace multifrac;

namespace {

// L_u = max(u, 0) on [b, 1]: dL = du on [0, 1] only.
SamplePath ramp(std::int64_t n, double b) {
  SamplePath p;
  p.t0 = b;
  p.n = n;
  p.values.resize(static_cast<Eigen::Index>((1.0 - b) * n) + 1);
  for (Eigen::Index k = 0; k < p.values.size(); ++k) p.values[k] = std::max(0.0, p.time(k));
  return p;
}

double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("fractional moving average of a ramp matches the power law") {
  const std::int64_t n = 1 << 10;
  const SamplePath L = ramp(n, -2.0);
  for (double g : {-0.4, -0.2, 0.133, 0.3, 0.6}) {
    const Vector y = fractional_moving_average(L, g);
    REQUIRE(y.size() == n + 1);
    double err = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      err = std::max(err, std::abs(y[k] - std::pow(t, g + 1) / (g + 1)));
    }
    CHECK_MESSAGE(err < 1e-10, "g=" << g);
    CHECK(fractional_moving_average_at(L, g, 0.37109375) == doctest::Approx(y[380]).epsilon(1e-12));
  }
}

TEST_CASE("H = 1/alpha leaves the stable motion unchanged") {
  const SamplePath L = stable_levy_path(1.5, 0.0, 1 << 10, -2.0, 4);
  const SamplePath X = lfsm_from_levy(L, 1.0 / 1.5, 1.5);
  CHECK(max_abs(X.values - L.unit_window().values) < 1e-12);
}

TEST_CASE("direct Riemann sum and fractional route agree on shared noise") {
  SynthesisConfig cfg;
  cfg.n = 1 << 12;
  cfg.seed = 8;
  const KernelSpec k{0.8, 1.5, 1.0, 0.0};
  const SamplePath direct = lfsm_direct(k, cfg, -4.0);
  const SamplePath viaint = lfsm_from_levy(stable_levy_path(1.5, 0.0, cfg.n, -4.0, cfg.seed), 0.8, 1.5);
  CHECK((direct.values - viaint.values).norm() / viaint.values.norm() < 0.05);
  KernelSpec low = k;
  low.H = 0.5;
  CHECK_THROWS_AS(lfsm_direct(low, cfg, -4.0), Error);
}

TEST_CASE("direct sum near alpha = 2, H = 1/alpha has nearly uncorrelated increments") {
  SynthesisConfig cfg;
  cfg.n = 1 << 16;
  cfg.seed = 10;
  const SamplePath x = lfsm_direct(KernelSpec{1.0 / 1.999, 1.999, 1.0, 0.0}, cfg, -1.0);
  const Vector dx = x.values.tail(cfg.n) - x.values.head(cfg.n);
  const double rho = dx.head(cfg.n - 1).dot(dx.tail(cfg.n - 1)) / dx.squaredNorm();
  CHECK(std::abs(rho) < 0.02);
}

TEST_CASE("constant Hurst function reproduces LFSM") {
  const std::int64_t n = 1 << 11;
  const SamplePath L = stable_levy_path(1.5, 0.0, n, -2.0, 12);
  const HurstFunction h = HurstFunction::from_function([](double) { return 0.8; }, n, 1.0, 0.0);
  const SamplePath a = lmsm_from_levy(L, 1.5, h);
  const SamplePath b = lfsm_from_levy(L, 0.8, 1.5);
  CHECK(max_abs(a.values - b.values) < 1e-12);
}

TEST_CASE("LMSM does not depend on the worker count") {
  const std::int64_t n = 1 << 11;
  const SamplePath L = stable_levy_path(1.5, 0.0, n, -2.0, 13);
  const HurstFunction h =
      HurstFunction::from_function([](double t) { return 0.8 + 0.1 * std::sin(6.283185307179586 * t); }, n, 1.0, 0.63);
  LmsmOptions one, four;
  one.workers = 1;
  four.workers = 4;
  CHECK(lmsm_from_levy(L, 1.5, h, one).values == lmsm_from_levy(L, 1.5, h, four).values);
  const HurstFunction bad = HurstFunction::from_function([](double) { return 0.5; }, n, 1.0, 0.0);
  CHECK_THROWS_AS(lmsm_from_levy(L, 1.5, bad), Error);
}

TEST_CASE("fractional Levy process") {
  const std::int64_t n = 1 << 10;
  const SamplePath line = ramp(n, -2.0);
  const double d = 0.3;
  const SamplePath y = flp_from_levy(line, d);
  CHECK(y.values[n] == doctest::Approx(1.0 / std::tgamma(d + 2.0)).epsilon(1e-9));
  // small d approaches the driver
  SynthesisConfig cfg;
  cfg.n = n;
  cfg.t0 = -2.0;
  cfg.eps = 0.25;
  cfg.seed = 3;
  cfg.small_jump_mode = SmallJumpMode::CompensateOnly;
  const SamplePath L = simulate_levy(GeneratingTriplet{0.0, 0.0, AtomicSymmetric{{{0.5, 3.0}}}}, cfg);
  const Vector base = L.unit_window().values;
  const double far = (flp_from_levy(L, 0.2).values - base).norm();
  const double near = (flp_from_levy(L, 0.02).values - base).norm();
  CHECK(near < far);
}

TEST_CASE("left cut error scale") {
  CHECK(left_cut_error_scale(0.133, -8.0) == doctest::Approx(std::pow(8.0, 0.133 - 1.0)));
  CHECK(left_cut_error_scale(0.133, -16.0) < left_cut_error_scale(0.133, -8.0));
}

#include "multifrac/fractional.hpp"

#include "multifrac/convolution.hpp"
#include "multifrac/parallel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace multifrac {
namespace {

// x^e with the convention 0^e = 0 (only used where the product with 0 vanishes).
double pw(double x, double e) { return x > 0.0 ? std::pow(x, e) : 0.0; }

// b^e - a^e for 0 <= a < b, accurate when e is close to zero.
double pdiff(double b, double a, double e) {
  if (a <= 0.0) return pw(b, e);
  return std::pow(a, e) * std::expm1(e * std::log(b / a));
}

// Unit-spacing product-integration pieces for the kernel g x^{g-1} against the two
// linear basis functions of the cell x in [a, b], b = a + 1:
//   left  = g int_a^b (x - a) x^{g-1} dx   (basis equal to 1 at x = b)
//   right = g int_a^b (b - x) x^{g-1} dx   (basis equal to 1 at x = a)
double left_piece(double a, double b, double g) {
  return g * pdiff(b, a, g + 1.0) / (g + 1.0) - (a > 0.0 ? a * pdiff(b, a, g) : 0.0);
}
double right_piece(double a, double b, double g) { return b * pdiff(b, a, g) - g * pdiff(b, a, g + 1.0) / (g + 1.0); }

// Far from the singularity the closed forms cancel badly; integrate the smooth
// integrand with 8-point Gauss-Legendre instead.
constexpr std::array<double, 4> kGlNodes = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGlWeights = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};
constexpr double kQuadratureSwitch = 32.0;

double gl_piece(double a, double g, bool left) {
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    for (double sgn : {-1.0, 1.0}) {
      const double y = 0.5 + 0.5 * sgn * kGlNodes[i];  // in (0,1)
      const double x = a + y;
      s += 0.5 * kGlWeights[i] * (left ? y : 1.0 - y) * g * std::pow(x, g - 1.0);
    }
  }
  return s;
}

double left_cell(double a, double g) { return a >= kQuadratureSwitch ? gl_piece(a, g, true) : left_piece(a, a + 1.0, g); }
double right_cell(double a, double g) {
  return a >= kQuadratureSwitch ? gl_piece(a, g, false) : right_piece(a, a + 1.0, g);
}

// Hat weight of the node at distance q >= 1 (grid units) from the evaluation time.
double hat_weight(std::int64_t q, double g) {
  const double x = static_cast<double>(q);
  return left_cell(x - 1.0, g) + right_cell(x, g);
}

struct DriverGrid {
  std::int64_t nodes;  // N + 1
  std::int64_t zero;   // index of t = 0
  double b;            // left end
  double dt;
};

DriverGrid grid_of(const SamplePath& driver) {
  require(driver.n > 0 && driver.values.size() >= 2, "driver path is empty");
  require(driver.t0 <= 0.0 && driver.t1 >= 1.0, "driver path must cover [t0, 1] with t0 <= 0");
  const std::int64_t zero = driver.index_of(0.0);
  require(std::abs(driver.values[zero]) < 1e-300 || driver.values[zero] == 0.0, "driver path must vanish at t = 0");
  require(zero + driver.n <= driver.cells(), "driver path must extend to t = 1");
  return {driver.cells() + 1, zero, driver.t0, driver.dt()};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void validate(const KernelSpec& k) {
  require(k.H > 0.0 && k.H < 1.0, "kernel: H must lie in (0,1)");
  require(k.alpha > 1.0 && k.alpha < 2.0, "kernel: alpha must lie in (1,2)");
  require(k.a_plus != 0.0 || k.a_minus != 0.0, "kernel: (a_plus, a_minus) must not both vanish");
}

HurstFunction HurstFunction::from_function(const std::function<double(double)>& h, std::int64_t n,
                                           double holder_order, double holder_constant) {
  HurstFunction f;
  f.samples.resize(n + 1);
  for (std::int64_t k = 0; k <= n; ++k) f.samples[k] = h(static_cast<double>(k) / static_cast<double>(n));
  f.holder_order = holder_order;
  f.holder_constant = holder_constant;
  return f;
}

SamplePath lfsm_direct(const KernelSpec& kernel, const SynthesisConfig& cfg, double b_min, double skew) {
  validate(kernel);
  require(cfg.n >= 2 && is_power_of_two(static_cast<std::uint64_t>(cfg.n)), "lfsm_direct: n must be a power of two");
  require(b_min <= -1.0 && std::floor(b_min) == b_min, "lfsm_direct: b_min must be an integer <= -1");
  const std::int64_t cells = static_cast<std::int64_t>(1.0 - b_min) * cfg.n;
  const Vector noise = simulate_stable_increments(kernel.alpha, skew, cells, 1.0 / static_cast<double>(cfg.n), cfg.seed);
  SamplePath out = lfsm_direct(kernel, noise, cfg.n, b_min);
  out.meta.seed = cfg.seed;
  out.meta.extra["skew"] = fmt(skew);
  return out;
}

SamplePath lfsm_direct(const KernelSpec& kernel, const Vector& noise, std::int64_t n, double b_min) {
  validate(kernel);
  require(n >= 2 && is_power_of_two(static_cast<std::uint64_t>(n)), "lfsm_direct: n must be a power of two");
  require(b_min <= -1.0 && std::floor(b_min) == b_min, "lfsm_direct: b_min must be an integer <= -1");
  const double g = kernel.exponent();
  if (g < 0.0)
    fail(ErrorKind::Precondition, "lfsm_direct: H < 1/alpha gives divergent pointwise sums; use lfsm_from_levy");
  const std::int64_t cells = static_cast<std::int64_t>(1.0 - b_min) * n;
  require(noise.size() == cells, "lfsm_direct: need one increment per cell of [b_min, 1]");
  const std::int64_t p0 = static_cast<std::int64_t>(-b_min) * n;
  const double dt = 1.0 / static_cast<double>(n);

  // kernel at offset r = p - i >= 1 (cell midpoint (r - 1/2) dt before t)
  Vector kp(cells + 1);
  kp[0] = 0.0;
  for (std::int64_t r = 1; r <= cells; ++r) kp[r] = std::pow((static_cast<double>(r) - 0.5) * dt, g);
  SamplePath out;
  out.n = n;
  out.values = Vector::Zero(n + 1);
  if (kernel.a_plus != 0.0) {
    const Vector P = convolve(noise, kp);
    for (std::int64_t k = 0; k <= n; ++k) out.values[k] += kernel.a_plus * (P[p0 + k] - P[p0]);
  }
  if (kernel.a_minus != 0.0) {
    // M(p) = sum_{i >= p} c_i ((i - p + 1/2) dt)^g, a correlation: convolve the reversed noise.
    const Vector rev = noise.reverse();
    Vector km(cells + 1);
    for (std::int64_t r = 0; r <= cells; ++r) km[r] = std::pow((static_cast<double>(r) + 0.5) * dt, g);
    const Vector R = convolve(rev, km);
    auto M = [&](std::int64_t p) { return p >= cells ? 0.0 : R[cells - 1 - p]; };
    for (std::int64_t k = 0; k <= n; ++k) out.values[k] += kernel.a_minus * (M(p0 + k) - M(p0));
  }
  out.meta.description = "lfsm_direct";
  out.meta.extra = {{"H", fmt(kernel.H)},
                    {"alpha", fmt(kernel.alpha)},
                    {"a_plus", fmt(kernel.a_plus)},
                    {"a_minus", fmt(kernel.a_minus)},
                    {"b_min", fmt(b_min)},
                    {"left_cut_error_scale", fmt(left_cut_error_scale(g, b_min))}};
  return out;
}

Vector fractional_moving_average(const SamplePath& driver, double g) {
  require(g > -1.0 && g < 1.0, "fractional moving average: exponent must lie in (-1,1)");
  const DriverGrid grid = grid_of(driver);
  const std::int64_t N = grid.nodes - 1;
  const Vector& L = driver.values;
  const std::int64_t n = driver.n;

  Vector w(N + 1);
  w[0] = 0.0;
  for (std::int64_t q = 1; q <= N; ++q) w[q] = hat_weight(q, g);
  // Only the half hat survives at the boundary node j = 0.
  auto boundary_fix = [&](std::int64_t p) { return right_cell(static_cast<double>(p), g); };
  // prefix[p] = sum of weights of nodes j = 0..p-1 seen from node p
  Vector prefix(N + 1);
  prefix[0] = 0.0;
  double acc = 0.0;
  for (std::int64_t p = 1; p <= N; ++p) {
    acc += w[p];
    prefix[p] = acc - boundary_fix(p);
  }
  const Vector C = convolve(L, w);
  auto A = [&](std::int64_t p) { return p == 0 ? 0.0 : C[p] - boundary_fix(p) * L[0]; };

  const double scale = std::pow(grid.dt, g);
  const double Lb = L[0];
  const double Kb = pw(-grid.b, g);
  const double at_zero = scale * A(grid.zero);
  Vector out(n + 1);
  for (std::int64_t k = 0; k <= n; ++k) {
    const std::int64_t p = grid.zero + k;
    const double t = static_cast<double>(k) * grid.dt;
    const double Kt = std::pow(t - grid.b, g);
    out[k] = scale * (A(p) - L[p] * prefix[p]) + L[p] * Kt - at_zero - Lb * (Kt - Kb);
  }
  out[0] = 0.0;
  return out;
}

double fractional_moving_average_at(const SamplePath& driver, double g, double t) {
  require(g > -1.0 && g < 1.0, "fractional moving average: exponent must lie in (-1,1)");
  require(t >= 0.0 && t <= 1.0, "fractional moving average: t must lie in [0,1]");
  const DriverGrid grid = grid_of(driver);
  const Vector& L = driver.values;
  const std::int64_t p = driver.index_of(t);
  auto part = [&](std::int64_t node) {
    // g int_b^{u_node} (L_u - L_node)(u_node - u)^{g-1} du over nodes j < node
    double s = 0.0;
    for (std::int64_t j = 0; j < node; ++j) {
      const std::int64_t q = node - j;
      const double wq = j == 0 ? left_cell(static_cast<double>(q) - 1.0, g) : hat_weight(q, g);
      s += wq * (L[j] - L[node]);
    }
    return s;
  };
  const double scale = std::pow(grid.dt, g);
  const double tt = static_cast<double>(p - grid.zero) * grid.dt;
  if (p == grid.zero) return 0.0;
  const double Kt = std::pow(tt - grid.b, g);
  const double Kb = pw(-grid.b, g);
  return scale * (part(p) - part(grid.zero)) + L[p] * Kt - L[0] * (Kt - Kb);
}

double left_cut_error_scale(double g, double b_min) { return std::pow(std::abs(b_min), g - 1.0); }

SamplePath lfsm_from_levy(const SamplePath& levy, double H, double alpha) {
  require(H > 0.0 && H < 1.0, "lfsm_from_levy: H must lie in (0,1)");
  require(alpha > 1.0 && alpha < 2.0, "lfsm_from_levy: alpha must lie in (1,2)");
  const double g = H - 1.0 / alpha;
  SamplePath out;
  if (g == 0.0) {
    out = levy.unit_window();
  } else {
    out.n = levy.n;
    out.values = fractional_moving_average(levy, g);
    out.meta = levy.meta;
    for (const JumpRecord& j : levy.jumps)
      if (j.time > 0.0 && j.time <= 1.0) out.jumps.push_back(j);
  }
  out.meta.description = "lfsm_from_levy";
  out.meta.extra["H"] = fmt(H);
  out.meta.extra["alpha"] = fmt(alpha);
  out.meta.extra["b_min"] = fmt(levy.t0);
  out.meta.extra["regime"] = g > 0.0 ? "H>1/alpha" : (g < 0.0 ? "H<1/alpha" : "H=1/alpha");
  out.meta.extra["left_cut_error_scale"] = fmt(left_cut_error_scale(g, levy.t0));
  return out;
}

SamplePath lmsm_from_levy(const SamplePath& levy, double alpha, const HurstFunction& hurst, const LmsmOptions& options) {
  require(alpha > 1.0 && alpha < 2.0, "lmsm_from_levy: alpha must lie in (1,2)");
  require(hurst.samples.size() == levy.n + 1, "lmsm_from_levy: Hurst samples must match the [0,1] grid");
  require(options.bank_size >= 2, "lmsm_from_levy: bank needs at least two levels");
  const double lo = hurst.min();
  const double hi = hurst.max();
  if (options.enforce_h0) {
    require(lo > 1.0 / alpha && hi < 1.0, "lmsm_from_levy: H(t) must stay inside (1/alpha, 1)");
    require(hurst.holder_order > hi, "lmsm_from_levy: Holder order of H must exceed sup H");
  } else {
    require(lo > 0.0 && hi < 1.0, "lmsm_from_levy: H(t) must stay inside (0, 1)");
  }

  SamplePath out;
  if (hi - lo < 1e-14) {
    out = lfsm_from_levy(levy, lo, alpha);
  } else {
    const int K = options.bank_size;
    std::vector<double> level(static_cast<std::size_t>(K));
    std::vector<double> bary(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      const double theta = std::numbers::pi * (2.0 * k + 1.0) / (2.0 * K);
      level[static_cast<std::size_t>(k)] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
      bary[static_cast<std::size_t>(k)] = (k % 2 == 0 ? 1.0 : -1.0) * std::sin(theta);
    }
    std::vector<Vector> bank(static_cast<std::size_t>(K));
    parallel_for(
        static_cast<std::size_t>(K),
        [&](std::size_t k) { bank[k] = lfsm_from_levy(levy, level[k], alpha).values; }, options.workers);
    out.n = levy.n;
    out.values.resize(levy.n + 1);
    for (std::int64_t t = 0; t <= levy.n; ++t) {
      const double h = hurst.samples[t];
      double num = 0.0;
      double den = 0.0;
      bool exact = false;
      for (std::size_t k = 0; k < bank.size(); ++k) {
        const double diff = h - level[k];
        if (diff == 0.0) {
          out.values[t] = bank[k][t];
          exact = true;
          break;
        }
        const double c = bary[k] / diff;
        num += c * bank[k][t];
        den += c;
      }
      if (!exact) out.values[t] = num / den;
    }
    out.meta = levy.meta;
    for (const JumpRecord& j : levy.jumps)
      if (j.time > 0.0 && j.time <= 1.0) out.jumps.push_back(j);
  }
  out.meta.description = "lmsm_from_levy";
  out.meta.extra["alpha"] = fmt(alpha);
  out.meta.extra["H_min"] = fmt(lo);
  out.meta.extra["H_max"] = fmt(hi);
  out.meta.extra["bank_size"] = std::to_string(options.bank_size);
  out.meta.extra["b_min"] = fmt(levy.t0);
  return out;
}

SamplePath flp_from_levy(const SamplePath& levy, double d) {
  require(d > 0.0 && d < 0.5, "flp_from_levy: d must lie in (0, 1/2)");
  SamplePath out;
  out.n = levy.n;
  out.values = fractional_moving_average(levy, d) / std::tgamma(d + 1.0);
  out.meta = levy.meta;
  out.meta.description = "flp_from_levy";
  out.meta.extra["d"] = fmt(d);
  out.meta.extra["b_min"] = fmt(levy.t0);
  for (const JumpRecord& j : levy.jumps)
    if (j.time > 0.0 && j.time <= 1.0) out.jumps.push_back(j);
  return out;
}

}  // namespace multifrac

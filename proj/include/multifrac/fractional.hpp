#ifndef MULTIFRAC_FRACTIONAL_HPP
#define MULTIFRAC_FRACTIONAL_HPP

#include "multifrac/levy_path.hpp"

#include <functional>

namespace multifrac {

/// Moving-average kernel a+ [(t-u)_+^{H-1/alpha} - (-u)_+^{H-1/alpha}]
///                    + a- [(t-u)_-^{H-1/alpha} - (-u)_-^{H-1/alpha}].
struct KernelSpec {
  double H = 0.8;
  double alpha = 1.5;
  double a_plus = 1.0;
  double a_minus = 0.0;

  double exponent() const { return H - 1.0 / alpha; }
};

void validate(const KernelSpec& k);

/// Hurst function sampled on the [0,1] synthesis grid (n + 1 values) with its declared
/// Holder regularity.
struct HurstFunction {
  Vector samples;
  double holder_order = 1.0;
  double holder_constant = 0.0;

  static HurstFunction from_function(const std::function<double(double)>& h, std::int64_t n, double holder_order,
                                     double holder_constant);
  double min() const { return samples.minCoeff(); }
  double max() const { return samples.maxCoeff(); }
};

inline constexpr double kDefaultLeftCut = -8.0;

/// LFSM by Riemann sum of the kernel (midpoint of each cell) against the stable
/// increments of simulate_stable_increments(alpha, skew, ..., cfg.seed) on [b_min, 1].
/// The same seed drives stable_levy_path, which couples this route with lfsm_from_levy.
/// Refuses H < 1/alpha, where pointwise sums diverge.
SamplePath lfsm_direct(const KernelSpec& kernel, const SynthesisConfig& cfg, double b_min = kDefaultLeftCut,
                       double skew = 0.0);
/// The same sum against explicit cell increments of [b_min, 1] (n cells per unit time).
SamplePath lfsm_direct(const KernelSpec& kernel, const Vector& noise, std::int64_t n, double b_min);

/// int [(t-u)_+^g - (-u)_+^g] dL_u for t on [0,1], computed from the values of L on its
/// window [b_min, 1] (L_0 = 0) as
///   g int_b^t (L_u - L_t)(t-u)^{g-1} du - g int_b^0 L_u (-u)^{g-1} du
///     + L_t (t-b)^g - L_b [(t-b)^g - (-b)^g],
/// with L interpolated linearly between nodes and the power kernel integrated exactly
/// on every cell. Valid and continuous for g in (-1, 1), including g = 0 where it returns L.
Vector fractional_moving_average(const SamplePath& driver, double g);

/// The same quantity evaluated at a single time t in [0,1] by direct summation.
double fractional_moving_average_at(const SamplePath& driver, double g, double t);

/// LFSM from an alpha-stable Levy path on an extended window (all three H regimes).
SamplePath lfsm_from_levy(const SamplePath& levy, double H, double alpha);

struct LmsmOptions {
  int bank_size = 17;  // Chebyshev levels in H
  /// Enforce the (H0) condition 1/alpha < H(t) < 1 with delta > sup H.
  bool enforce_h0 = true;
  int workers = 0;
};

/// LMSM X(t, H(t)) from a bank of LFSM fields at Chebyshev-spaced H levels, interpolated
/// in H (barycentric Lagrange on the bank nodes).
SamplePath lmsm_from_levy(const SamplePath& levy, double alpha, const HurstFunction& hurst,
                          const LmsmOptions& options = {});

/// Fractional Levy process (1/Gamma(d+1)) int [(t-u)_+^d - (-u)_+^d] dL_u, d in (0, 1/2).
SamplePath flp_from_levy(const SamplePath& levy, double d);

/// Sup-norm bound on the change caused by moving the left cut from b to 2b, up to the
/// driver's growth: |b|^{g-1} (the kernel decays like (-u)^{g-1} as u -> -inf).
double left_cut_error_scale(double g, double b_min);

}  // namespace multifrac

#endif  // MULTIFRAC_FRACTIONAL_HPP

#ifndef MULTIFRAC_LEVY_MEASURE_HPP
#define MULTIFRAC_LEVY_MEASURE_HPP

#include "multifrac/core.hpp"

#include <string>
#include <variant>
#include <vector>

namespace multifrac {

/// Power-law density c_plus * x^{-1-alpha} on x>0 and c_minus * |x|^{-1-alpha} on x<0.
struct StablePower {
  double alpha = 1.0;
  double c_plus = 1.0;
  double c_minus = 1.0;
};

struct Atom {
  double size = 1.0;  // jump magnitude, > 0
  double mass = 0.0;  // rate carried by each of +size and -size
};

/// Finite symmetric measure sum_k mass_k (delta_{size_k} + delta_{-size_k}).
/// Atom sizes are strictly decreasing.
struct AtomicSymmetric {
  std::vector<Atom> atoms;
};

/// Measure on [-1,1] given through its two-sided tail r -> pi(D(r,1)), sampled at
/// increasing radii and interpolated linearly in log-log coordinates. The tail is
/// extended below the first sample by the power law of the first segment.
struct TabulatedTail {
  std::vector<double> radius;  // strictly increasing, in (0,1]
  std::vector<double> tail;    // nonincreasing, tail.back() may be 0 when radius.back() == 1
  double positive_fraction = 0.5;
};

using LevyMeasureSpec = std::variant<StablePower, AtomicSymmetric, TabulatedTail>;

struct GeneratingTriplet {
  double drift_a = 0.0;
  double gaussian_Q = 0.0;
  LevyMeasureSpec measure = AtomicSymmetric{};
};

/// Throws ErrorKind::Precondition when a variant invariant is broken.
void validate(const LevyMeasureSpec& measure);
void validate(const GeneratingTriplet& triplet);

/// pi(D(a,b)) with D(a,b) = {a < |x| <= b}; b may be +inf.
/// An unbounded result (a = 0 on an infinite-activity measure) is tagged infinite.
Extended tail_mass(const LevyMeasureSpec& measure, double a, double b);

/// int_{D(a,b)} x pi(dx). Tagged infinite when the integral diverges (a = 0, beta >= 1, asymmetric).
Extended compensator_drift(const LevyMeasureSpec& measure, double a, double b);

/// int_{D(a,b)} x^2 pi(dx), finite for any 0 <= a < b <= 1.
double second_moment(const LevyMeasureSpec& measure, double a, double b);

/// Variance per unit time of the jumps below eps: int_{D(0,eps)} x^2 pi(dx).
double small_jump_variance(const LevyMeasureSpec& measure, double eps);

struct BetaEstimatorConfig {
  int j_min = 6;   // coarsest scale r = 2^{-j_min}
  int j_max = 20;  // finest scale
};

/// Blumenthal-Getoor index. Exact for StablePower (alpha) and for a single atom (0);
/// otherwise the numeric estimate below.
double blumenthal_getoor(const LevyMeasureSpec& measure, const BetaEstimatorConfig& cfg = {});

/// Numeric estimate: slope of log tail_mass(r,1) against log(1/r), clamped to [0,2].
/// Atomic measures are sampled at their atoms (the tail is a step function), other
/// variants on the dyadic radii 2^{-j}, j in [j_min, j_max].
double estimate_blumenthal_getoor(const LevyMeasureSpec& measure, const BetaEstimatorConfig& cfg = {});

/// The dyadic-atom measure whose process has anomalous 2-microlocal points:
/// atoms (2^{-j_n}, 2^{j_n beta}) with j_{n+1} = (j_n delta + 1) / (2 beta - 2 gamma + alpha).
struct Example2Params {
  double beta = 0.5;
  double alpha_ex = 0.6;
  double delta_ex = 0.62;
  double gamma_ex = 0.65;
  double j0 = 2.0;
  int n_max = 3;

  /// Target pointwise exponent h = 1/delta.
  double target_exponent() const { return 1.0 / delta_ex; }
};

std::vector<double> example2_scales(const Example2Params& p);
AtomicSymmetric example2_measure(const Example2Params& p);

/// Drops the negative half of a power-law measure.
StablePower one_sided(const StablePower& m);

bool is_symmetric(const LevyMeasureSpec& measure);
std::string describe(const LevyMeasureSpec& measure);

/// Key-value text form, e.g. "kind=stable, alpha=1.2, c_plus=1, c_minus=1".
/// Entries are separated by commas or newlines; '#' starts a comment.
/// Atomic: "kind=atomic, atoms=0.5:3;0.25:10". Tabulated: "kind=tabulated,
/// radius=0.001;0.01;1, tail=..., positive_fraction=0.5".
LevyMeasureSpec parse_measure(const std::string& text);
std::string format_measure(const LevyMeasureSpec& measure);

}  // namespace multifrac

#endif  // MULTIFRAC_LEVY_MEASURE_HPP

#ifndef MULTIFRAC_REGULARITY_HPP
#define MULTIFRAC_REGULARITY_HPP

#include "multifrac/levy_path.hpp"

#include <string>
#include <vector>

namespace multifrac {

/// Dyadic scale window [j_min, j_max]; scale j means radius 2^{-j}.
struct ScaleWindow {
  int j_min = 4;
  int j_max = 12;
};

/// Default window [4, log2(n) - 4].
ScaleWindow default_window(std::int64_t n);

enum class Detrend { None, Drift };

/// Regression estimate with its standard error; `value` is +inf when the path is flat
/// at every scale.
struct ExponentEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  bool infinite = false;
};

/// osc[j - j_min][c] = sup_{|u - t_c| <= 2^{-j}} |X_u - X_t - drift (u - t)| for the
/// requested centres t_c.
struct OscillationTable {
  ScaleWindow window;
  std::vector<double> centres;
  std::vector<std::vector<double>> osc;
};

OscillationTable oscillation_table(const SamplePath& path, const std::vector<double>& centres, ScaleWindow window,
                                   Detrend detrend = Detrend::None);

/// Drift slope used by Detrend::Drift: median grid increment divided by dt. Between the
/// (sparse) large jumps of a finite-variation path this is the compensator line.
double drift_slope(const SamplePath& path);

/// Slope of log2 oscillation against -j.
ExponentEstimate pointwise_exponent(const SamplePath& path, double t, ScaleWindow window,
                                    Detrend detrend = Detrend::None);

/// Window for local_exponent: neighbourhood radius 2^-4, finest lag four grid cells.
ScaleWindow local_window(std::int64_t n);

/// Uniform (local) exponent on the neighbourhood B(t, 2^{-j_min}): slope in the lag 2^{-j},
/// j = j_min + 5 .. j_max, of the sup of |G(u+d) - 2G(u) + G(u-d)|, G the running integral
/// of X, minus one. Working on the integral lets exponents in (-1, 1) be read the same way;
/// a linear path gives 1, a constant path +inf.
ExponentEstimate local_exponent(const SamplePath& path, double t, ScaleWindow window);

/// Jump-approximation exponent at t from the jump records. Sizes in [size_floor, 1) are
/// grouped in dyadic blocks [2^k size_floor, 2^{k+1} size_floor); in each block d_k is the
/// distance from t to the nearest jump. The approximation order delta is the slope of
/// log d_k against log |size| over the blocks (the ratio log d / log |size| when fewer than
/// three blocks are populated). Returns 1/delta, clamped to at most 1/beta_floor when
/// beta_floor > 0; a jump exactly at t gives 0.
ExponentEstimate jump_oracle_exponent(const std::vector<JumpRecord>& jumps, double t, double size_floor,
                                      double beta_floor = 0.0);

/// The same estimator with the jumps indexed once, for many query times.
class JumpOracle {
 public:
  JumpOracle(const std::vector<JumpRecord>& jumps, double size_floor);
  ExponentEstimate exponent(double t, double beta_floor = 0.0) const;

 private:
  struct Block {
    std::vector<double> times;  // sorted
    std::vector<double> sizes;  // |size|, matching times
  };
  double size_floor_;
  std::vector<Block> blocks_;  // block k holds sizes in [2^k floor, 2^{k+1} floor)
};

struct FrontierEstimate {
  double t = 0.0;
  std::vector<double> sprime;
  std::vector<double> sigma;      // after the concave projection
  std::vector<double> sigma_raw;  // regression values before projection
  std::vector<double> stderr_;
  std::vector<bool> shifted;      // estimate came from the integrated path

  std::string to_json() const;
  std::string to_csv() const;
};

/// 2-microlocal frontier at t. For each lag scale i (|u - v| <= 2^{-i}) and distance scale
/// k (|u - t| + |v - t| in (2^{-k-1}, 2^{-k}]) the largest increment M(i,k) is measured;
/// sigma(s') is minus the slope in i of max_k [log2 M(i,k) - s' k]. Negative values are
/// re-estimated on the integrated path (with its tangent at t removed) and shifted by -1.
FrontierEstimate frontier_estimate(const SamplePath& path, double t, const std::vector<double>& sprime_grid,
                                   ScaleWindow window);

/// Least-squares concave fit with slopes in [0,1]: pool-adjacent-violators on the
/// chord slopes, clamp, then rebuild with the best constant offset.
std::vector<double> concave_projection(const std::vector<double>& x, const std::vector<double>& y);

enum class FrontierClass { Regular, Anomalous, Undecided };
const char* to_string(FrontierClass c);

/// Left slope of the frontier at s' = -h: Regular if within tolerance of 1, Anomalous if
/// below 1/(2 beta h) + tolerance with h > 1/(2 beta), Undecided otherwise or when the
/// local regression error exceeds `max_stderr`.
FrontierClass classify_frontier(const FrontierEstimate& fr, double h, double beta, double tolerance = 0.15,
                                double max_stderr = 0.2);

/// Evenly spread interior times: t_i = margin + (i + 1/2)(1 - 2 margin)/count.
std::vector<double> interior_times(int count, double margin);

}  // namespace multifrac

#endif  // MULTIFRAC_REGULARITY_HPP

#ifndef MULTIFRAC_CORE_HPP
#define MULTIFRAC_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace multifrac {

using Vector = Eigen::VectorXd;

/// Error categories surfaced by the toolkit. The CLI maps them to exit codes.
enum class ErrorKind {
  Precondition,   // caller violated a documented precondition
  Unsupported,    // parameter combination outside the implemented model
  Estimation,     // not enough data / scales to estimate
  Resolution,     // grid too coarse for the requested analysis
  Parse,          // malformed config or file
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorKind::Precondition, msg);
}

/// A real value that may be +infinity, tagged explicitly rather than encoded as a float.
struct Extended {
  double value = 0.0;
  bool infinite = false;

  static Extended finite(double v) { return {v, false}; }
  static Extended infinity() { return {std::numeric_limits<double>::infinity(), true}; }

  bool is_finite() const { return !infinite; }
  /// Finite value; throws if infinite.
  double get() const {
    if (infinite) fail(ErrorKind::Precondition, "value is infinite");
    return value;
  }
};

// ---------------------------------------------------------------------------
// Random streams.
//
// Every stochastic routine takes a 64-bit seed. Replica r of a Monte Carlo run
// uses stream_seed(seed, r); sub-streams inside one synthesis (Brownian part,
// jumps, small-jump surrogate) use stream_seed(seed, tag) with fixed tags, so a
// path depends only on (seed, config) and never on thread scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0,1).
  double uniform() {
    // 53 random bits, shifted off zero.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() { return normal_(engine_); }
  double exponential() { return -std::log(uniform()); }
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(engine_);
  }
  std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

// ---------------------------------------------------------------------------
// Ordinary least squares for y = intercept + slope * x.

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  int points = 0;
};

template <typename DerivedX, typename DerivedY>
LineFit fit_line(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  const Eigen::Index n = x.size();
  if (n < 2 || y.size() != n) fail(ErrorKind::Estimation, "line fit needs at least two points");
  const double mx = x.mean();
  const double my = y.mean();
  const auto dx = (x.array() - mx).eval();
  const double sxx = dx.square().sum();
  if (sxx <= 0.0) fail(ErrorKind::Estimation, "line fit with degenerate abscissae");
  LineFit f;
  f.slope = (dx * (y.array() - my)).sum() / sxx;
  f.intercept = my - f.slope * mx;
  f.points = static_cast<int>(n);
  if (n > 2) {
    const double rss = (y.array() - f.intercept - f.slope * x.array()).square().sum();
    f.slope_stderr = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  }
  return f;
}

inline bool is_power_of_two(std::uint64_t n) { return n >= 1 && (n & (n - 1)) == 0; }

inline int log2_exact(std::uint64_t n) {
  int k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

}  // namespace multifrac

#endif  // MULTIFRAC_CORE_HPP

#ifndef MULTIFRAC_LEVY_PATH_HPP
#define MULTIFRAC_LEVY_PATH_HPP

#include "multifrac/core.hpp"
#include "multifrac/levy_measure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace multifrac {

struct JumpRecord {
  double time = 0.0;
  double size = 0.0;
};

/// Free-form provenance carried with every path and written next to it.
struct PathMeta {
  std::uint64_t seed = 0;
  double eps = 0.0;
  std::string description;
  std::map<std::string, std::string> extra;
};

/// Separate pieces of a synthesized Levy path, kept only on request.
struct PathComponents {
  Vector drift;        // a t - t * compensator
  Vector gaussian;     // sqrt(Q) B_t
  Vector small_jumps;  // surrogate for the jumps below eps
};

/// Values of a process on the uniform grid t0 + k/n, k = 0..cells, where n (points per
/// unit time) is a power of two and cells = n (t1 - t0). Analysis paths live on [0,1];
/// driving paths for moving averages live on an extended window [b_min, 1] with the
/// value at t = 0 pinned to zero.
struct SamplePath {
  double t0 = 0.0;
  double t1 = 1.0;
  std::int64_t n = 0;
  Vector values;
  std::vector<JumpRecord> jumps;  // sorted by time
  PathMeta meta;
  std::optional<PathComponents> components;

  std::int64_t cells() const { return static_cast<std::int64_t>(values.size()) - 1; }
  double dt() const { return 1.0 / static_cast<double>(n); }
  double time(std::int64_t k) const { return t0 + static_cast<double>(k) / static_cast<double>(n); }
  /// Grid index of t (rounded to the nearest node).
  std::int64_t index_of(double t) const;
  /// Copy restricted to [0,1]; no-op for analysis paths.
  SamplePath unit_window() const;
};

enum class SmallJumpMode { CompensateOnly, GaussianApprox };

struct SynthesisConfig {
  std::int64_t n = 1 << 16;  // grid points per unit time, power of two, >= 2^10
  double eps = 1e-4;         // small-jump truncation radius
  SmallJumpMode small_jump_mode = SmallJumpMode::GaussianApprox;
  std::uint64_t seed = 0;
  double t0 = 0.0;  // integer <= 0; the window is [t0, 1]
  /// Jumps with |size| below this are added to the path but not listed in `jumps`.
  double record_floor = 0.0;
  /// Route the jumps of size > 1 (compound Poisson part) into the path as well.
  bool include_large_jumps = false;
  bool keep_components = false;
};

/// Jump records below this magnitude are never kept.
inline constexpr double kJumpRecordFloor = 0x1.0p-40;
/// simulate_levy refuses runs that would list more jump records than this.
inline constexpr double kMaxJumpRecords = 6.0e7;

void validate(const SynthesisConfig& cfg);

/// Levy-Ito synthesis: drift + Brownian part + exact jumps above eps (compensated on
/// D(eps,1)) + small-jump surrogate.
SamplePath simulate_levy(const GeneratingTriplet& triplet, const SynthesisConfig& cfg);

/// `count` i.i.d. strictly alpha-stable variates (Chambers-Mallows-Stuck), each
/// distributed as M_{alpha,skew}(A) for a set A of Lebesgue measure cell_width.
Vector simulate_stable_increments(double alpha, double skew, std::int64_t count, double cell_width,
                                  std::uint64_t seed);
/// Cells of [0,1] with width 1/n.
Vector simulate_stable_increments(double alpha, double skew, std::int64_t n, std::uint64_t seed);

/// Stable Levy path L on [t0,1] (t0 integer <= 0) with L_0 = 0, built from the increments
/// of simulate_stable_increments with the same seed. This is the driver that couples the
/// moving-average and fractional-integral routes.
SamplePath stable_levy_path(double alpha, double skew, std::int64_t n, double t0, std::uint64_t seed);

/// Cumulative trapezoidal integral from t0 on the same grid; jumps and meta carried over.
SamplePath integrate_path(const SamplePath& path);

/// Cumulative sum of increments, anchored so that the value at t = 0 is zero.
Vector anchored_cumsum(const Vector& increments, std::int64_t zero_index);

}  // namespace multifrac

#endif  // MULTIFRAC_LEVY_PATH_HPP

#include "multifrac/levy_path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace multifrac {
namespace {

enum StreamTag : std::uint64_t { kGaussian = 1, kSmallJumps = 2, kJumps = 3, kLargeJumps = 4, kStable = 5 };

// Draws signed jump sizes with |x| in (lo, hi], distributed as pi restricted there.
class JumpSampler {
 public:
  JumpSampler(const LevyMeasureSpec& m, double lo, double hi) : measure_(m), lo_(lo), hi_(hi) {
    if (const auto* s = std::get_if<StablePower>(&m)) {
      kind_ = Kind::Stable;
      a_lo_ = std::pow(lo, -s->alpha);
      a_hi_ = std::isinf(hi) ? 0.0 : std::pow(hi, -s->alpha);
      inv_alpha_ = -1.0 / s->alpha;
      p_plus_ = s->c_plus / (s->c_plus + s->c_minus);
    } else if (const auto* a = std::get_if<AtomicSymmetric>(&m)) {
      kind_ = Kind::Atomic;
      double c = 0.0;
      for (const Atom& at : a->atoms) {
        if (at.size > lo && at.size <= hi) {
          c += at.mass;
          sizes_.push_back(at.size);
          cumulative_.push_back(c);
        }
      }
      p_plus_ = 0.5;
    } else {
      const auto& t = std::get<TabulatedTail>(m);
      t_lo_ = tail_mass(m, lo, 1.0).get();
      t_hi_ = hi >= 1.0 ? 0.0 : tail_mass(m, hi, 1.0).get();
      p_plus_ = t.positive_fraction;
    }
    finish_sign();
  }

  bool stable() const { return kind_ == Kind::Stable; }

  // Stable magnitudes for `count` draws at once (vectorized log/exp); signs folded in.
  void draw_stable(Rng& rng, Eigen::Index count, Eigen::ArrayXd& out) const {
    out.resize(count);
    for (Eigen::Index i = 0; i < count; ++i) out[i] = rng.uniform();
    const Eigen::ArrayXd neg = (out >= p_plus_).cast<double>();
    const Eigen::ArrayXd u = neg * (out - p_plus_) * inv_minus_ + (1.0 - neg) * out * inv_plus_;
    out = (1.0 - 2.0 * neg) * (inv_alpha_ * (a_lo_ - u * (a_lo_ - a_hi_)).log()).exp();
  }

  void finish_sign() {
    inv_plus_ = p_plus_ > 0.0 ? 1.0 / p_plus_ : 0.0;
    inv_minus_ = p_plus_ < 1.0 ? 1.0 / (1.0 - p_plus_) : 0.0;
  }

  double draw(Rng& rng) const {
    // One uniform picks the sign and, rescaled, the magnitude.
    const double v = rng.uniform();
    const bool negative = v >= p_plus_;
    const double u = negative ? (v - p_plus_) * inv_minus_ : v * inv_plus_;
    const double sign = negative ? -1.0 : 1.0;
    if (kind_ == Kind::Stable) return sign * std::exp(inv_alpha_ * std::log(a_lo_ - u * (a_lo_ - a_hi_)));
    if (kind_ == Kind::Atomic) {
      const double target = u * cumulative_.back();
      const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
      return sign * sizes_[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative_.begin(),
                                                                             static_cast<std::ptrdiff_t>(sizes_.size()) - 1))];
    }
    // Tabulated: bisection on log r for T(r, 1) = target.
    const double target = t_lo_ - u * (t_lo_ - t_hi_);
    double a = std::log(lo_);
    double b = std::log(std::min(hi_, 1.0));
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (a + b);
      if (tail_mass(measure_, std::exp(mid), 1.0).get() > target)
        a = mid;
      else
        b = mid;
    }
    return sign * std::exp(0.5 * (a + b));
  }

 private:
  enum class Kind { Stable, Atomic, Tabulated };
  Kind kind_ = Kind::Tabulated;
  const LevyMeasureSpec& measure_;
  double lo_;
  double hi_;
  double a_lo_ = 0.0;
  double a_hi_ = 0.0;
  double inv_alpha_ = 0.0;
  double p_plus_ = 0.5;
  double inv_plus_ = 2.0;
  double inv_minus_ = 2.0;
  double t_lo_ = 0.0;
  double t_hi_ = 0.0;
  std::vector<double> sizes_;
  std::vector<double> cumulative_;
};

// Adds a compound Poisson stream with jump law pi on (lo, hi] to `inc`, one cell at a time.
void add_jumps(const LevyMeasureSpec& m, double lo, double hi, const SynthesisConfig& cfg, std::uint64_t tag,
               Vector& inc, std::vector<JumpRecord>& records) {
  const Extended rate = tail_mass(m, lo, hi);
  if (rate.infinite) fail(ErrorKind::Precondition, "infinite jump rate above the truncation radius");
  if (rate.value <= 0.0) return;
  const JumpSampler sampler(m, lo, hi);
  Rng rng(stream_seed(cfg.seed, tag));
  const double dt = 1.0 / static_cast<double>(cfg.n);
  const double cell_mean = rate.value * dt;
  const double floor = std::max({cfg.record_floor, kJumpRecordFloor, 0.0});
  std::poisson_distribution<std::int64_t> count(cell_mean);
  Eigen::ArrayXd batch;
  for (Eigen::Index k = 0; k < inc.size(); ++k) {
    const std::int64_t c = count(rng.engine());
    if (sampler.stable()) {
      sampler.draw_stable(rng, c, batch);
      for (Eigen::Index i = 0; i < c; ++i) {
        if (std::abs(batch[i]) >= floor) records.push_back({cfg.t0 + (static_cast<double>(k) + rng.uniform()) * dt, batch[i]});
      }
      inc[k] += batch.sum();
      continue;
    }
    double sum = 0.0;
    for (std::int64_t i = 0; i < c; ++i) {
      const double x = sampler.draw(rng);
      sum += x;
      if (std::abs(x) >= floor) {
        records.push_back({cfg.t0 + (static_cast<double>(k) + rng.uniform()) * dt, x});
      }
    }
    inc[k] += sum;
  }
}

double cap_of(const LevyMeasureSpec& m, bool include_large) {
  if (!include_large) return 1.0;
  if (std::holds_alternative<TabulatedTail>(m)) return 1.0;
  return std::numeric_limits<double>::infinity();
}

}  // namespace

std::int64_t SamplePath::index_of(double t) const {
  return static_cast<std::int64_t>(std::llround((t - t0) * static_cast<double>(n)));
}

SamplePath SamplePath::unit_window() const {
  if (t0 == 0.0 && t1 == 1.0) return *this;
  require(t0 <= 0.0 && t1 >= 1.0, "unit_window: path does not cover [0,1]");
  SamplePath out;
  out.n = n;
  const std::int64_t k0 = index_of(0.0);
  out.values = values.segment(k0, n + 1);
  for (const JumpRecord& j : jumps)
    if (j.time > 0.0 && j.time <= 1.0) out.jumps.push_back(j);
  out.meta = meta;
  return out;
}

void validate(const SynthesisConfig& cfg) {
  require(cfg.n >= (1 << 10) && is_power_of_two(static_cast<std::uint64_t>(cfg.n)),
          "synthesis grid n must be a power of two >= 2^10");
  require(cfg.eps > 0.0, "truncation radius eps must be positive (eps = 0 gives an infinite jump rate)");
  require(cfg.eps < 1.0, "truncation radius eps must be below the unit jump cutoff");
  require(cfg.t0 <= 0.0 && std::floor(cfg.t0) == cfg.t0, "window start t0 must be a nonpositive integer");
  require(cfg.record_floor >= 0.0, "record_floor must be nonnegative");
}

Vector anchored_cumsum(const Vector& increments, std::int64_t zero_index) {
  Vector v(increments.size() + 1);
  v[0] = 0.0;
  for (Eigen::Index k = 0; k < increments.size(); ++k) v[k + 1] = v[k] + increments[k];
  v.array() -= v[zero_index];
  return v;
}

SamplePath simulate_levy(const GeneratingTriplet& triplet, const SynthesisConfig& cfg) {
  validate(triplet);
  validate(cfg);
  const LevyMeasureSpec& m = triplet.measure;
  const double cap = cap_of(m, cfg.include_large_jumps);
  const double span = 1.0 - cfg.t0;
  const std::int64_t cells = static_cast<std::int64_t>(span) * cfg.n;
  const std::int64_t zero = -static_cast<std::int64_t>(cfg.t0) * cfg.n;
  const double dt = 1.0 / static_cast<double>(cfg.n);

  const double floor = std::max({cfg.record_floor, kJumpRecordFloor, cfg.eps});
  const Extended listed = tail_mass(m, floor, cap);
  if (!listed.infinite && listed.value * span > kMaxJumpRecords)
    fail(ErrorKind::Precondition, "too many jump records requested; raise record_floor");

  Vector jumps = Vector::Zero(cells);
  std::vector<JumpRecord> records;
  add_jumps(m, cfg.eps, 1.0, cfg, kJumps, jumps, records);
  if (cap > 1.0) add_jumps(m, 1.0, cap, cfg, kLargeJumps, jumps, records);
  std::sort(records.begin(), records.end(), [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
  // Merge exact ties so times are strictly increasing.
  std::vector<JumpRecord> merged;
  merged.reserve(records.size());
  for (const JumpRecord& r : records) {
    if (!merged.empty() && merged.back().time == r.time)
      merged.back().size += r.size;
    else
      merged.push_back(r);
  }

  const double comp = compensator_drift(m, cfg.eps, 1.0).get();
  const Vector drift_inc = Vector::Constant(cells, (triplet.drift_a - comp) * dt);

  Vector gauss_inc = Vector::Zero(cells);
  if (triplet.gaussian_Q > 0.0) {
    Rng rng(stream_seed(cfg.seed, kGaussian));
    const double sd = std::sqrt(triplet.gaussian_Q * dt);
    for (Eigen::Index k = 0; k < cells; ++k) gauss_inc[k] = sd * rng.normal();
  }

  Vector small_inc = Vector::Zero(cells);
  if (cfg.small_jump_mode == SmallJumpMode::GaussianApprox) {
    const double v = small_jump_variance(m, cfg.eps);
    if (v > 0.0) {
      Rng rng(stream_seed(cfg.seed, kSmallJumps));
      const double sd = std::sqrt(v * dt);
      for (Eigen::Index k = 0; k < cells; ++k) small_inc[k] = sd * rng.normal();
    }
  }

  SamplePath path;
  path.t0 = cfg.t0;
  path.t1 = 1.0;
  path.n = cfg.n;
  path.values = anchored_cumsum(jumps + drift_inc + gauss_inc + small_inc, zero);
  path.jumps = std::move(merged);
  path.meta.seed = cfg.seed;
  path.meta.eps = cfg.eps;
  path.meta.description = "levy: drift=" + std::to_string(triplet.drift_a) + ", Q=" + std::to_string(triplet.gaussian_Q) +
                          ", " + format_measure(m);
  path.meta.extra["small_jump_mode"] =
      cfg.small_jump_mode == SmallJumpMode::GaussianApprox ? "gaussian_approx" : "compensate_only";
  path.meta.extra["record_floor"] = std::to_string(floor);
  if (cfg.keep_components) {
    path.components = PathComponents{anchored_cumsum(drift_inc, zero), anchored_cumsum(gauss_inc, zero),
                                     anchored_cumsum(small_inc, zero)};
  }
  return path;
}

Vector simulate_stable_increments(double alpha, double skew, std::int64_t count, double cell_width,
                                  std::uint64_t seed) {
  require(alpha > 0.0 && alpha <= 2.0, "stable increments: alpha must lie in (0,2]");
  require(skew >= -1.0 && skew <= 1.0, "stable increments: skewness must lie in [-1,1]");
  require(count >= 0 && cell_width > 0.0, "stable increments: need count >= 0 and positive cell width");
  if (alpha == 1.0 && skew != 0.0) fail(ErrorKind::Unsupported, "alpha = 1 requires zero skewness");
  constexpr double pi = std::numbers::pi;
  Rng rng(stream_seed(seed, kStable));
  Vector out(count);
  const double scale = std::pow(cell_width, 1.0 / alpha);
  if (alpha == 2.0) {
    // exp(-theta^2 w): variance 2 w.
    for (std::int64_t k = 0; k < count; ++k) out[k] = std::sqrt(2.0) * scale * rng.normal();
    return out;
  }
  if (alpha == 1.0) {
    for (std::int64_t k = 0; k < count; ++k) out[k] = scale * std::tan(pi * (rng.uniform() - 0.5));
    return out;
  }
  const double t = skew * std::tan(pi * alpha / 2.0);
  const double b = std::atan(t) / alpha;
  const double s = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
  for (std::int64_t k = 0; k < count; ++k) {
    const double v = pi * (rng.uniform() - 0.5);
    const double w = rng.exponential();
    const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    out[k] = scale * x;
  }
  return out;
}

Vector simulate_stable_increments(double alpha, double skew, std::int64_t n, std::uint64_t seed) {
  return simulate_stable_increments(alpha, skew, n, 1.0 / static_cast<double>(n), seed);
}

SamplePath stable_levy_path(double alpha, double skew, std::int64_t n, double t0, std::uint64_t seed) {
  require(n >= 2 && is_power_of_two(static_cast<std::uint64_t>(n)), "stable path: n must be a power of two");
  require(t0 <= 0.0 && std::floor(t0) == t0, "stable path: t0 must be a nonpositive integer");
  const std::int64_t cells = static_cast<std::int64_t>(1.0 - t0) * n;
  SamplePath p;
  p.t0 = t0;
  p.n = n;
  p.values = anchored_cumsum(simulate_stable_increments(alpha, skew, cells, 1.0 / static_cast<double>(n), seed),
                             -static_cast<std::int64_t>(t0) * n);
  p.meta.seed = seed;
  p.meta.description = "stable levy: alpha=" + std::to_string(alpha) + ", skew=" + std::to_string(skew);
  return p;
}

SamplePath integrate_path(const SamplePath& path) {
  SamplePath out = path;
  out.components.reset();
  const double h = path.dt();
  out.values[0] = 0.0;
  for (Eigen::Index k = 1; k < path.values.size(); ++k)
    out.values[k] = out.values[k - 1] + 0.5 * h * (path.values[k - 1] + path.values[k]);
  out.meta.extra["integrated"] = "1";
  return out;
}

}  // namespace multifrac

#include "multifrac/regularity.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace multifrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kLocalLagOffset = 5;

std::int64_t radius_points(std::int64_t n, int j) {
  return static_cast<std::int64_t>(std::ldexp(static_cast<double>(n), -j));
}

void check_window(const SamplePath& path, ScaleWindow w) {
  require(w.j_min >= 1 && w.j_min < w.j_max, "scale window must satisfy 1 <= j_min < j_max");
  require(radius_points(path.n, w.j_max) >= 1, "scale window finer than the grid");
}

std::int64_t centre_index(const SamplePath& path, double t, ScaleWindow w) {
  const std::int64_t p = path.index_of(t);
  const std::int64_t R = radius_points(path.n, w.j_min);
  if (p - R < 0 || p + R > path.cells())
    fail(ErrorKind::Precondition, "t must lie at least 2^-j_min inside the path window");
  return p;
}

ExponentEstimate fit_scales(const std::vector<double>& osc, int j_min) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < osc.size(); ++k) {
    if (osc[k] > 0.0) {
      xs.push_back(-static_cast<double>(j_min + static_cast<int>(k)));
      ys.push_back(std::log2(osc[k]));
    }
  }
  ExponentEstimate e;
  if (xs.size() < 2) {
    e.value = kInf;
    e.infinite = true;
    return e;
  }
  const LineFit f = fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                             Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
  e.value = f.slope;
  e.stderr_ = f.slope_stderr;
  return e;
}

struct RawPoint {
  double sigma = 0.0;
  double stderr_ = 0.0;
  bool ok = false;
};

// Frontier regression on a ball of 2R + 1 values centred at index R.
std::vector<RawPoint> raw_frontier(const std::vector<double>& ball, std::int64_t R, std::int64_t n, ScaleWindow w,
                                   const std::vector<double>& sprime) {
  const int ni = w.j_max - w.j_min;
  // M[i - j_min - 1][k - j_min], k = j_min..i
  std::vector<std::vector<double>> M(static_cast<std::size_t>(ni));
  for (int i = w.j_min + 1; i <= w.j_max; ++i) {
    const std::int64_t L = radius_points(n, i);
    const std::int64_t h = L / 2;
    const std::int64_t count = 2 * R - 2 * h + 1;
    auto& row = M[static_cast<std::size_t>(i - w.j_min - 1)];
    row.assign(static_cast<std::size_t>(i - w.j_min + 1), 0.0);
    for (std::int64_t m = 0; m < count; ++m) {
      // midpoint second difference: blind to the local linear part, comparable to the
      // first-difference sup for exponents below one
      const double d2 = std::abs(ball[m] - 2.0 * ball[m + h] + ball[m + 2 * h]);
      const std::int64_t D = std::abs(m - R) + std::abs(m + 2 * h - R);
      int k = static_cast<int>(std::floor(std::log2(static_cast<double>(n) / static_cast<double>(D)) + 1e-12));
      k = std::clamp(k, w.j_min, i);
      double& cell = row[static_cast<std::size_t>(k - w.j_min)];
      cell = std::max(cell, d2);
    }
  }
  std::vector<RawPoint> out(sprime.size());
  for (std::size_t s = 0; s < sprime.size(); ++s) {
    std::vector<double> xs, ys;
    for (int i = w.j_min + 1; i <= w.j_max; ++i) {
      const auto& row = M[static_cast<std::size_t>(i - w.j_min - 1)];
      double best = -kInf;
      for (std::size_t kk = 0; kk < row.size(); ++kk) {
        if (row[kk] <= 0.0) continue;
        const double k = static_cast<double>(w.j_min) + static_cast<double>(kk);
        best = std::max(best, std::log2(row[kk]) - sprime[s] * k);
      }
      if (best > -kInf) {
        xs.push_back(static_cast<double>(i));
        ys.push_back(best);
      }
    }
    if (xs.size() < 3) continue;
    const LineFit f = fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                               Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
    out[s] = {-f.slope, f.slope_stderr, true};
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

ScaleWindow default_window(std::int64_t n) {
  return {4, log2_exact(static_cast<std::uint64_t>(n)) - 4};
}

double drift_slope(const SamplePath& path) {
  std::vector<double> inc(static_cast<std::size_t>(path.cells()));
  for (std::int64_t k = 0; k < path.cells(); ++k) inc[static_cast<std::size_t>(k)] = path.values[k + 1] - path.values[k];
  auto mid = inc.begin() + static_cast<std::ptrdiff_t>(inc.size() / 2);
  std::nth_element(inc.begin(), mid, inc.end());
  return *mid * static_cast<double>(path.n);
}

OscillationTable oscillation_table(const SamplePath& path, const std::vector<double>& centres, ScaleWindow window,
                                   Detrend detrend) {
  check_window(path, window);
  const double slope = detrend == Detrend::Drift ? drift_slope(path) : 0.0;
  const double dt = path.dt();
  OscillationTable tab;
  tab.window = window;
  tab.centres = centres;
  const int ns = window.j_max - window.j_min + 1;
  tab.osc.assign(static_cast<std::size_t>(ns), std::vector<double>(centres.size(), 0.0));
  const std::int64_t R = radius_points(path.n, window.j_min);
  for (std::size_t c = 0; c < centres.size(); ++c) {
    const std::int64_t p = centre_index(path, centres[c], window);
    const double x0 = path.values[p];
    double run = 0.0;
    int j = window.j_max;
    std::int64_t next = radius_points(path.n, j);
    for (std::int64_t r = 1; r <= R; ++r) {
      const double lin = slope * static_cast<double>(r) * dt;
      run = std::max({run, std::abs(path.values[p + r] - x0 - lin), std::abs(path.values[p - r] - x0 + lin)});
      while (r == next && j >= window.j_min) {
        tab.osc[static_cast<std::size_t>(j - window.j_min)][c] = run;
        --j;
        next = j >= window.j_min ? radius_points(path.n, j) : R + 1;
      }
    }
  }
  return tab;
}

ExponentEstimate pointwise_exponent(const SamplePath& path, double t, ScaleWindow window, Detrend detrend) {
  const OscillationTable tab = oscillation_table(path, {t}, window, detrend);
  std::vector<double> osc;
  for (const auto& row : tab.osc) osc.push_back(row[0]);
  return fit_scales(osc, window.j_min);
}

ScaleWindow local_window(std::int64_t n) {
  require(is_power_of_two(n) && n >= 1024, "local_window: n must be a power of two >= 2^10");
  return {4, log2_exact(n) - 2};
}

ExponentEstimate local_exponent(const SamplePath& path, double t, ScaleWindow window) {
  check_window(path, window);
  const int lag_from = window.j_min + kLocalLagOffset;
  require(window.j_max - lag_from >= 1, "local_exponent: need j_max >= j_min + 6");
  const std::int64_t p = centre_index(path, t, window);
  const std::int64_t R = radius_points(path.n, window.j_min);
  // running integral over the ball, S[k] ~ int_{t-R}^{t-R+k} X (trapezoid, unit cells)
  std::vector<double> S(static_cast<std::size_t>(2 * R + 1), 0.0);
  for (std::int64_t k = 1; k <= 2 * R; ++k)
    S[k] = S[k - 1] + 0.5 * (path.values[p - R + k - 1] + path.values[p - R + k]);
  std::vector<double> osc(static_cast<std::size_t>(window.j_max - lag_from + 1), 0.0);
  for (int j = lag_from; j <= window.j_max; ++j) {
    const std::int64_t d = radius_points(path.n, j);
    double m = 0.0;
    for (std::int64_t u = d; u + d <= 2 * R; ++u) m = std::max(m, std::abs(S[u + d] - 2.0 * S[u] + S[u - d]));
    osc[static_cast<std::size_t>(j - lag_from)] = m;
  }
  ExponentEstimate e = fit_scales(osc, lag_from);
  if (!e.infinite) e.value -= 1.0;
  return e;
}

JumpOracle::JumpOracle(const std::vector<JumpRecord>& jumps, double size_floor) : size_floor_(size_floor) {
  require(size_floor > 0.0 && size_floor < 1.0, "jump oracle: size_floor must lie in (0,1)");
  const int nb = static_cast<int>(std::ceil(-std::log2(size_floor))) + 1;
  std::vector<std::vector<std::pair<double, double>>> tmp(static_cast<std::size_t>(nb));
  for (const JumpRecord& j : jumps) {
    const double s = std::abs(j.size);
    if (s < size_floor || s >= 1.0) continue;
    const int k = std::min(nb - 1, static_cast<int>(std::floor(std::log2(s / size_floor))));
    tmp[static_cast<std::size_t>(k)].push_back({j.time, s});
  }
  blocks_.resize(tmp.size());
  for (std::size_t k = 0; k < tmp.size(); ++k) {
    std::sort(tmp[k].begin(), tmp[k].end());
    for (const auto& [time, size] : tmp[k]) {
      blocks_[k].times.push_back(time);
      blocks_[k].sizes.push_back(size);
    }
  }
  if (blocks_.empty() || blocks_[0].times.empty())
    fail(ErrorKind::Resolution, "jump oracle: no jumps recorded below 2 * size_floor");
}

ExponentEstimate JumpOracle::exponent(double t, double beta_floor) const {
  struct Near {
    double dist, size;
    std::size_t count;
  };
  std::vector<Near> nearest;
  for (const Block& b : blocks_) {
    if (b.times.empty()) continue;
    const auto it = std::lower_bound(b.times.begin(), b.times.end(), t);
    std::size_t best = 0;
    double d = kInf;
    if (it != b.times.end()) {
      best = static_cast<std::size_t>(it - b.times.begin());
      d = *it - t;
    }
    if (it != b.times.begin() && t - *(it - 1) < d) {
      best = static_cast<std::size_t>(it - b.times.begin()) - 1;
      d = t - *(it - 1);
    }
    nearest.push_back({d, b.sizes[best], b.times.size()});
  }
  ExponentEstimate e;
  for (const Near& n : nearest)
    if (n.dist == 0.0) return e;  // t is a jump time
  std::vector<double> xs, ys;
  for (const Near& n : nearest) {
    if (n.count < 8) continue;
    xs.push_back(std::log2(n.size));
    ys.push_back(std::log2(n.dist));
  }
  double delta;
  double delta_se = 0.0;
  if (xs.size() >= 3) {
    const LineFit f = fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                               Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())));
    delta = f.slope;
    delta_se = f.slope_stderr;
  } else {
    delta = -kInf;
    for (const Near& n : nearest) delta = std::max(delta, std::log(n.dist) / std::log(n.size));
  }
  if (beta_floor > 0.0) delta = std::max(delta, beta_floor);
  if (delta <= 0.0) {
    e.value = kInf;
    e.infinite = true;
    return e;
  }
  e.value = 1.0 / delta;
  e.stderr_ = delta_se / (delta * delta);
  return e;
}

ExponentEstimate jump_oracle_exponent(const std::vector<JumpRecord>& jumps, double t, double size_floor,
                                      double beta_floor) {
  return JumpOracle(jumps, size_floor).exponent(t, beta_floor);
}

std::vector<double> concave_projection(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && !x.empty(), "concave projection: mismatched inputs");
  const std::size_t m = x.size();
  if (m == 1) return y;
  for (std::size_t k = 1; k < m; ++k) require(x[k] > x[k - 1], "concave projection: abscissae must increase");
  // blocks of pooled slopes, nonincreasing left to right
  struct Block {
    double slope, weight;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double w = x[k + 1] - x[k];
    blocks.push_back({(y[k + 1] - y[k]) / w, w, 1});
    while (blocks.size() >= 2 && blocks[blocks.size() - 2].slope < blocks.back().slope) {
      Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.slope = (a.slope * a.weight + b.slope * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.len += b.len;
    }
  }
  std::vector<double> z(m, 0.0);
  std::size_t k = 0;
  for (const Block& b : blocks) {
    const double s = std::clamp(b.slope, 0.0, 1.0);
    for (std::size_t r = 0; r < b.len; ++r, ++k) z[k + 1] = z[k] + s * (x[k + 1] - x[k]);
  }
  double offset = 0.0;
  for (std::size_t i = 0; i < m; ++i) offset += y[i] - z[i];
  offset /= static_cast<double>(m);
  for (double& v : z) v += offset;
  return z;
}

FrontierEstimate frontier_estimate(const SamplePath& path, double t, const std::vector<double>& sprime_grid,
                                   ScaleWindow window) {
  check_window(path, window);
  require(!sprime_grid.empty(), "frontier: empty s' grid");
  for (std::size_t k = 0; k < sprime_grid.size(); ++k) {
    require(sprime_grid[k] >= -1.5 && sprime_grid[k] <= 0.5, "frontier: s' must lie in [-1.5, 0.5]");
    if (k > 0) require(sprime_grid[k] > sprime_grid[k - 1], "frontier: s' grid must increase");
  }
  require(window.j_max - window.j_min >= 3, "frontier: need at least three lag scales");
  const std::int64_t p = centre_index(path, t, window);
  const std::int64_t R = radius_points(path.n, window.j_min);
  std::vector<double> ball(static_cast<std::size_t>(2 * R + 1));
  for (std::int64_t r = -R; r <= R; ++r) ball[static_cast<std::size_t>(r + R)] = path.values[p + r];

  FrontierEstimate fr;
  fr.t = t;
  fr.sprime = sprime_grid;
  const std::vector<RawPoint> raw = raw_frontier(ball, R, path.n, window, sprime_grid);
  std::vector<RawPoint> integ;
  const bool need_shift = std::any_of(raw.begin(), raw.end(), [](const RawPoint& r) { return !r.ok || r.sigma < 0.0; });
  if (need_shift) {
    // G(u) = int_t^u (X_s - X_t) ds, trapezoidal, on the same ball
    std::vector<double> g(ball.size(), 0.0);
    const double x0 = ball[static_cast<std::size_t>(R)];
    const double h = path.dt();
    for (std::int64_t r = R + 1; r <= 2 * R; ++r)
      g[static_cast<std::size_t>(r)] = g[static_cast<std::size_t>(r - 1)] +
                                       0.5 * h * (ball[static_cast<std::size_t>(r - 1)] + ball[static_cast<std::size_t>(r)] - 2 * x0);
    for (std::int64_t r = R - 1; r >= 0; --r)
      g[static_cast<std::size_t>(r)] = g[static_cast<std::size_t>(r + 1)] -
                                       0.5 * h * (ball[static_cast<std::size_t>(r + 1)] + ball[static_cast<std::size_t>(r)] - 2 * x0);
    integ = raw_frontier(g, R, path.n, window, sprime_grid);
  }
  for (std::size_t s = 0; s < sprime_grid.size(); ++s) {
    RawPoint pt = raw[s];
    bool shifted = false;
    if (!pt.ok || pt.sigma < 0.0) {
      if (integ[s].ok) {
        pt = integ[s];
        pt.sigma -= 1.0;
        shifted = true;
      }
    }
    if (!pt.ok) fail(ErrorKind::Estimation, "frontier: insufficient pairs at the requested scales");
    fr.sigma_raw.push_back(pt.sigma);
    fr.stderr_.push_back(pt.stderr_);
    fr.shifted.push_back(shifted);
  }
  fr.sigma = concave_projection(fr.sprime, fr.sigma_raw);
  return fr;
}

const char* to_string(FrontierClass c) {
  switch (c) {
    case FrontierClass::Regular:
      return "Regular";
    case FrontierClass::Anomalous:
      return "Anomalous";
    case FrontierClass::Undecided:
      return "Undecided";
  }
  return "Undecided";
}

FrontierClass classify_frontier(const FrontierEstimate& fr, double h, double beta, double tolerance,
                                double max_stderr) {
  require(h > 0.0 && std::isfinite(h), "classify: h must be positive and finite");
  require(beta > 0.0, "classify: beta must be positive");
  const double target = -h - 1e-12;
  std::size_t hi = 0;
  while (hi < fr.sprime.size() && fr.sprime[hi] < target) ++hi;
  if (hi == 0 || hi == fr.sprime.size())
    fail(ErrorKind::Precondition, "classify: s' = -h is outside the frontier grid");
  const std::size_t lo = hi - 1;
  if (std::max(fr.stderr_[lo], fr.stderr_[hi]) > max_stderr) return FrontierClass::Undecided;
  const double slope = (fr.sigma[hi] - fr.sigma[lo]) / (fr.sprime[hi] - fr.sprime[lo]);
  if (std::abs(slope - 1.0) <= tolerance) return FrontierClass::Regular;
  if (h > 1.0 / (2.0 * beta) && slope <= 1.0 / (2.0 * beta * h) + tolerance) return FrontierClass::Anomalous;
  return FrontierClass::Undecided;
}

std::vector<double> interior_times(int count, double margin) {
  std::vector<double> ts(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) ts[static_cast<std::size_t>(i)] = margin + (i + 0.5) * (1.0 - 2.0 * margin) / count;
  return ts;
}

std::string FrontierEstimate::to_json() const {
  nlohmann::json j;
  j["t"] = t;
  j["sprime"] = sprime;
  j["sigma"] = sigma;
  j["sigma_raw"] = sigma_raw;
  j["stderr"] = stderr_;
  j["shifted"] = shifted;
  return j.dump(2);
}

std::string FrontierEstimate::to_csv() const {
  std::ostringstream os;
  os << "sprime,sigma,sigma_raw,stderr,shifted\n";
  for (std::size_t k = 0; k < sprime.size(); ++k)
    os << num(sprime[k]) << ',' << num(sigma[k]) << ',' << num(sigma_raw[k]) << ',' << num(stderr_[k]) << ','
       << (shifted[k] ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace multifrac

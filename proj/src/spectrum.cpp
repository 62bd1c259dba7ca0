#include "multifrac/spectrum.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace multifrac {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Range of x - chord over x[a..b].
double chord_range(const Vector& x, std::int64_t a, std::int64_t b) {
  if (b <= a) return 0.0;
  const double slope = (x[b] - x[a]) / static_cast<double>(b - a);
  double hi = -kInf;
  double lo = kInf;
  for (std::int64_t i = a; i <= b; ++i) {
    const double v = x[i] - x[a] - slope * static_cast<double>(i - a);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return hi - lo;
}

double median_of(std::vector<double> v) {
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

double slope_vs_minus_j(const std::vector<double>& js, const std::vector<double>& vals) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < js.size(); ++k) {
    if (vals[k] > 0.0) {
      xs.push_back(-js[k]);
      ys.push_back(std::log2(vals[k]));
    }
  }
  if (xs.size() < 2) return kInf;
  return fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                  Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())))
      .slope;
}

// Spectrum from the intervals k in [lo[s], hi[s]) at each used scale.
SpectrumEstimate spectrum_over(const ExponentField& f, const std::vector<int>& scales, const std::vector<std::int64_t>& lo,
                               const std::vector<std::int64_t>& hi, double h_lo, double h_hi, double width) {
  require(width > 0.0 && h_hi > h_lo, "spectrum: bad h range or bin width");
  if (scales.size() < 2) fail(ErrorKind::Resolution, "spectrum: fewer than two usable scales");
  SpectrumEstimate est;
  est.h_lo = h_lo;
  est.bin_width = width;
  const int nb = std::max(1, static_cast<int>(std::ceil((h_hi - h_lo) / width - 1e-9)));
  for (int b = 0; b < nb; ++b) est.centres.push_back(h_lo + (b + 0.5) * width);
  est.counts.assign(static_cast<std::size_t>(nb), std::vector<std::int64_t>(scales.size(), 0));
  est.scales_used = scales;
  std::vector<double> js, maxosc, medosc;
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const auto& hrow = f.h[static_cast<std::size_t>(scales[s] - f.j_lo)];
    const auto& orow = f.osc[static_cast<std::size_t>(scales[s] - f.j_lo)];
    for (std::int64_t k = lo[s]; k < hi[s]; ++k) {
      const int b = est.bin_of(hrow[static_cast<std::size_t>(k)]);
      if (b >= 0) ++est.counts[static_cast<std::size_t>(b)][s];
    }
    js.push_back(scales[s]);
    maxosc.push_back(*std::max_element(orow.begin() + lo[s], orow.begin() + hi[s]));
    medosc.push_back(median_of(std::vector<double>(orow.begin() + lo[s], orow.begin() + hi[s])));
  }
  est.h_min = slope_vs_minus_j(js, maxosc);
  est.h_typical = slope_vs_minus_j(js, medosc);
  // Tail counts: #{h_j <= upper edge} left of the typical exponent, #{h_j >= lower edge}
  // right of it. Counting a fixed-width bin instead picks up a factor 2^{j d Delta} - 1 that
  // grows with j and biases the slope upwards by O(1/j_range).
  std::vector<std::vector<double>> sorted(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const auto& hrow = f.h[static_cast<std::size_t>(scales[s] - f.j_lo)];
    sorted[s].assign(hrow.begin() + lo[s], hrow.begin() + hi[s]);
    std::sort(sorted[s].begin(), sorted[s].end());
  }
  for (int b = 0; b < nb; ++b) {
    bool any = false;
    for (std::int64_t c : est.counts[static_cast<std::size_t>(b)]) any = any || c > 0;
    if (!any) {
      est.dims.push_back(std::nullopt);
      continue;
    }
    const double lo_edge = h_lo + b * width;
    const double hi_edge = lo_edge + width;
    const bool left = est.centres[static_cast<std::size_t>(b)] <= est.h_typical;
    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < scales.size(); ++s) {
      const auto& v = sorted[s];
      const auto c = left ? std::upper_bound(v.begin(), v.end(), hi_edge) - v.begin()
                          : v.end() - std::lower_bound(v.begin(), v.end(), lo_edge);
      if (c > 0) {
        xs.push_back(scales[s]);
        ys.push_back(std::log2(static_cast<double>(c)));
      }
    }
    if (xs.size() <= 1) {
      est.dims.push_back(0.0);
    } else {
      const double slope = fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                                    Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())))
                               .slope;
      est.dims.push_back(std::clamp(slope, 0.0, 1.0));
    }
  }
  return est;
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

nlohmann::json opt_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json("empty"); }

}  // namespace

ExponentField exponent_field(const SamplePath& path) {
  const int J = log2_exact(static_cast<std::uint64_t>(path.n));
  if (J - 4 <= 6) fail(ErrorKind::Resolution, "exponent field: grid too coarse for the default scales (n >= 2^11)");
  return exponent_field(path, 6, J - 4);
}

ExponentField exponent_field(const SamplePath& path, int j_lo, int j_hi) {
  require(path.t0 == 0.0 && path.cells() == path.n, "exponent field: path must live on [0,1]");
  const int J = log2_exact(static_cast<std::uint64_t>(path.n));
  if (j_lo < 1 || j_hi <= j_lo || j_hi > J - 1) fail(ErrorKind::Precondition, "exponent field: degenerate j range");
  ExponentField f;
  f.n = path.n;
  f.j_lo = j_lo;
  f.j_hi = j_hi;
  const double osc0 = chord_range(path.values, 0, path.n);
  for (int j = j_lo; j <= j_hi; ++j) {
    const std::int64_t count = std::int64_t{1} << j;
    const std::int64_t w = path.n >> j;
    std::vector<double> hs(static_cast<std::size_t>(count)), os(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
      const std::int64_t a = std::max<std::int64_t>(0, (k - 1) * w);
      const std::int64_t b = std::min<std::int64_t>(path.n, (k + 2) * w);
      const double o = chord_range(path.values, a, b);
      os[static_cast<std::size_t>(k)] = o;
      hs[static_cast<std::size_t>(k)] = (o > 0.0 && osc0 > 0.0) ? -std::log2(o / osc0) / j : kInf;
    }
    f.h.push_back(std::move(hs));
    f.osc.push_back(std::move(os));
  }
  return f;
}

ExponentField exponent_field_from(std::int64_t n, int j_lo, std::vector<std::vector<double>> h) {
  require(!h.empty(), "exponent field: no scales");
  ExponentField f;
  f.n = n;
  f.j_lo = j_lo;
  f.j_hi = j_lo + static_cast<int>(h.size()) - 1;
  for (int j = f.j_lo; j <= f.j_hi; ++j) {
    auto& row = h[static_cast<std::size_t>(j - j_lo)];
    require(row.size() == (std::size_t{1} << j), "exponent field: scale j needs 2^j entries");
    std::vector<double> o(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) o[k] = std::exp2(-j * row[k]);
    f.osc.push_back(std::move(o));
  }
  f.h = std::move(h);
  return f;
}

int SpectrumEstimate::bin_of(double h) const {
  if (!std::isfinite(h)) return -1;
  const double x = (h - h_lo) / bin_width;
  const int nb = static_cast<int>(centres.size());
  if (x < 0.0 || x > nb) return -1;
  return std::min(nb - 1, static_cast<int>(std::floor(x)));
}

SpectrumEstimate coarse_spectrum(const ExponentField& field, double h_range_lo, double h_range_hi, double bin_width,
                                 int j_from, int j_to) {
  if (j_from == 0 && j_to == 0) {
    j_from = field.j_lo;
    j_to = field.j_hi;
    if (j_to - j_from < 2) fail(ErrorKind::Resolution, "coarse spectrum: field spans fewer than three scales");
  }
  if (j_from < field.j_lo || j_to > field.j_hi || j_to - j_from < 2)
    fail(ErrorKind::Precondition, "coarse spectrum: degenerate j range (need at least three scales)");
  std::vector<int> scales;
  std::vector<std::int64_t> lo, hi;
  for (int j = j_from; j <= j_to; ++j) {
    scales.push_back(j);
    lo.push_back(0);
    hi.push_back(std::int64_t{1} << j);
  }
  return spectrum_over(field, scales, lo, hi, h_range_lo, h_range_hi, bin_width);
}

SpectrumEstimate coarsen(const SpectrumEstimate& est, int factor) {
  require(factor >= 1, "coarsen: factor must be positive");
  SpectrumEstimate out = est;
  out.bin_width = est.bin_width * factor;
  out.centres.clear();
  out.dims.clear();
  out.counts.clear();
  for (std::size_t b = 0; b < est.centres.size(); b += static_cast<std::size_t>(factor)) {
    const std::size_t e = std::min(est.centres.size(), b + static_cast<std::size_t>(factor));
    out.centres.push_back(est.h_lo + (static_cast<double>(b / factor) + 0.5) * out.bin_width);
    std::optional<double> d;
    std::vector<std::int64_t> c(est.scales_used.size(), 0);
    for (std::size_t k = b; k < e; ++k) {
      if (est.dims[k]) d = d ? std::max(*d, *est.dims[k]) : *est.dims[k];
      for (std::size_t s = 0; s < c.size(); ++s) c[s] += est.counts[k][s];
    }
    out.dims.push_back(d);
    out.counts.push_back(c);
  }
  return out;
}

std::string SpectrumEstimate::to_csv() const {
  std::ostringstream os;
  os << "h,dim,count\n";
  for (std::size_t b = 0; b < centres.size(); ++b) {
    std::int64_t total = 0;
    for (std::int64_t c : counts[b]) total += c;
    os << num(centres[b]) << ',' << (dims[b] ? num(*dims[b]) : std::string("empty")) << ',' << total << '\n';
  }
  return os.str();
}

std::string SpectrumEstimate::to_json() const {
  nlohmann::json j;
  j["note"] = "box-counting (large-deviation) proxy for the Hausdorff spectrum";
  j["bin_width"] = bin_width;
  j["h"] = centres;
  nlohmann::json dj = nlohmann::json::array();
  for (const auto& d : dims) dj.push_back(opt_json(d));
  j["dim"] = dj;
  j["counts"] = counts;
  j["scales"] = scales_used;
  j["h_min"] = h_min;
  j["h_typical"] = h_typical;
  return j.dump(2);
}

void validate(const TheoreticalSpectrum& spec) {
  std::visit(overloaded{
                 [](const LevySpectrum& s) {
                   require(s.beta >= 0.0 && s.beta <= 2.0, "Levy spectrum: beta must lie in [0,2]");
                   require(s.beta_prime >= s.beta && s.beta_prime <= 2.0, "Levy spectrum: need beta <= beta' <= 2");
                 },
                 [](const LfsmSpectrum& s) {
                   require(s.alpha > 0.0 && s.alpha < 2.0, "LFSM spectrum: alpha must lie in (0,2)");
                   require(s.H > 0.0 && s.H < 1.0, "LFSM spectrum: H must lie in (0,1)");
                 },
                 [](const FlpSpectrum& s) {
                   require(s.beta >= 0.0 && s.beta <= 2.0, "FLP spectrum: beta must lie in [0,2]");
                   require(s.d > 0.0 && s.d < 0.5, "FLP spectrum: d must lie in (0,1/2)");
                 },
                 [](const LmsmSpectrum& s) {
                   require(s.alpha > 0.0 && s.alpha < 2.0, "LMSM spectrum: alpha must lie in (0,2)");
                   require(s.H_at_t > 0.0 && s.H_at_t < 1.0, "LMSM spectrum: H(t) must lie in (0,1)");
                 },
             },
             spec);
}

std::pair<double, double> support(const TheoreticalSpectrum& spec) {
  return std::visit(overloaded{
                        [](const LevySpectrum& s) {
                          return std::pair{0.0, s.beta_prime > 0.0 ? 1.0 / s.beta_prime : kInf};
                        },
                        [](const LfsmSpectrum& s) { return std::pair{s.H - 1.0 / s.alpha, s.H}; },
                        [](const FlpSpectrum& s) { return std::pair{s.d, s.beta > 0.0 ? s.d + 1.0 / s.beta : kInf}; },
                        [](const LmsmSpectrum& s) { return std::pair{s.H_at_t - 1.0 / s.alpha, s.H_at_t}; },
                    },
                    spec);
}

std::optional<double> theoretical(const TheoreticalSpectrum& spec, double h) {
  validate(spec);
  const auto [lo, hi] = support(spec);
  if (h < lo || h > hi) return std::nullopt;
  return std::visit(overloaded{
                        [&](const LevySpectrum& s) -> double {
                          if (s.beta_prime > 0.0 && h == hi) return 1.0;
                          return s.beta * h;
                        },
                        [&](const LfsmSpectrum& s) -> double { return s.alpha * (h - s.H) + 1.0; },
                        [&](const FlpSpectrum& s) -> double { return s.beta * (h - s.d); },
                        [&](const LmsmSpectrum& s) -> double { return s.alpha * (h - s.H_at_t) + 1.0; },
                    },
                    spec);
}

std::string describe(const TheoreticalSpectrum& spec) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const LevySpectrum& s) { os << "Levy{beta=" << s.beta << ",beta_prime=" << s.beta_prime << "}"; },
                 [&](const LfsmSpectrum& s) { os << "LFSM{alpha=" << s.alpha << ",H=" << s.H << "}"; },
                 [&](const FlpSpectrum& s) { os << "FLP{beta=" << s.beta << ",d=" << s.d << "}"; },
                 [&](const LmsmSpectrum& s) { os << "LMSM{alpha=" << s.alpha << ",H(t)=" << s.H_at_t << "}"; },
             },
             spec);
  return os.str();
}

std::vector<LocalizedSpectrum> localized_spectrum(const ExponentField& field, double t, const std::vector<double>& rhos,
                                                  double h_range_lo, double h_range_hi, double bin_width) {
  require(t > 0.0 && t < 1.0, "localized spectrum: t must be interior");
  for (std::size_t r = 1; r < rhos.size(); ++r) require(rhos[r] < rhos[r - 1], "localized spectrum: rho must decrease");
  std::vector<LocalizedSpectrum> out;
  for (double rho : rhos) {
    require(rho > 0.0, "localized spectrum: rho must be positive");
    if (2.0 * rho * static_cast<double>(field.n) < 64.0)
      fail(ErrorKind::Resolution, "localized spectrum: ball smaller than 64 grid points");
    std::vector<int> scales;
    std::vector<std::int64_t> lo, hi;
    for (int j = field.j_lo; j <= field.j_hi; ++j) {
      const double size = std::ldexp(1.0, -j);
      const std::int64_t count = std::int64_t{1} << j;
      // intervals whose centre lies in [t - rho, t + rho]
      const auto a = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil((t - rho) / size - 0.5)));
      const auto b = std::min<std::int64_t>(count, static_cast<std::int64_t>(std::floor((t + rho) / size - 0.5)) + 1);
      if (b - a >= 4) {
        scales.push_back(j);
        lo.push_back(a);
        hi.push_back(b);
      }
    }
    out.push_back({t, rho, spectrum_over(field, scales, lo, hi, h_range_lo, h_range_hi, bin_width)});
  }
  return out;
}

SigmaSprimeResult sigma_sprime_spectrum(const std::vector<FrontierEstimate>& frontiers, double sigma, double sprime,
                                        double tolerance) {
  if (frontiers.empty()) fail(ErrorKind::Precondition, "sigma-s' spectrum: empty batch");
  SigmaSprimeResult r;
  r.sigma = sigma;
  r.sprime = sprime;
  r.s = sigma - sprime;
  std::vector<double> members;
  for (const FrontierEstimate& fr : frontiers) {
    const auto& x = fr.sprime;
    require(!x.empty() && sprime >= x.front() - 1e-12 && sprime <= x.back() + 1e-12,
            "sigma-s' spectrum: s' outside the frontier grid");
    std::size_t k = 0;
    while (k + 2 < x.size() && x[k + 1] < sprime) ++k;
    double v = fr.sigma[k];
    if (x.size() > 1) {
      const double w = std::clamp((sprime - x[k]) / (x[k + 1] - x[k]), 0.0, 1.0);
      v = (1.0 - w) * fr.sigma[k] + w * fr.sigma[k + 1];
    }
    if (std::abs(v - sigma) <= tolerance) members.push_back(fr.t);
  }
  r.members = members.size();
  r.fraction = static_cast<double>(members.size()) / static_cast<double>(frontiers.size());
  if (members.empty()) return r;
  const int J = std::max(2, static_cast<int>(std::floor(std::log2(static_cast<double>(frontiers.size())))) - 1);
  std::vector<double> xs, ys;
  for (int j = 1; j <= J; ++j) {
    std::vector<std::int64_t> boxes;
    for (double t : members) boxes.push_back(static_cast<std::int64_t>(std::floor(std::ldexp(t, j))));
    std::sort(boxes.begin(), boxes.end());
    const auto distinct = std::unique(boxes.begin(), boxes.end()) - boxes.begin();
    xs.push_back(j);
    ys.push_back(std::log2(static_cast<double>(distinct)));
  }
  const double slope = fit_line(Eigen::Map<Vector>(xs.data(), static_cast<Eigen::Index>(xs.size())),
                                Eigen::Map<Vector>(ys.data(), static_cast<Eigen::Index>(ys.size())))
                           .slope;
  r.dimension = std::clamp(slope, 0.0, 1.0);
  return r;
}

std::optional<double> theoretical_for_bin(const TheoreticalSpectrum& spec, double lo, double hi) {
  // the bin holding the right end (the typical exponent, dimension 1) is judged there
  const auto [a, b] = support(spec);
  if (b >= lo && b <= hi) return theoretical(spec, b);
  if (auto v = theoretical(spec, 0.5 * (lo + hi))) return v;
  if (a >= lo && a <= hi) return theoretical(spec, a);
  return std::nullopt;
}

CompareReport compare(const SpectrumEstimate& est, const TheoreticalSpectrum& theory, double h_from, double h_to) {
  CompareReport rep;
  double sum = 0.0;
  for (std::size_t b = 0; b < est.centres.size(); ++b) {
    const double c = est.centres[b];
    if (c < h_from - 1e-12 || c > h_to + 1e-12) continue;
    const auto th = theoretical_for_bin(theory, c - 0.5 * est.bin_width, c + 0.5 * est.bin_width);
    const auto& d = est.dims[b];
    if (th && d) {
      const double dev = std::abs(*th - *d);
      rep.max_abs_dev = std::max(rep.max_abs_dev, dev);
      sum += dev;
      ++rep.compared;
    } else if (d) {
      rep.only_estimate.push_back(c);
    } else if (th) {
      rep.only_theory.push_back(c);
    }
  }
  if (rep.compared > 0) rep.mean_abs_dev = sum / static_cast<double>(rep.compared);
  return rep;
}

std::string CompareReport::to_json() const {
  nlohmann::json j;
  j["note"] = "estimates are box-counting proxies; the theory is a Hausdorff spectrum";
  j["max_abs_dev"] = max_abs_dev;
  j["mean_abs_dev"] = mean_abs_dev;
  j["compared_bins"] = compared;
  j["mass_outside_support"] = only_estimate;
  j["support_left_empty"] = only_theory;
  return j.dump(2);
}

}  // namespace multifrac

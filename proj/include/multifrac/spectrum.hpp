#ifndef MULTIFRAC_SPECTRUM_HPP
#define MULTIFRAC_SPECTRUM_HPP

#include "multifrac/levy_path.hpp"
#include "multifrac/regularity.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace multifrac {

// Hausdorff dimensions cannot be computed from finite data. Everything here uses the
// large-deviation (box-counting) proxy: at scale j the path is cut into 2^j dyadic
// intervals, each gets an oscillation exponent h_j(I), and d(h) is read off the growth
// rate of #{I : h_j(I) close to h} as j increases.

/// Per-scale oscillation exponents h_j(I) = -log2(osc_j(I) / osc_0) / j, where osc_j(I)
/// is the range of X minus its chord over I and its two neighbours and osc_0 the same
/// quantity over [0,1]. Zero oscillation gives +inf.
struct ExponentField {
  std::int64_t n = 0;  // grid points per unit time of the source path
  int j_lo = 0;
  int j_hi = 0;
  std::vector<std::vector<double>> h;    // h[j - j_lo][k], k < 2^j
  std::vector<std::vector<double>> osc;  // the matching oscillations

  int scales() const { return j_hi - j_lo + 1; }
};

/// Default scales [6, log2(n) - 4].
ExponentField exponent_field(const SamplePath& path);
ExponentField exponent_field(const SamplePath& path, int j_lo, int j_hi);

/// Field from explicit per-scale exponents (analytic constructions and tests).
ExponentField exponent_field_from(std::int64_t n, int j_lo, std::vector<std::vector<double>> h);

struct SpectrumEstimate {
  double h_lo = 0.0;
  double bin_width = 0.05;
  std::vector<double> centres;
  std::vector<std::optional<double>> dims;  // empty bin -> nullopt
  std::vector<std::vector<std::int64_t>> counts;  // counts[bin][scale]
  std::vector<int> scales_used;
  /// Support edges from the extreme and median oscillations: h_min is the slope of
  /// log2 max_I osc_j(I), h_typical that of the median, both against -j.
  double h_min = 0.0;
  double h_typical = 0.0;

  /// Index of the bin containing h (closed on the right for the last bin), or -1.
  int bin_of(double h) const;
  std::string to_csv() const;
  std::string to_json() const;
};

/// d(h) per bin as the slope of log2 N_j(h) against j over the field's scales in
/// [j_from, j_to] (all scales when both are zero). Bins cover [h_range_lo, h_range_hi].
SpectrumEstimate coarse_spectrum(const ExponentField& field, double h_range_lo, double h_range_hi,
                                 double bin_width = 0.05, int j_from = 0, int j_to = 0);

/// Max-merge of `factor` adjacent bins.
SpectrumEstimate coarsen(const SpectrumEstimate& est, int factor);

struct LevySpectrum {
  double beta = 1.0;
  double beta_prime = 1.0;
};
struct LfsmSpectrum {
  double alpha = 1.5;
  double H = 0.8;
};
struct FlpSpectrum {
  double beta = 1.0;
  double d = 0.3;
};
struct LmsmSpectrum {
  double alpha = 1.5;
  double H_at_t = 0.8;  // H(t) at the point of interest
};
using TheoreticalSpectrum = std::variant<LevySpectrum, LfsmSpectrum, FlpSpectrum, LmsmSpectrum>;

void validate(const TheoreticalSpectrum& spec);
/// Closed-form spectrum; nullopt outside the support (dimension -inf).
std::optional<double> theoretical(const TheoreticalSpectrum& spec, double h);
/// Closed support [lo, hi] (hi may be +inf).
std::pair<double, double> support(const TheoreticalSpectrum& spec);
std::string describe(const TheoreticalSpectrum& spec);

struct LocalizedSpectrum {
  double t = 0.0;
  double rho = 0.0;
  SpectrumEstimate estimate;
};

/// coarse_spectrum restricted to the intervals centred in B(t, rho), for each rho.
std::vector<LocalizedSpectrum> localized_spectrum(const ExponentField& field, double t,
                                                  const std::vector<double>& rhos, double h_range_lo,
                                                  double h_range_hi, double bin_width = 0.05);

struct SigmaSprimeResult {
  double sigma = 0.0;
  double sprime = 0.0;
  double s = 0.0;  // sigma - s'
  std::optional<double> dimension;
  double fraction = 0.0;  // share of sampled times in the set
  std::size_t members = 0;
};

/// Box-counting dimension of {t : |sigma_t(s') - sigma| <= tolerance} over a batch of
/// frontiers computed on a uniform t grid.
SigmaSprimeResult sigma_sprime_spectrum(const std::vector<FrontierEstimate>& frontiers, double sigma, double sprime,
                                        double tolerance = 0.1);

struct CompareReport {
  double max_abs_dev = 0.0;
  double mean_abs_dev = 0.0;
  std::size_t compared = 0;
  std::vector<double> only_estimate;  // bin centres with mass outside the theoretical support
  std::vector<double> only_theory;    // theoretical support bins the estimate left empty
  std::string to_json() const;
};

/// Theory for a bin: the value at the right support end if the bin contains it (dimension 1
/// there), else at the centre, else at a contained left end.
std::optional<double> theoretical_for_bin(const TheoreticalSpectrum& spec, double lo, double hi);

/// Bin-wise comparison over bins with centres in [h_from, h_to].
CompareReport compare(const SpectrumEstimate& est, const TheoreticalSpectrum& theory,
                      double h_from = -std::numeric_limits<double>::infinity(),
                      double h_to = std::numeric_limits<double>::infinity());

}  // namespace multifrac

#endif  // MULTIFRAC_SPECTRUM_HPP

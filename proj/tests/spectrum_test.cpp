#include "multifrac/spectrum.hpp"

#include <doctest.h>

#include <cmath>

using namespace multifrac;

namespace {

// h = left on [0, 1/2), right on [1/2, 1)
ExponentField two_regions(double left, double right, int j_lo = 6, int j_hi = 12) {
  std::vector<std::vector<double>> h;
  for (int j = j_lo; j <= j_hi; ++j) {
    const std::size_t m = std::size_t{1} << j;
    std::vector<double> row(m);
    for (std::size_t k = 0; k < m; ++k) row[k] = k < m / 2 ? left : right;
    h.push_back(row);
  }
  return exponent_field_from(std::int64_t{1} << (j_hi + 4), j_lo, h);
}

}  // namespace

TEST_CASE("homogeneous field has a single full-dimension bin") {
  const SpectrumEstimate s = coarse_spectrum(two_regions(0.5, 0.5), 0.0, 1.5, 0.05);
  const int b = s.bin_of(0.5);
  for (std::size_t k = 0; k < s.dims.size(); ++k) {
    if (static_cast<int>(k) == b) {
      REQUIRE(s.dims[k]);
      CHECK(*s.dims[k] == doctest::Approx(1.0).epsilon(1e-9));
    } else {
      CHECK_FALSE(s.dims[k]);
    }
  }
  CHECK(s.h_typical == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("two-region field") {
  const ExponentField f = two_regions(0.3, 0.7);
  const SpectrumEstimate s = coarse_spectrum(f, 0.0, 1.5, 0.05);
  CHECK(*s.dims[s.bin_of(0.3)] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(*s.dims[s.bin_of(0.7)] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(s.dims[s.bin_of(0.5)]);
  CHECK(s.h_min == doctest::Approx(0.3).epsilon(1e-9));
  const auto loc = localized_spectrum(f, 0.25, {0.2, 0.1, 0.05}, 0.0, 1.5, 0.05);
  for (const auto& l : loc) {
    CHECK(l.estimate.dims[l.estimate.bin_of(0.3)]);
    CHECK_FALSE(l.estimate.dims[l.estimate.bin_of(0.7)]);
  }
  const auto homo = localized_spectrum(two_regions(0.5, 0.5), 0.4, {0.25, 0.125}, 0.0, 1.5, 0.05);
  CHECK(homo[0].estimate.dims == homo[1].estimate.dims);
}

TEST_CASE("closed-form spectra") {
  CHECK(*theoretical(LevySpectrum{1.2, 1.2}, 0.5) == doctest::Approx(0.6));
  CHECK(*theoretical(LfsmSpectrum{1.5, 0.8}, 0.5) == doctest::Approx(0.55));
  CHECK_FALSE(theoretical(FlpSpectrum{1.0, 0.3}, 1.4));
  CHECK(*theoretical(FlpSpectrum{1.0, 0.3}, 1.0) == doctest::Approx(0.7));
  CHECK(*theoretical(LevySpectrum{1.2, 1.2}, 1.0 / 1.2) == doctest::Approx(1.0));
  CHECK_FALSE(theoretical(LevySpectrum{1.2, 1.2}, 0.9));
  CHECK(*theoretical_for_bin(LevySpectrum{1.2, 1.2}, 0.8, 0.85) == doctest::Approx(1.0));
  CHECK_THROWS_AS(validate(TheoreticalSpectrum{FlpSpectrum{1.0, 0.7}}), Error);
}

TEST_CASE("comparison of estimate and theory") {
  std::vector<std::vector<double>> h;
  // exponents spread so that bins near 0.5 hold power-law many intervals
  const SpectrumEstimate s = coarse_spectrum(two_regions(0.5, 0.5), 0.0, 1.5, 0.05);
  const CompareReport c = compare(s, LevySpectrum{2.0, 2.0});
  CHECK(c.compared == 1);
  CHECK(c.max_abs_dev == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_FALSE(c.only_theory.empty());
}

TEST_CASE("sigma-s' sets from frontier batches") {
  std::vector<FrontierEstimate> frs;
  for (int i = 0; i < 64; ++i) {
    FrontierEstimate f;
    f.t = (i + 0.5) / 64;
    f.sprime = {-0.5, 0.0};
    f.sigma = {-0.37, 0.13};
    f.sigma_raw = f.sigma;
    f.stderr_ = {0.01, 0.01};
    f.shifted = {true, false};
    frs.push_back(f);
  }
  const SigmaSprimeResult empty = sigma_sprime_spectrum(frs, 0.5, 0.0);
  CHECK(empty.members == 0);
  CHECK_FALSE(empty.dimension);
  const SigmaSprimeResult all = sigma_sprime_spectrum(frs, 0.13, 0.0);
  CHECK(all.members == 64);
  REQUIRE(all.dimension);
  CHECK(*all.dimension == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("coarsening merges bins by maximum") {
  const SpectrumEstimate s = coarse_spectrum(two_regions(0.3, 0.7), 0.0, 1.5, 0.05);
  const SpectrumEstimate c = coarsen(s, 2);
  CHECK(c.bin_width == doctest::Approx(0.1));
  CHECK(*c.dims[c.bin_of(0.3)] == doctest::Approx(1.0).epsilon(1e-9));
}

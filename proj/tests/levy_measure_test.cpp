#include "multifrac/levy_measure.hpp"

#include <doctest.h>

#include <cmath>

using namespace multifrac;

TEST_CASE("tail mass closed forms") {
  CHECK(tail_mass(StablePower{1.0, 1.0, 1.0}, 0.5, 1.0).get() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tail_mass(AtomicSymmetric{{{0.5, 3.0}}}, 0.25, 1.0).get() == doctest::Approx(6.0));
  CHECK_FALSE(tail_mass(StablePower{1.2, 1.0, 1.0}, 0.0, 1.0).is_finite());
  // atom exactly at the inner radius is excluded, at the outer radius included
  CHECK(tail_mass(AtomicSymmetric{{{0.5, 3.0}}}, 0.5, 1.0).get() == 0.0);
  CHECK(tail_mass(AtomicSymmetric{{{0.5, 3.0}}}, 0.25, 0.5).get() == doctest::Approx(6.0));
}

TEST_CASE("compensator drift") {
  CHECK(compensator_drift(StablePower{1.3, 2.0, 2.0}, 0.01, 1.0).get() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(compensator_drift(StablePower{1.5, 1.0, 0.0}, 0.25, 1.0).get() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(compensator_drift(one_sided(StablePower{1.5, 1.0, 1.0}), 0.25, 1.0).get() == doctest::Approx(2.0));
  CHECK(compensator_drift(AtomicSymmetric{{{0.5, 3.0}, {0.1, 7.0}}}, 0.0, 1.0).get() == 0.0);
}

TEST_CASE("small jump variance") {
  CHECK(small_jump_variance(StablePower{1.0, 1.0, 1.0}, 1.0) == doctest::Approx(2.0));
  CHECK(small_jump_variance(AtomicSymmetric{{{0.5, 3.0}}}, 0.25) == 0.0);
  const StablePower m{1.5, 1.0, 1.0};
  const double v6 = small_jump_variance(m, 1e-6);
  CHECK(v6 < small_jump_variance(m, 1e-3));
  CHECK(v6 < 1e-2);
}

TEST_CASE("Blumenthal-Getoor index") {
  CHECK(blumenthal_getoor(StablePower{1.2, 1.0, 1.0}) == 1.2);
  CHECK(blumenthal_getoor(AtomicSymmetric{{{0.3, 5.0}}}) == 0.0);
  Example2Params p;
  p.n_max = 6;
  CHECK(estimate_blumenthal_getoor(example2_measure(p)) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(estimate_blumenthal_getoor(StablePower{0.7, 1.0, 2.0}) - 0.7) < 0.01);
}

TEST_CASE("dyadic-atom measure recursion") {
  Example2Params p;
  const auto j = example2_scales(p);
  REQUIRE(j.size() >= 2);
  CHECK(j[1] == doctest::Approx((2 * 0.62 + 1) / 0.3));
  CHECK(j[1] == doctest::Approx(7.4667).epsilon(1e-4));
  p.n_max = 0;
  const AtomicSymmetric single = example2_measure(p);
  REQUIRE(single.atoms.size() == 1);
  CHECK(single.atoms[0].size == doctest::Approx(0.25));
  CHECK(single.atoms[0].mass == doctest::Approx(2.0));
  Example2Params bad;
  bad.gamma_ex = 0.99;
  bad.beta = 0.6;
  CHECK_THROWS_AS(example2_scales(bad), Error);
}

TEST_CASE("measure text round trip") {
  const LevyMeasureSpec a = parse_measure("kind=atomic, atoms=0.5:3;0.25:10  # two atoms");
  const auto& at = std::get<AtomicSymmetric>(a);
  REQUIRE(at.atoms.size() == 2);
  CHECK(at.atoms[1].mass == 10.0);
  const LevyMeasureSpec s = parse_measure(format_measure(StablePower{1.25, 0.5, 2.0}));
  CHECK(std::get<StablePower>(s).alpha == 1.25);
  CHECK(std::get<StablePower>(s).c_minus == 2.0);
  CHECK_THROWS_AS(parse_measure("alpha=1"), Error);
  CHECK_THROWS_AS(validate(LevyMeasureSpec{StablePower{2.5, 1.0, 1.0}}), Error);
}

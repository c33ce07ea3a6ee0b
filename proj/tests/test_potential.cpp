#include <doctest.h>

#include <cmath>

#include "swh/errors.hpp"
#include "swh/potential.hpp"

using namespace swh;

TEST_SUITE_BEGIN("potential");

TEST_CASE("phi in reduced coordinates") {
  RadialPotential zero = zero_potential();
  RadialPotential quartic = quartic_potential(1.0, 1.0);

  // v = u makes |v-u|^2 = 0
  CHECK(phi(1.0, 0.7, 0.7, zero) == doctest::Approx(0.0).epsilon(1e-15));
  // r = 0: phi = l^2/2 regardless of c
  for (double c : {-1.0, 0.0, 1.0})
    CHECK(phi(c, 0.0, 0.5, zero) == doctest::Approx(0.125));
  // closed form: 1/2 - 1 + 1/2 + (1/4 - 1/2)
  CHECK(phi(1.0, 1.0, 1.0, quartic) == doctest::Approx(-0.25));
}

TEST_CASE("speed_map_inverse") {
  RadialPotential zero = zero_potential();
  RadialPotential quartic = quartic_potential(1.0, 1.0);

  CHECK(speed_map_inverse(0.0, quartic) == 0.0);
  // r + V'(r) = r^3 for alpha = beta = 1
  CHECK(speed_map_inverse(0.5, quartic) ==
        doctest::Approx(std::cbrt(0.5)).epsilon(1e-12));
  CHECK(speed_map_inverse(2.0, zero) == doctest::Approx(2.0).epsilon(1e-13));

  // residual of the defining equation
  for (double l : {0.1, 0.9, 2.5}) {
    double rbar = speed_map_inverse(l, quartic);
    CHECK(std::abs(rbar + quartic.d1(rbar) - l) <= 1e-12 * std::max(1.0, l));
  }
}

TEST_CASE("speed map is strictly increasing and preserves [0,r0]") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double r0v = r0(quartic);
  double prev = -1.0;
  for (int k = 0; k < 50; ++k) {
    double l = 4.0 * (k + 1) / 50.0;
    double rbar = speed_map_inverse(l, quartic);
    CHECK(rbar > prev);
    prev = rbar;
    if (l < r0v) CHECK(rbar < r0v + 1e-12);
    if (l > r0v) CHECK(rbar > r0v - 1e-12);
  }
}

TEST_CASE("r0") {
  CHECK(r0(quartic_potential(1.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r0(quartic_potential(2.0, 0.5)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(r0(zero_potential()), doctest::Contains("constant sign"),
                       NumericsError);
  CHECK(r0_or(zero_potential(), 0.0) == 0.0);
}

TEST_CASE("derivatives agree with central differences") {
  for (const RadialPotential& pot :
       {zero_potential(), quartic_potential(1.0, 1.0),
        quartic_potential(2.0, 0.5)}) {
    for (double r : {0.1, 1.0, 3.0}) {
      double h = 1e-5 * std::max(1.0, r);
      double fd1 = (pot.value(r + h) - pot.value(r - h)) / (2.0 * h);
      double fd2 = (pot.d1(r + h) - pot.d1(r - h)) / (2.0 * h);
      double fd3 = (pot.d2(r + h) - pot.d2(r - h)) / (2.0 * h);
      double scale1 = std::max(1e-3, std::abs(pot.d1(r)));
      double scale2 = std::max(1e-3, std::abs(pot.d2(r)));
      double scale3 = std::max(1e-3, std::abs(pot.d3(r)));
      CHECK(std::abs(fd1 - pot.d1(r)) / scale1 < 1e-6);
      CHECK(std::abs(fd2 - pot.d2(r)) / scale2 < 1e-6);
      CHECK(std::abs(fd3 - pot.d3(r)) / scale3 < 1e-6);
    }
  }
}

TEST_CASE("V'(0) = 0 holds for the built-ins") {
  CHECK(zero_potential().d1(0.0) == 0.0);
  CHECK(quartic_potential(3.0, 0.7).d1(0.0) == 0.0);
}

TEST_CASE("parse_potential") {
  CHECK(parse_potential("zero").label == "zero");
  RadialPotential q = parse_potential("quartic:alpha=2,beta=0.5");
  CHECK(q.value(1.0) == doctest::Approx(0.25 * 0.5 - 0.5 * 2.0));
  CHECK_THROWS_AS(parse_potential("cubic"), ConfigError);
  CHECK_THROWS_AS(parse_potential("quartic:alpha=1"), ConfigError);
  CHECK_THROWS_AS(parse_potential("quartic:alpha=1,beta=-2"), ConfigError);
  CHECK_THROWS_AS(parse_potential("quartic:alpha=1,gamma=2,beta=1"),
                  ConfigError);
}

TEST_CASE("confinement probe rejects a deconfining potential") {
  RadialPotential bad;
  bad.value = [](double r) { return -0.6 * r * r; };
  bad.d1 = [](double r) { return -1.2 * r; };
  bad.d2 = [](double) { return -1.2; };
  bad.label = "bad";
  CHECK_THROWS_AS(probe_confinement(bad), ConfigError);
}

TEST_SUITE_END();

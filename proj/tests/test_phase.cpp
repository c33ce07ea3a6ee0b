#include <doctest.h>

#include <cmath>
#include <vector>

#include "swh/errors.hpp"
#include "swh/phase.hpp"

using namespace swh;

TEST_SUITE_BEGIN("phase");

namespace {

const double kPi = 3.14159265358979323846;

// Composite Simpson on [0, hi]; the oracle for the d-dependent critical
// diffusion formula of the alpha = beta = 1 quartic potential:
//   sqrt(sigma0) = (1/d) Int z^{d+1} exp(-z^4/4) / Int z^{d-1} exp(-z^4/4).
double simpson_z_moment(int power, double hi, int n) {
  auto f = [&](double z) { return std::pow(z, power) * std::exp(-0.25 * z * z * z * z); };
  double h = hi / n;
  double acc = f(0.0) + f(hi);
  for (int k = 1; k < n; ++k) acc += (k % 2 ? 4.0 : 2.0) * f(k * h);
  return acc * h / 3.0;
}

double sigma0_oracle(int d) {
  double num = simpson_z_moment(d + 1, 8.0, 4096);
  double den = simpson_z_moment(d - 1, 8.0, 4096);
  double root = num / den / d;
  return root * root;
}

}  // namespace

TEST_CASE("find_sigma0") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);

  SUBCASE("d = 2 closed form 1/pi") {
    CHECK(std::abs(find_sigma0(2, quartic) - 1.0 / kPi) < 1e-6);
  }
  SUBCASE("d = 3 against the 1-D z-integral oracle") {
    CHECK(std::abs(find_sigma0(3, quartic) - sigma0_oracle(3)) < 1e-6);
  }
  SUBCASE("invariant under halving rel_tol") {
    double a = find_sigma0(2, quartic, 1e-10);
    double b = find_sigma0(2, quartic, 5e-11);
    CHECK(std::abs(a - b) < 1e-8);
  }
  SUBCASE("zero potential has no sign change") {
    CHECK_THROWS_AS(find_sigma0(2, zero_potential()), NumericsError);
    try {
      find_sigma0(2, zero_potential());
    } catch (const NumericsError& e) {
      CHECK(e.code() == errc::no_sign_change);
    }
  }
}

TEST_CASE("find_l_star") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);

  SUBCASE("disordered above sigma0") {
    CHECK(find_l_star(2, 0.35, quartic) == 0.0);
    CHECK(find_l_star(2, 0.5, quartic) == 0.0);
  }
  SUBCASE("small sigma: l close to r0 - sigma d/2") {
    double l = find_l_star(2, 0.05, quartic);
    CHECK(l > 0.0);
    CHECK(l < 1.0);
    CHECK(std::abs(l - 0.95) < 0.02);
  }
  SUBCASE("matches brute-force maximization of Z") {
    // coarse pass over [0, 3(r0+1)], then a 1e-4 grid around the winner
    double sigma = 0.2;
    auto z_of = [&](double l) {
      EquilibriumSpec spec{2, sigma, l, quartic};
      return log_Z(spec, make_rule(spec));
    };
    double best_l = 0.0, best = z_of(0.0);
    for (int k = 1; k <= 300; ++k) {
      double l = 6.0 * k / 300.0;
      double z = z_of(l);
      if (z > best) {
        best = z;
        best_l = l;
      }
    }
    for (int k = -100; k <= 100; ++k) {
      double l = best_l + 1e-4 * k;
      if (l < 0.0) continue;
      double z = z_of(l);
      if (z > best) {
        best = z;
        best_l = l;
      }
    }
    CHECK(std::abs(find_l_star(2, sigma, quartic) - best_l) < 1e-3);
  }
  SUBCASE("zero potential is flagged as a plateau") {
    CHECK_THROWS_AS(find_l_star(2, 0.3, zero_potential()), NumericsError);
    try {
      find_l_star(2, 0.3, zero_potential());
    } catch (const NumericsError& e) {
      CHECK((e.code() == errc::plateau || e.code() == errc::multiple_maxima));
    }
  }
}

TEST_CASE("equilibrium conditions at l_star") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double sigma = 0.2;
  double l = find_l_star(2, sigma, quartic);
  EquilibriumSpec spec{2, sigma, l, quartic};
  QuadratureRule rule = make_rule(spec);
  CHECK(std::abs(H(spec, rule)) < 1e-8);
  CHECK(d2Z_dll(spec, rule) * sigma * sigma / Z(spec, rule) <= 1e-10);
  // weighted moments at the critical point
  CHECK(weighted_moment([](double c, double r) { return r * c; }, spec, rule) ==
        doctest::Approx(l).epsilon(1e-8));
  int d = spec.d;
  CHECK(weighted_moment(
            [d](double c, double r) { return r * r * (1.0 - c * c) / (d - 1); },
            spec, rule) == doctest::Approx(sigma).epsilon(1e-8));
}

TEST_CASE("sweep") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  std::vector<double> grid;
  for (double s = 0.1; s <= 0.451; s += 0.05) grid.push_back(s);
  PhaseDiagram diag = sweep(2, quartic, grid);

  CHECK(diag.sigma0 == doctest::Approx(1.0 / kPi).epsilon(1e-8));
  for (size_t k = 0; k < diag.sigmas.size(); ++k) {
    if (diag.sigmas[k] < diag.sigma0 - 1e-9)
      CHECK(diag.l_values[k] > 0.0);
    else
      CHECK(diag.l_values[k] == 0.0);
  }
  // observed monotone decrease of the ordered branch (regression)
  for (size_t k = 0; k + 1 < diag.sigmas.size(); ++k)
    if (diag.l_values[k + 1] > 0.0)
      CHECK(diag.l_values[k + 1] < diag.l_values[k]);
  CHECK(continuity_violations(diag).empty());
}

TEST_CASE("ordered branch vanishes at sigma0") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double sigma0 = find_sigma0(2, quartic);
  double prev = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    double l = find_l_star(2, sigma0 - eps, quartic);
    CHECK(l > 0.0);
    CHECK(l < prev);
    prev = l;
  }
  CHECK(prev < 0.1);
}

TEST_CASE("small_sigma_slope") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  SUBCASE("closed form -d/2 for the unit quartic") {
    CHECK(small_sigma_slope(2, quartic) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(small_sigma_slope(3, quartic) == doctest::Approx(-1.5).epsilon(1e-12));
  }
  SUBCASE("finite differences of the branch agree to 5%") {
    double l1 = find_l_star(2, 0.01, quartic);
    double l2 = find_l_star(2, 0.005, quartic);
    double fd = (l1 - l2) / 0.005;
    CHECK(std::abs(fd - (-1.0)) < 0.05);
  }
  SUBCASE("zero potential: flat second derivative") {
    CHECK_THROWS_AS(small_sigma_slope(2, zero_potential()), NumericsError);
    try {
      small_sigma_slope(2, zero_potential());
    } catch (const NumericsError& e) {
      CHECK(e.code() == errc::flat_second_derivative);
    }
  }
  SUBCASE("missing third derivative is a usage error") {
    RadialPotential crippled = quartic_potential(1.0, 1.0);
    crippled.d3 = nullptr;
    CHECK_THROWS_AS(small_sigma_slope(2, crippled), ConfigError);
  }
}

TEST_CASE("laplace_sign_probe") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  CHECK(laplace_sign_probe(2, 0.5, quartic) == 1);
  CHECK(laplace_sign_probe(2, 1.0, quartic) == 0);
  CHECK(laplace_sign_probe(2, 2.0, quartic) == -1);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <functional>

#include "swh/errors.hpp"
#include "swh/gci.hpp"
#include "swh/phase.hpp"

using namespace swh;

TEST_SUITE_BEGIN("gci");

namespace {

const std::function<double(double, double)> maxwell_chi = [](double th,
                                                             double r) {
  return r * std::sin(th);
};

std::function<double(double, double)> maxwell_chi_omega(double l) {
  return [l](double th, double r) { return r * std::cos(th) - l; };
}

}  // namespace

TEST_CASE("Maxwellian analytic solutions") {
  RadialPotential zero = zero_potential();
  for (int d : {2, 3}) {
    EquilibriumSpec spec{d, 0.5, 1.0, zero};
    Mesh2D mesh = make_mesh(spec, 256, 256);
    SolveStats s1, s2;
    std::vector<double> chi = solve_chi(spec, mesh, &s1);
    std::vector<double> om = solve_chi_omega(spec, mesh, &s2);
    CHECK(weighted_l2_error(mesh, spec, chi, maxwell_chi) < 1e-3);
    CHECK(weighted_l2_error(mesh, spec, om, maxwell_chi_omega(spec.l)) < 1e-3);
    CHECK(s1.residual < 1e-10);
    CHECK(s2.residual < 1e-10);
  }
}

TEST_CASE("pole Dirichlet values and the mean-zero constraint") {
  EquilibriumSpec spec{2, 0.5, 1.0, zero_potential()};
  Mesh2D mesh = make_mesh(spec, 64, 64);
  GciSolution sol = solve_gci(spec, mesh);
  for (int j = 0; j < mesh.nr(); ++j) {
    CHECK(sol.chi[mesh.index(0, j)] == 0.0);
    CHECK(sol.chi[mesh.index(mesh.nt() - 1, j)] == 0.0);
  }
  CHECK(sol.residuals.chi_omega_mean < 1e-12);
}

TEST_CASE("Galerkin energy identities hold to machine precision") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double l = find_l_star(2, 0.2, quartic);
  EquilibriumSpec spec{2, 0.2, l, quartic};
  Mesh2D mesh = make_mesh(spec, 128, 128);
  GciSolution sol = solve_gci(spec, mesh);
  CHECK(sol.residuals.chi_energy_gap < 1e-12);
  CHECK(sol.residuals.chi_omega_energy_gap < 1e-12);
}

TEST_CASE("compatibility gate") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double l = find_l_star(2, 0.2, quartic);
  EquilibriumSpec off{2, 0.2, l + 0.3, quartic};
  Mesh2D mesh = make_mesh(off, 32, 32);
  CHECK_THROWS_AS(solve_chi_omega(off, mesh), NumericsError);
  try {
    solve_chi_omega(off, mesh);
  } catch (const NumericsError& e) {
    CHECK(e.code() == errc::incompatible);
  }
  // the zero potential has a global plateau: every l is compatible
  EquilibriumSpec plateau{2, 0.4, 1.3, zero_potential()};
  Mesh2D mesh2 = make_mesh(plateau, 32, 32);
  CHECK_NOTHROW(solve_chi_omega(plateau, mesh2));
}

TEST_CASE("mesh reflection invariance for a theta-symmetric weight") {
  // l = 0 makes the weight even about theta = pi/2 (chi problem only; it is
  // well defined at l = 0 even though the physical invariant needs l > 0).
  EquilibriumSpec spec{2, 0.3, 0.0, quartic_potential(1.0, 1.0)};
  Mesh2D mesh = make_mesh(spec, 96, 96);
  Mesh2D refl = reflect_theta(mesh);
  std::vector<double> a = solve_chi(spec, mesh);
  std::vector<double> b = solve_chi(spec, refl);
  // measured in the weighted norm: far-tail nodes carry ~1e-16 weight and
  // the iterative solve legitimately leaves them at its residual level
  std::vector<double> diff(a.size());
  for (int j = 0; j < mesh.nr(); ++j)
    for (int i = 0; i < mesh.nt(); ++i)
      diff[mesh.index(i, j)] =
          a[mesh.index(i, j)] - b[refl.index(mesh.nt() - 1 - i, j)];
  double norm = weighted_l2_norm(mesh, spec, a);
  CHECK(weighted_l2_norm(mesh, spec, diff) <= 1e-10 * norm);
}

TEST_CASE("truncation radius stability") {
  RadialPotential quartic = quartic_potential(1.0, 1.0);
  double l = find_l_star(2, 0.2, quartic);
  EquilibriumSpec spec{2, 0.2, l, quartic};
  double Rm = envelope_radius(spec);
  Mesh2D m1 = make_mesh(spec, 192, 192, 0.0, Rm);
  Mesh2D m2 = make_mesh(spec, 192, 240, 0.0, 1.25 * Rm);
  std::vector<double> chi1 = solve_chi(spec, m1);
  std::vector<double> chi2 = solve_chi(spec, m2);
  double c1 = weighted_field_integral(m1, spec, chi1, maxwell_chi) /
              weighted_measure(m1, spec);
  double c2 = weighted_field_integral(m2, spec, chi2, maxwell_chi) /
              weighted_measure(m2, spec);
  CHECK(std::abs(c1 - c2) <= 1e-6 * std::abs(c1));
}

TEST_CASE("self-convergence ladder (quick)") {
  EquilibriumSpec spec{2, 0.5, 1.0, zero_potential()};
  std::function<double(double, double)> om = maxwell_chi_omega(spec.l);
  ConvergenceStudy study = convergence_study(spec, 24, 3, &maxwell_chi, &om);
  for (double p : study.chi_orders) CHECK(p == doctest::Approx(2.0).epsilon(0.15));
  for (double p : study.chi_omega_orders)
    CHECK(p == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("mesh construction") {
  EquilibriumSpec spec{2, 0.3, 0.8, quartic_potential(1.0, 1.0)};
  Mesh2D mesh = make_mesh(spec, 40, 56);
  CHECK(mesh.nt() == 41);
  CHECK(mesh.nr() == 57);
  CHECK(mesh.theta_nodes.front() == 0.0);
  CHECK(mesh.theta_nodes.back() ==
        doctest::Approx(3.14159265358979323846).epsilon(1e-15));
  CHECK(mesh.r_nodes.front() > 0.0);
  // nested refinement reproduces coarse nodes exactly
  Mesh2D fine = make_mesh(spec, 80, 112);
  for (int i = 0; i < mesh.nt(); ++i)
    CHECK(fine.theta_nodes[2 * i] == mesh.theta_nodes[i]);
  for (int j = 0; j < mesh.nr(); ++j)
    CHECK(fine.r_nodes[2 * j] == mesh.r_nodes[j]);
  // the envelope condition holds at the default R_max
  CHECK(mesh.r_nodes.back() == doctest::Approx(envelope_radius(spec)));
}

TEST_SUITE_END();

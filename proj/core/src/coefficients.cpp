#include "swh/coefficients.hpp"

#include <cmath>

#include "swh/errors.hpp"

namespace swh {

namespace {

double checked_ratio(double num, double den, const char* what) {
  if (!std::isfinite(den) || std::abs(den) < 1e-250)
    throw NumericsError(errc::zero_denominator,
                        std::string("vanishing denominator in ") + what);
  return num / den;
}

struct Moments {
  double n0 = 0.0;
  double perp1 = 0.0, perp2 = 0.0;
  double par1 = 0.0, par2 = 0.0, par3 = 0.0;
};

Moments field_moments(const GciSolution& gci) {
  const EquilibriumSpec& s = gci.spec;
  const Mesh2D& mesh = gci.mesh;
  const int d = s.d;
  Moments m;
  m.n0 = weighted_measure(mesh, s);
  m.perp1 = weighted_field_integral(
                mesh, s, gci.chi,
                [&](double th, double r) { return r * std::sin(th); }) /
            ((d - 1) * m.n0);
  m.perp2 = weighted_field_integral(mesh, s, gci.chi,
                                    [&](double th, double r) {
                                      return r * r * std::cos(th) *
                                             std::sin(th);
                                    }) /
            ((d - 1) * m.n0);
  if (!gci.chi_omega.empty()) {
    m.par1 = weighted_field_integral(mesh, s, gci.chi_omega,
                                     [&](double th, double r) {
                                       return r * std::cos(th) - s.l;
                                     }) /
             m.n0;
    m.par2 = weighted_field_integral(mesh, s, gci.chi_omega,
                                     [&](double th, double r) {
                                       double rc = r * std::cos(th);
                                       return 0.5 * rc * rc;
                                     }) /
             m.n0;
    m.par3 = weighted_field_integral(mesh, s, gci.chi_omega,
                                     [&](double th, double r) {
                                       double rs = r * std::sin(th);
                                       return rs * rs / (d - 1);
                                     }) /
             m.n0;
  }
  return m;
}

}  // namespace

double c_perp(const GciSolution& gci) {
  if (!(gci.spec.l > 0.0))
    throw ConfigError("c_perp requires an ordered state (l > 0)");
  Moments m = field_moments(gci);
  return checked_ratio(m.perp2, gci.spec.l * m.perp1, "c_perp");
}

std::pair<double, double> c_par_and_prime(const GciSolution& gci) {
  if (!(gci.spec.l > 0.0))
    throw ConfigError("c_par requires an ordered state (l > 0)");
  if (gci.chi_omega.empty())
    throw ConfigError("c_par requires a chi_omega solve");
  Moments m = field_moments(gci);
  double den = gci.spec.l * m.par1;
  return {checked_ratio(m.par2, den, "c_par"),
          checked_ratio(m.par3, den, "c_par_prime")};
}

HydroCoefficients compute_coefficients(const GciSolution& gci) {
  if (!(gci.spec.l > 0.0))
    throw ConfigError("coefficients require an ordered state (l > 0)");
  Moments m = field_moments(gci);
  HydroCoefficients out;
  out.spec = gci.spec;
  out.n_theta_cells = gci.mesh.nt() - 1;
  out.n_r_cells = gci.mesh.nr() - 1;
  out.c_perp1 = m.perp1;
  out.c_perp2 = m.perp2;
  out.c_par1 = m.par1;
  out.c_par2 = m.par2;
  out.c_par3 = m.par3;
  out.c_perp = checked_ratio(m.perp2, gci.spec.l * m.perp1, "c_perp");
  out.c_par = checked_ratio(m.par2, gci.spec.l * m.par1, "c_par");
  out.c_par_prime = checked_ratio(m.par3, gci.spec.l * m.par1, "c_par_prime");
  return out;
}

MaxwellianCheck maxwellian_intermediates_check(const GciSolution& gci) {
  const EquilibriumSpec& s = gci.spec;
  MaxwellianCheck chk;
  chk.computed = compute_coefficients(gci);
  chk.expected_perp1 = s.sigma;
  chk.expected_perp2 = s.sigma * s.l;
  chk.expected_par1 = s.sigma;
  chk.expected_par2 = s.sigma * s.l;
  chk.expected_par3 = 0.0;
  auto rel = [&](double got, double want) {
    return std::abs(got - want) / std::max(s.sigma, std::abs(want));
  };
  chk.max_rel_err = std::max(
      {rel(chk.computed.c_perp1, chk.expected_perp1),
       rel(chk.computed.c_perp2, chk.expected_perp2),
       rel(chk.computed.c_par1, chk.expected_par1),
       rel(chk.computed.c_par2, chk.expected_par2),
       rel(chk.computed.c_par3, chk.expected_par3)});
  return chk;
}

}  // namespace swh

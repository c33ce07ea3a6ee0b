#pragma once

#include <utility>

#include "swh/gci.hpp"

namespace swh {

/// Closure constants of the limiting fluid models, with the intermediate
/// integrals they are built from:
///   c_perp  = c_perp2 / (l c_perp1),
///   c_par   = c_par2  / (l c_par1),
///   c_par'  = c_par3  / (l c_par1).
/// c_perp1 and c_par1 equal sigma-weighted Dirichlet energies and are
/// strictly positive for a valid solve.
struct HydroCoefficients {
  double c_perp = 0.0;
  double c_par = 0.0;
  double c_par_prime = 0.0;
  double c_perp1 = 0.0;
  double c_perp2 = 0.0;
  double c_par1 = 0.0;
  double c_par2 = 0.0;
  double c_par3 = 0.0;
  EquilibriumSpec spec;
  int n_theta_cells = 0;
  int n_r_cells = 0;
};

/// Transverse convection constant from the chi field. Requires spec.l > 0.
/// Throws NumericsError(zero_denominator) when the normalizing integral
/// degenerates (a broken solve).
double c_perp(const GciSolution& gci);

/// Longitudinal constants (c_par, c_par_prime) from the chi_Omega field.
std::pair<double, double> c_par_and_prime(const GciSolution& gci);

/// All coefficients plus intermediates. Field moments use the assembly
/// quadrature, so the energy identities hold to machine precision.
HydroCoefficients compute_coefficients(const GciSolution& gci);

/// For the zero potential the five intermediates are known in closed form:
/// {sigma, sigma*l, sigma, sigma*l, 0}.
struct MaxwellianCheck {
  HydroCoefficients computed;
  double expected_perp1, expected_perp2;
  double expected_par1, expected_par2, expected_par3;
  double max_rel_err = 0.0;
};
MaxwellianCheck maxwellian_intermediates_check(const GciSolution& gci);

}  // namespace swh

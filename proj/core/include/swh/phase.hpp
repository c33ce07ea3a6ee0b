#pragma once

#include <span>
#include <string>
#include <vector>

#include "swh/partition.hpp"
#include "swh/potential.hpp"

namespace swh {

/// Order-parameter branch l(sigma) over a diffusion grid, plus the critical
/// diffusion sigma0. l = 0 marks the disordered state.
struct PhaseDiagram {
  std::vector<double> sigmas;
  std::vector<double> l_values;
  std::vector<double> Z_at_l_star;
  std::vector<double> d2Z_at_l_star;
  double sigma0 = 0.0;
  std::string pot_label;
  int d = 2;
};

/// Maximizer of Z(sigma, .) over l: the order parameter l(sigma) below the
/// transition, 0 above. The returned point satisfies |dZ_dl| <= 1e-10 Z/sigma
/// when positive, and beats Z on a 200-point verification grid on
/// [0, 3(r0+1)].
///
/// Throws NumericsError(plateau) when Z is flat to 1e-10 relative over an
/// l-interval longer than 1e-2 (the zero potential), and
/// NumericsError(multiple_maxima) when two grid-separated local maxima agree
/// to 1e-8 relative (ambiguous selection; reported, not resolved).
///
/// Quadrature rules are rebuilt per l-evaluation (panel layout tracks the
/// weight peak); `rel_tol` plays the role of the rule parameter.
double find_l_star(int d, double sigma, const RadialPotential& pot,
                   double rel_tol = 1e-10);

/// Critical diffusion: the root of d2Z_dll(sigma, 0) with a verified sign
/// change. Default bracket (1e-3, 10 r0^2). Throws
/// NumericsError(no_sign_change) when the second derivative keeps one sign
/// (or vanishes identically, as for the zero potential).
double find_sigma0(int d, const RadialPotential& pot, double rel_tol = 1e-10,
                   double bracket_lo = 0.0, double bracket_hi = 0.0);

/// Order-parameter branch over an increasing sigma grid.
PhaseDiagram sweep(int d, const RadialPotential& pot,
                   std::span<const double> sigma_grid, double rel_tol = 1e-10);

/// Continuity smoke test: adjacent l-values on the ordered branch must not
/// jump by more than 5x the locally predicted increment. Returns the list of
/// offending indices (empty = pass).
std::vector<int> continuity_violations(const PhaseDiagram& diagram);

/// Slope lim_{sigma->0} (l(sigma) - r0)/sigma from the exact Gaussian moment
/// formula. Requires the third derivative of V and V''(r0) != 0; the Hessian
/// of Phi_0 at r0 Omega must be positive (a = 1+V''(r0), b = 1+V'(r0)/r0).
double small_sigma_slope(int d, const RadialPotential& pot);

/// Small-sigma sign predictor of dZ_dl: the sign of -V'(rbar) at
/// rbar = speed_map_inverse(l). Returns +1 on (0, r0), 0 at {0, r0}, -1
/// beyond, for potentials with the standard sign pattern.
int laplace_sign_probe(int d, double l, const RadialPotential& pot);

}  // namespace swh

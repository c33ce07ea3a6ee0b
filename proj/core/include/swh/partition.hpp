#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "swh/potential.hpp"
#include "swh/quadrature.hpp"

namespace swh {

/// Parameters fixing one candidate equilibrium state: dimension d >= 2,
/// diffusion sigma > 0, mean-velocity modulus l >= 0 and the confining
/// potential. The mean direction is canonically e1 (every quantity computed
/// here depends on the direction only through |u|).
struct EquilibriumSpec {
  int d = 2;
  double sigma = 1.0;
  double l = 0.0;
  RadialPotential pot;

  void validate() const;
};

/// Tensor quadrature over (theta, r) in (0,pi) x (0, R_max]: Gauss-Legendre
/// panels in each direction. R_max must satisfy the truncation envelope
/// condition, see make_rule().
struct QuadratureRule {
  std::vector<Panel> r_panels;
  std::vector<Panel> theta_panels;
  int theta_order = 32;
  int r_order = 32;
  double R_max = 0.0;
  double rel_tol = 1e-10;

  QuadratureRule doubled() const;
};

/// Builds a rule adapted to `spec`: r panels clustered around the speed-map
/// radius rbar (where the weight peaks), theta panels clustered toward 0 when
/// the angular concentration l*rbar/sigma is large. R_max defaults to the
/// smallest radius beyond r0+5 where the envelope r^{d+1} exp(-Phi(1,r,l)/s)
/// has decayed to 1e-16 of its maximum.
QuadratureRule make_rule(const EquilibriumSpec& spec, double rel_tol = 1e-10);

/// Truncation radius satisfying the envelope condition alone (no r0+5 floor);
/// used for mesh construction where oversized domains create dead cells.
double envelope_radius(const EquilibriumSpec& spec);

/// Reduced Gibbs weight e(c,r,l) = exp(-r^2/2s + rcl/s - V(r)/s); equals
/// exp(-(Phi(c,r,l) - l^2/2)/sigma). Strictly positive.
double weight_e(double c, double r, const EquilibriumSpec& spec);

/// Maximum of log e over the domain, attained at (c=1, r=rbar). All internal
/// integrations shift the exponent by this value before exponentiating.
double log_weight_shift(const EquilibriumSpec& spec);

/// Partition function Z(sigma, l), prefactors included.
double Z(const EquilibriumSpec& spec, const QuadratureRule& rule);

/// log Z; immune to the under/overflow of Z itself at extreme l or sigma.
double log_Z(const EquilibriumSpec& spec, const QuadratureRule& rule);

/// First and second l-derivatives of Z, computed from the moment integrands
/// (never by finite differences of Z).
double dZ_dl(const EquilibriumSpec& spec, const QuadratureRule& rule);
double d2Z_dll(const EquilibriumSpec& spec, const QuadratureRule& rule);

/// Mean-field consistency function H(sigma,l) = <v.Omega - l>_{M_u}; vanishes
/// exactly at equilibrium order parameters (sigma dZ_dl = Z H).
double H(const EquilibriumSpec& spec, const QuadratureRule& rule);

/// Normalized moment <g>_{M_u} of a reduced observable g(c, r), where
/// c = v.Omega/|v| and r = |v|. weighted_moment(1) == 1 by construction.
double weighted_moment(const std::function<double(double, double)>& g,
                       const EquilibriumSpec& spec, const QuadratureRule& rule);

/// Eigenvalues of the centered second-moment (pressure) tensor of M_u:
/// lambda_par along Omega, lambda_perp on the orthogonal complement.
struct PressureTensor {
  double lambda_par = 0.0;
  double lambda_perp = 0.0;
};
PressureTensor pressure_tensor(const EquilibriumSpec& spec,
                               const QuadratureRule& rule);

/// Monte Carlo estimate of a full-space moment <g(v)>_{M_u} by rejection
/// sampling; the independent cross-check of the quadrature path. g receives
/// the velocity as a span of d components (Omega = e1 frame).
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};
McEstimate mc_moment(const std::function<double(std::span<const double>)>& g,
                     const EquilibriumSpec& spec, std::int64_t n_samples,
                     std::uint64_t seed);

/// Surface area of the unit sphere S^m in R^{m+1} (|S^0| = 2, |S^1| = 2pi).
double unit_sphere_area(int m);

}  // namespace swh

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "swh/mesh.hpp"
#include "swh/partition.hpp"

namespace swh {

/// Discrete diagnostics recorded with every generalized-collision-invariant
/// solve. Residuals are relative to the load norm; energy gaps compare the
/// bilinear form applied to the solution against the load functional
/// (Galerkin exactness); chi_omega_mean is the weighted mean of chi_Omega
/// relative to its weighted rms.
struct GciResiduals {
  double chi_residual = 0.0;
  double chi_omega_residual = 0.0;
  double chi_energy_gap = 0.0;
  double chi_omega_energy_gap = 0.0;
  double chi_omega_mean = 0.0;
  double compatibility_H = 0.0;
  int chi_iterations = 0;
  int chi_omega_iterations = 0;
};

/// Nodal solutions of the two collision-invariant problems on one mesh.
/// chi carries homogeneous Dirichlet values at the poles; chi_omega has a
/// zero weighted mean.
struct GciSolution {
  Mesh2D mesh;
  EquilibriumSpec spec;
  std::vector<double> chi;
  std::vector<double> chi_omega;
  GciResiduals residuals;
};

struct SolveStats {
  double residual = 0.0;
  double energy_gap = 0.0;
  double weighted_mean = 0.0;
  int iterations = 0;
};

/// Transverse invariant chi: weak form
///   sigma Int r^{d-1} [ dth(chi) dth(h)/r^2 + dr(chi) dr(h)
///                       + (d-2) chi h/(r^2 sin^2 th) ] e sin^{d-2}th
///     = Int r^d e sin^{d-1}th h,
/// with chi = 0 at theta in {0, pi}. Bilinear elements, 2x2 Gauss points,
/// Jacobi-preconditioned conjugate gradients to 1e-12.
std::vector<double> solve_chi(const EquilibriumSpec& spec, const Mesh2D& mesh,
                              SolveStats* stats = nullptr);

/// Longitudinal invariant chi_Omega: same operator without the zeroth-order
/// term, natural boundary conditions, load r^{d-1}(r cos th - l) e sin^{d-2}.
/// The operator annihilates constants, so the system is solved with one
/// pinned node and the weighted mean is subtracted afterwards.
///
/// Requires l to be an equilibrium order parameter: throws
/// NumericsError(incompatible) when |H(spec)| > 1e-8.
std::vector<double> solve_chi_omega(const EquilibriumSpec& spec,
                                    const Mesh2D& mesh,
                                    SolveStats* stats = nullptr);

/// Both invariants plus the residual record.
GciSolution solve_gci(const EquilibriumSpec& spec, const Mesh2D& mesh);

/// Weighted L2 norm sqrt(Int f_h^2 r^{d-1} e sin^{d-2}th) of a nodal field,
/// evaluated with the assembly quadrature (absolute scale carries the global
/// exponent shift; use ratios).
double weighted_l2_norm(const Mesh2D& mesh, const EquilibriumSpec& spec,
                        std::span<const double> field);

/// Int g(theta,r) f_h r^{d-1} e sin^{d-2}th with the assembly quadrature and
/// the shifted weight. Moments of nodal fields computed with this rule make
/// the Galerkin energy identities exact rather than mesh-accurate.
double weighted_field_integral(const Mesh2D& mesh, const EquilibriumSpec& spec,
                               std::span<const double> field,
                               const std::function<double(double, double)>& g);

/// Int r^{d-1} e sin^{d-2}th with the same rule (the normalization mass).
double weighted_measure(const Mesh2D& mesh, const EquilibriumSpec& spec);

/// Discrete Dirichlet energy sigma a(f_h, f_h) of the chi bilinear form
/// (include_mass_term = true) or the chi_Omega form (false).
double dirichlet_energy(const Mesh2D& mesh, const EquilibriumSpec& spec,
                        std::span<const double> field, bool include_mass_term);

/// Relative weighted L2 distance between a nodal field and a reference
/// callable g(theta, r).
double weighted_l2_error(const Mesh2D& mesh, const EquilibriumSpec& spec,
                         std::span<const double> field,
                         const std::function<double(double, double)>& exact);

/// Uniform-refinement ladder. With exact solutions the errors are true
/// weighted-L2 errors; otherwise consecutive-level differences restricted to
/// the coarser (nested) mesh. orders[k] = log2(err[k]/err[k+1]).
struct ConvergenceStudy {
  std::vector<int> cells;
  std::vector<double> chi_errors;
  std::vector<double> chi_omega_errors;
  std::vector<double> chi_orders;
  std::vector<double> chi_omega_orders;
};
ConvergenceStudy convergence_study(
    const EquilibriumSpec& spec, int base_cells, int n_levels,
    const std::function<double(double, double)>* exact_chi = nullptr,
    const std::function<double(double, double)>* exact_chi_omega = nullptr);

}  // namespace swh

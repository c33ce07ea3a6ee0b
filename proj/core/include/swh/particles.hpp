#pragma once

#include <cstdint>
#include <vector>

#include "swh/partition.hpp"
#include "swh/potential.hpp"

namespace swh {

/// Result of exact rejection sampling from the equilibrium density M_u
/// (velocities in the Omega = e1 frame, row-major n x d).
struct EquilibriumSample {
  std::vector<double> velocities;
  double acceptance_rate = 0.0;
};

/// Draws n i.i.d. velocities from M_u. The proposal is a piecewise-constant
/// radial envelope bounding r^{d-1} exp(-(Phi(1,r,l)-l^2/2)/sigma) on the
/// quadrature panels, times a uniform direction on the sphere. Throws
/// NumericsError(low_acceptance) when the acceptance rate drops below 1e-3.
/// Reproducible: sample i consumes a counter stream keyed by (seed, i).
EquilibriumSample sample_equilibrium(const EquilibriumSpec& spec,
                                     std::int64_t n, std::uint64_t seed);

/// N interacting velocities evolved by Euler-Maruyama for
///   dv_i = -(v_i - ubar) dt - V'(|v_i|) v_i/|v_i| dt + sqrt(2 sigma) dW_i
/// with ubar the empirical mean (all-to-all mean-field coupling).
struct ParticleEnsemble {
  int d = 2;
  double sigma = 0.0;
  double dt = 0.0;
  RadialPotential pot;
  std::uint64_t seed = 0;
  std::vector<double> velocities;  // n x d row-major
  double t = 0.0;
  std::int64_t step_count = 0;
  double blowup_radius = 0.0;

  std::int64_t n() const {
    return static_cast<std::int64_t>(velocities.size()) / d;
  }
};

/// Validates invariants (N >= 2, dt > 0, finite velocities, the explicit-step
/// stability guard dt <= 0.1 min(1, 1/(1+sup|V''|)) on the occupied speed
/// range) and fixes the blow-up radius 10 (r0 + 20 sqrt(sigma)).
ParticleEnsemble make_ensemble(int d, double sigma, const RadialPotential& pot,
                               std::vector<double> velocities, double dt,
                               std::uint64_t seed);

/// One Euler-Maruyama step. ubar is recomputed once per step with a fixed
/// pairwise reduction tree; the noise of particle i at step k comes from the
/// counter cell (seed, i, k), so results are schedule-independent.
/// Throws NumericsError(numerical_blowup) if any |v_i| leaves the blow-up
/// ball or the stability guard fails on the occupied speed range.
void step(ParticleEnsemble& ens);

/// Empirical mean velocity (fixed-order pairwise summation).
std::vector<double> ensemble_mean(const ParticleEnsemble& ens);

/// |ubar(t)| together with the unit direction Omega(t), recorded every
/// `record_every` steps.
struct OrderParameterSeries {
  int d = 2;
  std::vector<double> times;
  std::vector<double> u_mod;
  std::vector<double> u_dir;  // n_records x d row-major
};

enum class InitKind { equilibrium, aligned, isotropic };

struct SimParams {
  int d = 2;
  double sigma = 0.2;
  RadialPotential pot;
  std::int64_t n = 10000;
  double t_final = 50.0;
  double dt = 1e-3;
  std::uint64_t seed = 1234;
  int record_every = 10;
  InitKind init = InitKind::equilibrium;
  double init_l = -1.0;  // < 0: use r0 (0 when the potential has no r0)
};

/// Runs the mean-field simulation; deterministic given (params, seed). The
/// series has floor(t_final/(dt*record_every)) + 1 entries.
OrderParameterSeries run(const SimParams& params);

}  // namespace swh

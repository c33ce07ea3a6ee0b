#include "swh/particles.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "swh/errors.hpp"
#include "swh/quadrature.hpp"
#include "swh/rng.hpp"

namespace swh {

namespace {

// Domain tags decorrelate the sampler streams from the SDE noise streams
// when both use the same user seed.
constexpr std::uint64_t kSampleTag = 0x53414d504c45ull;
constexpr std::uint64_t kStepTag = 0x5354455055ull;

struct RadialEnvelope {
  std::vector<double> lo, hi;      // panel bounds
  std::vector<double> log_height;  // log of the constant bound per panel
  std::vector<double> cum_mass;    // cumulative panel masses (relative)
};

// log of the radial majorant r^{d-1} exp((-r^2/2 - V + r l)/sigma) - shift.
double log_radial_bound(double r, const EquilibriumSpec& s, double shift) {
  if (r <= 0.0) return -1e300;
  return (s.d - 1) * std::log(r) +
         (-0.5 * r * r - s.pot.value(r) + r * s.l) / s.sigma - shift;
}

// The radial majorant is unimodal (its log-derivative is strictly
// decreasing), so the per-panel maximum is found exactly by ternary search.
RadialEnvelope build_envelope(const EquilibriumSpec& s,
                              std::span<const Panel> panels, double shift) {
  RadialEnvelope env;
  double mass = 0.0;
  for (const Panel& p : panels) {
    double a = p.lo, b = p.hi;
    double best = std::max(log_radial_bound(a, s, shift),
                           log_radial_bound(b, s, shift));
    double ta = a, tb = b;
    for (int it = 0; it < 120; ++it) {
      double m1 = ta + (tb - ta) / 3.0;
      double m2 = tb - (tb - ta) / 3.0;
      if (log_radial_bound(m1, s, shift) < log_radial_bound(m2, s, shift))
        ta = m1;
      else
        tb = m2;
    }
    best = std::max(best, log_radial_bound(0.5 * (ta + tb), s, shift));
    best += 1e-9;  // slack against the finite search precision
    env.lo.push_back(p.lo);
    env.hi.push_back(p.hi);
    env.log_height.push_back(best);
    mass += std::exp(best) * p.width();
    env.cum_mass.push_back(mass);
  }
  return env;
}

void unit_direction(CounterRng& rng, int d, double* omega) {
  while (true) {
    double norm2 = 0.0;
    for (int k = 0; k < d; ++k) {
      omega[k] = rng.normal();
      norm2 += omega[k] * omega[k];
    }
    if (norm2 > 1e-24) {
      double inv = 1.0 / std::sqrt(norm2);
      for (int k = 0; k < d; ++k) omega[k] *= inv;
      return;
    }
  }
}

double max_abs_d2(const RadialPotential& pot, double vmax) {
  double m = std::abs(pot.d2(0.0));
  for (int i = 1; i <= 64; ++i)
    m = std::max(m, std::abs(pot.d2(vmax * i / 64.0)));
  return m;
}

void check_stability_guard(const ParticleEnsemble& ens, double vmax,
                           bool at_construction) {
  double dt_max = 0.1 * std::min(1.0, 1.0 / (1.0 + max_abs_d2(ens.pot, vmax)));
  if (ens.dt <= dt_max) return;
  if (at_construction)
    throw ConfigError("dt=" + std::to_string(ens.dt) +
                      " violates the stability guard dt <= " +
                      std::to_string(dt_max));
  throw NumericsError(errc::numerical_blowup,
                      "time step became unstable on the occupied speed range");
}

}  // namespace

EquilibriumSample sample_equilibrium(const EquilibriumSpec& spec,
                                     std::int64_t n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw ConfigError("sample_equilibrium needs n >= 1");
  double shift = log_weight_shift(spec);
  QuadratureRule rule = make_rule(spec);
  RadialEnvelope env = build_envelope(spec, rule.r_panels, shift);
  double total_mass = env.cum_mass.back();

  EquilibriumSample out;
  out.velocities.resize(static_cast<size_t>(n) * spec.d);
  std::vector<double> omega(spec.d);
  std::int64_t proposals = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    CounterRng rng(seed ^ kSampleTag, static_cast<std::uint64_t>(i));
    while (true) {
      ++proposals;
      if ((proposals & 0xffff) == 0 && proposals > 100000 &&
          static_cast<double>(i) / proposals < 1e-3)
        throw NumericsError(errc::low_acceptance,
                            "rejection acceptance rate below 1e-3");
      double pick = rng.uniform() * total_mass;
      size_t k = std::lower_bound(env.cum_mass.begin(), env.cum_mass.end(),
                                  pick) -
                 env.cum_mass.begin();
      if (k >= env.lo.size()) k = env.lo.size() - 1;
      double r = env.lo[k] + rng.uniform() * (env.hi[k] - env.lo[k]);
      unit_direction(rng, spec.d, omega.data());
      double log_target =
          (r > 0.0 ? (spec.d - 1) * std::log(r) : -1e300) +
          (-0.5 * r * r - spec.pot.value(r) + r * spec.l * omega[0]) /
              spec.sigma -
          shift;
      double log_ratio = log_target - env.log_height[k];
      if (log_ratio > 1e-6)
        throw std::logic_error("rejection envelope violated");
      if (std::log(rng.uniform()) < log_ratio) {
        for (int c = 0; c < spec.d; ++c)
          out.velocities[static_cast<size_t>(i) * spec.d + c] = r * omega[c];
        break;
      }
    }
  }
  out.acceptance_rate = static_cast<double>(n) / proposals;
  return out;
}

ParticleEnsemble make_ensemble(int d, double sigma,
                               const RadialPotential& pot,
                               std::vector<double> velocities, double dt,
                               std::uint64_t seed) {
  if (d < 2) throw ConfigError("dimension must be >= 2");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (velocities.size() % d != 0)
    throw ConfigError("velocity array size must be a multiple of d");
  if (velocities.size() / d < 2) throw ConfigError("need at least 2 particles");
  double vmax = 0.0;
  for (double v : velocities) {
    if (!std::isfinite(v)) throw ConfigError("non-finite initial velocity");
  }
  ParticleEnsemble ens;
  ens.d = d;
  ens.sigma = sigma;
  ens.dt = dt;
  ens.pot = pot;
  ens.seed = seed;
  ens.velocities = std::move(velocities);
  ens.blowup_radius = 10.0 * (r0_or(pot, 0.0) + 20.0 * std::sqrt(sigma));
  // sigma = 0 with a flat potential is a pure contraction; the radius
  // formula degenerates to 0 and no blow-up is possible
  if (ens.blowup_radius <= 0.0)
    ens.blowup_radius = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < ens.n(); ++i) {
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) {
      double v = ens.velocities[i * d + c];
      r2 += v * v;
    }
    vmax = std::max(vmax, std::sqrt(r2));
  }
  check_stability_guard(ens, vmax, /*at_construction=*/true);
  return ens;
}

std::vector<double> ensemble_mean(const ParticleEnsemble& ens) {
  std::int64_t n = ens.n();
  std::vector<double> comp(n), mean(ens.d);
  for (int c = 0; c < ens.d; ++c) {
    for (std::int64_t i = 0; i < n; ++i) comp[i] = ens.velocities[i * ens.d + c];
    mean[c] = pairwise_sum(comp) / static_cast<double>(n);
  }
  return mean;
}

void step(ParticleEnsemble& ens) {
  const int d = ens.d;
  const std::int64_t n = ens.n();
  const std::vector<double> ubar = ensemble_mean(ens);
  const double noise = std::sqrt(2.0 * ens.sigma * ens.dt);
  // uniforms consumed per particle per step (Box-Muller pairs)
  const std::uint64_t draws = 2ull * ((d + 1) / 2);
  const double d2_origin = ens.pot.d2(0.0);

  double vmax2 = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double* v = ens.velocities.data() + i * d;
    double r2 = 0.0;
    for (int c = 0; c < d; ++c) r2 += v[c] * v[c];
    double r = std::sqrt(r2);
    // V'(r)/r has the finite limit V''(0) at r=0 since V'(0)=0.
    double q = r < 1e-12 ? d2_origin : ens.pot.d1(r) / r;
    CounterRng rng(ens.seed ^ kStepTag, static_cast<std::uint64_t>(i),
                   static_cast<std::uint64_t>(ens.step_count) * draws);
    double r2_new = 0.0;
    for (int c = 0; c < d; ++c) {
      double drift = -(v[c] - ubar[c]) - q * v[c];
      v[c] += drift * ens.dt + noise * rng.normal();
      r2_new += v[c] * v[c];
    }
    vmax2 = std::max(vmax2, r2_new);
  }
  ens.t += ens.dt;
  ++ens.step_count;
  double vmax = std::sqrt(vmax2);
  if (vmax > ens.blowup_radius)
    throw NumericsError(errc::numerical_blowup,
                        "particle speed exceeded the blow-up radius " +
                            std::to_string(ens.blowup_radius));
  check_stability_guard(ens, vmax, /*at_construction=*/false);
}

OrderParameterSeries run(const SimParams& params) {
  EquilibriumSpec spec;
  spec.d = params.d;
  spec.sigma = std::max(params.sigma, 1e-300);
  spec.pot = params.pot;
  double init_l =
      params.init_l >= 0.0 ? params.init_l : r0_or(params.pot, 0.0);

  std::vector<double> v0;
  switch (params.init) {
    case InitKind::equilibrium: {
      spec.l = init_l;
      v0 = sample_equilibrium(spec, params.n, params.seed).velocities;
      break;
    }
    case InitKind::isotropic: {
      spec.l = 0.0;
      v0 = sample_equilibrium(spec, params.n, params.seed).velocities;
      break;
    }
    case InitKind::aligned: {
      v0.assign(static_cast<size_t>(params.n) * params.d, 0.0);
      for (std::int64_t i = 0; i < params.n; ++i)
        v0[i * params.d] = init_l;
      break;
    }
  }

  ParticleEnsemble ens = make_ensemble(params.d, params.sigma, params.pot,
                                       std::move(v0), params.dt, params.seed);
  if (params.record_every < 1) throw ConfigError("record_every must be >= 1");
  std::int64_t n_steps =
      static_cast<std::int64_t>(std::floor(params.t_final / params.dt + 1e-9));

  OrderParameterSeries series;
  series.d = params.d;
  auto record = [&]() {
    std::vector<double> ubar = ensemble_mean(ens);
    double norm2 = 0.0;
    for (double u : ubar) norm2 += u * u;
    double umod = std::sqrt(norm2);
    series.times.push_back(ens.t);
    series.u_mod.push_back(umod);
    if (umod > 1e-12) {
      for (double u : ubar) series.u_dir.push_back(u / umod);
    } else {
      series.u_dir.push_back(1.0);
      for (int c = 1; c < params.d; ++c) series.u_dir.push_back(0.0);
    }
  };

  record();
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    step(ens);
    if (k % params.record_every == 0) record();
  }
  return series;
}

}  // namespace swh

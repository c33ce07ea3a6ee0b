#include "swh/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swh/errors.hpp"
#include "swh/particles.hpp"

namespace swh {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn10 = 2.30258509299404568402;
// Envelope decay demanded at the truncation radius: 1e-16 of the maximum.
constexpr double kEnvelopeDrop = 16.0 * kLn10;

double log_envelope(double r, const EquilibriumSpec& s) {
  return (s.d + 1) * std::log(r) - phi(1.0, r, s.l, s.pot) / s.sigma;
}

// The envelope r^{d+1} exp(-Phi(1,r,l)/sigma) is unimodal in r: its log
// derivative (d+1)/r + (l - r - V'(r))/sigma is strictly decreasing because
// the speed map r + V'(r) is strictly increasing. Ternary search is safe.
double envelope_argmax(const EquilibriumSpec& s, double hi) {
  double a = 1e-9, b = hi;
  for (int it = 0; it < 200; ++it) {
    double m1 = a + (b - a) / 3.0;
    double m2 = b - (b - a) / 3.0;
    if (log_envelope(m1, s) < log_envelope(m2, s))
      a = m1;
    else
      b = m2;
    if (b - a < 1e-12 * std::max(1.0, b)) break;
  }
  return 0.5 * (a + b);
}

void check_envelope(const EquilibriumSpec& s, double R_max) {
  double rstar = envelope_argmax(s, std::max(R_max, 1.0));
  double peak = log_envelope(rstar, s);
  if (log_envelope(R_max, s) > peak - kEnvelopeDrop + 1e-9)
    throw NumericsError(
        errc::truncation,
        "R_max=" + std::to_string(R_max) +
            " violates the 1e-16 envelope condition for this spec");
}

std::vector<Panel> panels_from_edges(std::vector<double> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <
                                   1e-12 * std::max(1.0, std::abs(b));
                          }),
              edges.end());
  std::vector<Panel> panels;
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    panels.push_back({edges[i], edges[i + 1]});
  return panels;
}

// Tabulated tensor quadrature with the exponent shift factored out.
class ReducedIntegrator {
 public:
  ReducedIntegrator(const EquilibriumSpec& spec, const QuadratureRule& rule)
      : d_(spec.d), shift_(log_weight_shift(spec)) {
    const GaussRule& glr = gauss_legendre(rule.r_order);
    for (const Panel& p : rule.r_panels) {
      double mid = 0.5 * (p.lo + p.hi), half = 0.5 * p.width();
      for (int k = 0; k < rule.r_order; ++k) {
        double r = mid + half * glr.x[k];
        r_.push_back(r);
        wr_.push_back(half * glr.w[k] * std::pow(r, d_ - 1));
        a_.push_back((-0.5 * r * r - spec.pot.value(r)) / spec.sigma);
        b_.push_back(r * spec.l / spec.sigma);
      }
    }
    const GaussRule& glt = gauss_legendre(rule.theta_order);
    for (const Panel& p : rule.theta_panels) {
      double mid = 0.5 * (p.lo + p.hi), half = 0.5 * p.width();
      for (int k = 0; k < rule.theta_order; ++k) {
        double th = mid + half * glt.x[k];
        double s = std::sin(th);
        c_.push_back(std::cos(th));
        wth_.push_back(half * glt.w[k] *
                       (d_ == 2 ? 1.0 : std::pow(s, d_ - 2)));
      }
    }
  }

  // integral of g(c,r) r^{d-1} exp(log_e - shift) sin^{d-2}(theta)
  double integrate(const std::function<double(double, double)>& g) const {
    double total = 0.0;
    for (size_t i = 0; i < r_.size(); ++i) {
      double inner = 0.0;
      for (size_t k = 0; k < c_.size(); ++k) {
        double w = std::exp(a_[i] + b_[i] * c_[k] - shift_);
        inner += wth_[k] * w * g(c_[k], r_[i]);
      }
      total += wr_[i] * inner;
    }
    return total;
  }

  double integrate_one() const {
    return integrate([](double, double) { return 1.0; });
  }

  double shift() const { return shift_; }

 private:
  int d_;
  double shift_;
  std::vector<double> r_, wr_, a_, b_;
  std::vector<double> c_, wth_;
};

double log_prefactor(const EquilibriumSpec& s) {
  return std::log(unit_sphere_area(s.d - 2)) -
         0.5 * s.l * s.l / s.sigma + log_weight_shift(s);
}

}  // namespace

void EquilibriumSpec::validate() const {
  if (d < 2) throw ConfigError("dimension must be >= 2");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  if (!(l >= 0.0)) throw ConfigError("l must be >= 0");
  if (!pot.value || !pot.d1 || !pot.d2)
    throw ConfigError("potential must provide value, d1 and d2");
}

QuadratureRule QuadratureRule::doubled() const {
  QuadratureRule r = *this;
  r.theta_order *= 2;
  r.r_order *= 2;
  return r;
}

double unit_sphere_area(int m) {
  if (m < 0) throw std::invalid_argument("unit_sphere_area: m must be >= 0");
  return 2.0 * std::pow(kPi, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

double weight_e(double c, double r, const EquilibriumSpec& s) {
  return std::exp((-0.5 * r * r + r * c * s.l - s.pot.value(r)) / s.sigma);
}

double log_weight_shift(const EquilibriumSpec& s) {
  double rbar = speed_map_inverse(s.l, s.pot);
  return (-0.5 * rbar * rbar + rbar * s.l - s.pot.value(rbar)) / s.sigma;
}

double envelope_radius(const EquilibriumSpec& spec) {
  spec.validate();
  double hi = 2.0 * std::max(1.0, speed_map_inverse(spec.l, spec.pot));
  double rstar = envelope_argmax(spec, hi);
  while (log_envelope(rstar * 1.0001 + hi, spec) >
         log_envelope(rstar, spec) - kEnvelopeDrop)
    hi *= 2.0;
  double target = log_envelope(rstar, spec) - kEnvelopeDrop;
  double lo = rstar, up = rstar + hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + up);
    if (log_envelope(mid, spec) > target)
      lo = mid;
    else
      up = mid;
  }
  return up;
}

QuadratureRule make_rule(const EquilibriumSpec& spec, double rel_tol) {
  spec.validate();
  QuadratureRule rule;
  rule.rel_tol = rel_tol;
  rule.theta_order = rule.r_order =
      rel_tol >= 1e-11 ? 32 : (rel_tol >= 1e-13 ? 48 : 64);

  double R_env = envelope_radius(spec);
  rule.R_max = std::max(R_env, r0_or(spec.pot, 0.0) + 5.0);

  // r panels: geometric fan around the weight peak at rbar.
  double rbar = speed_map_inverse(spec.l, spec.pot);
  double curv = std::max(1.0 + spec.pot.d2(rbar), 0.2);
  double w = std::sqrt(spec.sigma / curv);
  w = std::clamp(w, rule.R_max / 256.0, rule.R_max / 4.0);
  std::vector<double> edges = {0.0, rule.R_max};
  for (int k : {32, 16, 8, 4, 2, 1}) {
    double lo = rbar - k * w;
    if (lo > 0.25 * w) edges.push_back(lo);
    double hi = rbar + k * w;
    if (hi < rule.R_max - 0.25 * w) edges.push_back(hi);
  }
  if (rbar > 0.25 * w && rbar < rule.R_max - 0.25 * w) edges.push_back(rbar);
  double t = rbar + 32 * w;
  while (t < rule.R_max - 0.25 * w) {
    edges.push_back(t);
    t = 1.6 * t + w;
  }
  rule.r_panels = panels_from_edges(std::move(edges));

  // theta panels: cluster toward theta = 0 when the angular factor
  // exp(l rbar cos(theta)/sigma) is concentrated.
  double kappa = spec.l * rbar / spec.sigma;
  std::vector<double> tedges = {0.0, kPi};
  if (kappa > 4.0) {
    double wt = 1.0 / std::sqrt(kappa);
    double u = wt;
    while (u < 0.5 * kPi) {
      tedges.push_back(u);
      u *= 2.0;
    }
    tedges.push_back(0.5 * kPi);
  } else {
    tedges.insert(tedges.end(), {0.25 * kPi, 0.5 * kPi, 0.75 * kPi});
  }
  rule.theta_panels = panels_from_edges(std::move(tedges));
  return rule;
}

double Z(const EquilibriumSpec& spec, const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  return std::exp(log_prefactor(spec)) * q.integrate_one();
}

double log_Z(const EquilibriumSpec& spec, const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  return log_prefactor(spec) + std::log(q.integrate_one());
}

double dZ_dl(const EquilibriumSpec& spec, const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  double l = spec.l, sigma = spec.sigma;
  double moment =
      q.integrate([&](double c, double r) { return (r * c - l) / sigma; });
  return std::exp(log_prefactor(spec)) * moment;
}

double d2Z_dll(const EquilibriumSpec& spec, const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  double l = spec.l, sigma = spec.sigma;
  double moment = q.integrate([&](double c, double r) {
    double dev = r * c - l;
    return (dev * dev - sigma) / (sigma * sigma);
  });
  return std::exp(log_prefactor(spec)) * moment;
}

double H(const EquilibriumSpec& spec, const QuadratureRule& rule) {
  double l = spec.l;
  return weighted_moment([&](double c, double r) { return r * c - l; }, spec,
                         rule);
}

double weighted_moment(const std::function<double(double, double)>& g,
                       const EquilibriumSpec& spec,
                       const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  double denom = q.integrate_one();
  if (!(denom > 0.0))
    throw NumericsError(errc::zero_denominator,
                        "vanishing normalization integral");
  return q.integrate(g) / denom;
}

PressureTensor pressure_tensor(const EquilibriumSpec& spec,
                               const QuadratureRule& rule) {
  spec.validate();
  check_envelope(spec, rule.R_max);
  ReducedIntegrator q(spec, rule);
  double denom = q.integrate_one();
  if (!(denom > 0.0))
    throw NumericsError(errc::zero_denominator,
                        "vanishing normalization integral");
  double l = spec.l;
  int d = spec.d;
  PressureTensor out;
  out.lambda_par = q.integrate([&](double c, double r) {
                     double dev = r * c - l;
                     return dev * dev;
                   }) /
                   denom;
  out.lambda_perp = q.integrate([&](double c, double r) {
                      return r * r * (1.0 - c * c) / (d - 1);
                    }) /
                    denom;
  return out;
}

McEstimate mc_moment(const std::function<double(std::span<const double>)>& g,
                     const EquilibriumSpec& spec, std::int64_t n_samples,
                     std::uint64_t seed) {
  spec.validate();
  if (n_samples < 2) throw ConfigError("mc_moment needs n_samples >= 2");
  EquilibriumSample sample = sample_equilibrium(spec, n_samples, seed);
  double mean = 0.0, m2 = 0.0;
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    std::span<const double> v(sample.velocities.data() + i * spec.d, spec.d);
    double x = g(v);
    ++n;
    double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  McEstimate est;
  est.estimate = mean;
  est.std_error = std::sqrt(m2 / (n - 1) / n);
  return est;
}

}  // namespace swh

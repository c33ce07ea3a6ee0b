#include "swh/phase.hpp"

#include <algorithm>
#include <cmath>

#include "swh/errors.hpp"

namespace swh {

namespace {

struct ZEval {
  double Z = 0.0;
  double dZ = 0.0;
  double d2Z = 0.0;
};

ZEval eval_Z(int d, double sigma, double l, const RadialPotential& pot,
             double rel_tol, bool derivatives) {
  EquilibriumSpec spec{d, sigma, l, pot};
  QuadratureRule rule = make_rule(spec, rel_tol);
  ZEval out;
  out.Z = Z(spec, rule);
  if (derivatives) {
    out.dZ = dZ_dl(spec, rule);
    out.d2Z = d2Z_dll(spec, rule);
  }
  return out;
}

double eval_logZ(int d, double sigma, double l, const RadialPotential& pot,
                 double rel_tol) {
  EquilibriumSpec spec{d, sigma, l, pot};
  return log_Z(spec, make_rule(spec, rel_tol));
}

// Flat stretch of Z longer than 1e-2 in l, to 1e-10 relative (log scale, so
// the far tail where Z underflows stays meaningful). Windows need at least
// three points: two values straddling a smooth maximum agree by symmetry
// without indicating flatness.
void check_plateau(std::span<const double> ls, std::span<const double> logzs) {
  size_t n = ls.size();
  for (size_t i = 0; i < n; ++i) {
    size_t j = i;
    double zmin = logzs[i], zmax = logzs[i];
    while (j + 1 < n) {
      double lo = std::min(zmin, logzs[j + 1]);
      double hi = std::max(zmax, logzs[j + 1]);
      if (hi - lo > 1e-10) break;
      zmin = lo;
      zmax = hi;
      ++j;
    }
    if (j >= i + 2 && ls[j] - ls[i] > 1e-2)
      throw NumericsError(errc::plateau,
                          "Z is constant to 1e-10 relative on an l-interval "
                          "of length > 1e-2");
  }
}

// Two competing interior maxima within 1e-8 relative of the global one.
void check_multiple_maxima(std::span<const double> logzs) {
  size_t n = logzs.size();
  double zmax = *std::max_element(logzs.begin(), logzs.end());
  std::vector<size_t> competing;
  for (size_t i = 1; i + 1 < n; ++i)
    if (logzs[i] > logzs[i - 1] && logzs[i] >= logzs[i + 1] &&
        logzs[i] >= zmax - 1e-8)
      competing.push_back(i);
  if (competing.size() >= 2)
    throw NumericsError(errc::multiple_maxima,
                        "two grid-separated local maxima of Z agree to 1e-8 "
                        "relative; ambiguous order parameter");
}

// Safeguarded Newton for the root of g = dZ_dl inside [lo, hi] with
// g(lo) > 0 > g(hi).
double polish_root(int d, double sigma, const RadialPotential& pot,
                   double rel_tol, double lo, double hi) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    ZEval e = eval_Z(d, sigma, x, pot, rel_tol, true);
    if (std::abs(e.dZ) <= 1e-11 * e.Z / sigma) return x;
    if (e.dZ > 0.0)
      lo = x;
    else
      hi = x;
    double xn = e.d2Z != 0.0 ? x - e.dZ / e.d2Z : 0.5 * (lo + hi);
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::abs(xn - x) < 1e-16 * std::max(1.0, x)) return xn;
    x = xn;
  }
  return x;
}

}  // namespace

double find_l_star(int d, double sigma, const RadialPotential& pot,
                   double rel_tol) {
  if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
  double L = 3.0 * (r0_or(pot, 0.0) + 1.0);

  const int n_grid = 200;
  std::vector<double> ls(n_grid), logzs(n_grid);
  for (int k = 0; k < n_grid; ++k) {
    ls[k] = L * k / (n_grid - 1);
    logzs[k] = eval_logZ(d, sigma, ls[k], pot, rel_tol);
  }
  check_plateau(ls, logzs);
  check_multiple_maxima(logzs);

  ZEval at0 = eval_Z(d, sigma, 0.0, pot, rel_tol, true);
  size_t argmax = std::max_element(logzs.begin(), logzs.end()) - logzs.begin();

  // The ordered branch exists iff l=0 is a local minimum of Z; this catches
  // branches thinner than the grid spacing (sigma just below sigma0). A grid
  // maximum above the noise floor of Z(0) also qualifies.
  bool ordered = at0.d2Z * sigma * sigma / at0.Z > 1e-11;
  bool interior = argmax > 0 && logzs[argmax] > std::log(at0.Z) + 1e-12;
  if (!ordered && !interior) return 0.0;

  // Bracket the root of dZ_dl by marching until the derivative turns negative.
  double lo = interior && argmax > 0 ? ls[argmax - 1] : 0.0;
  double hi = interior ? ls[argmax] : ls[1];
  int guard = 0;
  while (eval_Z(d, sigma, hi, pot, rel_tol, true).dZ > 0.0) {
    lo = hi;
    hi = 1.6 * hi;
    if (++guard > 60 || hi >= 10.0 * L)
      throw NumericsError(errc::multiple_maxima,
                          "dZ_dl stayed positive beyond the search range");
  }
  double l_star = polish_root(d, sigma, pot, rel_tol, lo, hi);

  ZEval at_star = eval_Z(d, sigma, l_star, pot, rel_tol, true);
  if (std::abs(at_star.dZ) > 1e-10 * at_star.Z / sigma) {
    if (at0.Z >= at_star.Z) return 0.0;
    throw NumericsError(errc::multiple_maxima,
                        "failed to certify the interior critical point");
  }
  // The polished point must dominate the whole verification grid.
  if (std::log(at_star.Z) < logzs[argmax] - 1e-9)
    throw NumericsError(errc::multiple_maxima,
                        "local critical point does not dominate the grid");
  if (at_star.Z < at0.Z) return 0.0;
  return l_star;
}

double find_sigma0(int d, const RadialPotential& pot, double rel_tol,
                   double bracket_lo, double bracket_hi) {
  double r0v = r0_or(pot, 1.0);
  double lo = bracket_lo > 0.0 ? bracket_lo : 1e-3;
  double hi = bracket_hi > 0.0 ? bracket_hi : 10.0 * r0v * r0v;
  if (!(lo < hi)) throw ConfigError("invalid sigma bracket");

  // Well-scaled root function: f = sigma^2 d2Z(sigma,0)/Z = <(v.Omega)^2> -
  // sigma, positive below the transition for the family of interest.
  auto f = [&](double sigma) {
    ZEval e = eval_Z(d, sigma, 0.0, pot, rel_tol, true);
    return sigma * sigma * e.d2Z / e.Z;
  };

  double flo = f(lo), fhi = f(hi);
  double fscale = std::max(std::abs(flo), std::abs(fhi));
  if (fscale <= 1e-10 * std::max(1.0, hi))
    throw NumericsError(errc::no_sign_change,
                        "d2Z_dll(sigma, 0) vanishes identically on the "
                        "bracket");
  if (flo * fhi > 0.0) {
    // scan log-spaced interior points for a sign change
    bool found = false;
    double prev_s = lo, prev_f = flo;
    for (int k = 1; k <= 24 && !found; ++k) {
      double s = lo * std::pow(hi / lo, k / 24.0);
      double fs = f(s);
      if (prev_f * fs <= 0.0) {
        lo = prev_s;
        hi = s;
        flo = prev_f;
        found = true;
      }
      prev_s = s;
      prev_f = fs;
    }
    if (!found)
      throw NumericsError(errc::no_sign_change,
                          "d2Z_dll(sigma, 0) keeps one sign on the bracket");
  }

  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (std::abs(fm) <= 1e-11 || hi - lo <= 1e-15 * mid) break;
    if (flo * fm <= 0.0)
      hi = mid;
    else {
      lo = mid;
      flo = fm;
    }
  }
  double sigma0 = 0.5 * (lo + hi);

  double delta = std::max(1e-7 * sigma0, 1e-9);
  if (!(f(sigma0 - delta) * f(sigma0 + delta) <= 0.0))
    throw NumericsError(errc::no_sign_change,
                        "no verified sign change across sigma0");
  return sigma0;
}

PhaseDiagram sweep(int d, const RadialPotential& pot,
                   std::span<const double> sigma_grid, double rel_tol) {
  if (sigma_grid.empty()) throw ConfigError("empty sigma grid");
  for (size_t i = 0; i + 1 < sigma_grid.size(); ++i)
    if (!(sigma_grid[i] < sigma_grid[i + 1]))
      throw ConfigError("sigma grid must be strictly increasing");

  PhaseDiagram diag;
  diag.d = d;
  diag.pot_label = pot.label;
  diag.sigma0 = find_sigma0(d, pot, rel_tol);
  for (double sigma : sigma_grid) {
    double l_star = find_l_star(d, sigma, pot, rel_tol);
    EquilibriumSpec spec{d, sigma, l_star, pot};
    QuadratureRule rule = make_rule(spec, rel_tol);
    diag.sigmas.push_back(sigma);
    diag.l_values.push_back(l_star);
    diag.Z_at_l_star.push_back(Z(spec, rule));
    diag.d2Z_at_l_star.push_back(d2Z_dll(spec, rule));
  }
  return diag;
}

std::vector<int> continuity_violations(const PhaseDiagram& diag) {
  std::vector<int> bad;
  size_t n = diag.l_values.size();
  for (size_t k = 1; k + 1 < n; ++k) {
    // only interior triples on the ordered branch
    if (!(diag.l_values[k - 1] > 0.0 && diag.l_values[k] > 0.0 &&
          diag.l_values[k + 1] > 0.0))
      continue;
    double prev = std::abs(diag.l_values[k] - diag.l_values[k - 1]);
    double cur = std::abs(diag.l_values[k + 1] - diag.l_values[k]);
    if (cur > 5.0 * prev + 1e-6) bad.push_back(static_cast<int>(k + 1));
  }
  return bad;
}

double small_sigma_slope(int d, const RadialPotential& pot) {
  if (!pot.has_d3())
    throw ConfigError("small_sigma_slope requires the third derivative of V");
  double r0v;
  try {
    r0v = r0(pot);
  } catch (const NumericsError&) {
    // No interior critical point; for flat potentials the second derivative
    // carries no sign information either.
    throw NumericsError(errc::flat_second_derivative,
                        "V' has no interior root; V''(r0) is undefined/flat");
  }
  double v2 = pot.d2(r0v);
  if (std::abs(v2) < 1e-12)
    throw NumericsError(errc::flat_second_derivative,
                        "V''(r0) vanishes; the slope formula degenerates");
  double a = 1.0 + v2;                    // Hessian along Omega
  double b = 1.0 + pot.d1(r0v) / r0v;     // Hessian transverse (V'(r0)=0)
  if (a <= 0.0 || b <= 0.0)
    throw NumericsError(errc::degenerate_hessian,
                        "Hessian of Phi_0 at r0 Omega is not positive");

  // Gaussian moments of (w.Omega) D^3Phi_0(r0 Omega)(w,w,w) against
  // exp(-(a w_par^2 + b |w_perp|^2)/2):
  //   D^3[w,w,w] = phi''' (w.Omega)^3
  //              + 3 (w.Omega)(|w|^2-(w.Omega)^2)(phi''/r0 - phi'/r0^2)
  // with phi(r) = r^2/2 + V(r). <w_par^4> = 3/a^2, <w_par^2 |w_perp|^2> =
  // (d-1)/(a b).
  double phi1 = r0v + pot.d1(r0v);
  double phi2 = a;
  double phi3 = pot.d3(r0v);
  double ratio = 3.0 * phi3 / (a * a) +
                 3.0 * (phi2 / r0v - phi1 / (r0v * r0v)) * (d - 1) / (a * b);
  return -(a / 6.0) * ratio / v2;
}

int laplace_sign_probe(int, double l, const RadialPotential& pot) {
  double rbar = speed_map_inverse(l, pot);
  double slope = -pot.d1(rbar);
  if (std::abs(slope) <= 1e-12 * std::max(1.0, rbar)) return 0;
  return slope > 0.0 ? 1 : -1;
}

}  // namespace swh

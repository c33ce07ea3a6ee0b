#include "swh/potential.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "swh/errors.hpp"

namespace swh {

namespace {

// Bracketed bisection to a coarse width, polished by Newton. f must change
// sign on [lo, hi]; df may be flat near the root (Newton falls back to
// bisection when a step leaves the bracket).
double bisect_newton(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi, double coarse_width, double f_tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0)
    throw std::invalid_argument("bisect_newton: no sign change on bracket");
  while (hi - lo > coarse_width) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 80; ++it) {
    double fx = f(x);
    if (std::abs(fx) <= f_tol) return x;
    if (fx * flo < 0.0)
      hi = x;
    else
      lo = x;
    double d = df(x);
    double step = (d != 0.0) ? fx / d : 0.0;
    double xn = x - step;
    if (step == 0.0 || xn <= lo || xn >= hi) xn = 0.5 * (lo + hi);
    if (xn == x) return x;
    x = xn;
  }
  return x;
}

void check_slope_at_origin(const RadialPotential& pot) {
  double g = pot.d1(0.0);
  if (std::abs(g) > 1e-12)
    throw ConfigError("potential '" + pot.label +
                      "': V'(0) must vanish, got " + std::to_string(g));
}

}  // namespace

RadialPotential zero_potential() {
  RadialPotential pot;
  pot.value = [](double) { return 0.0; };
  pot.d1 = [](double) { return 0.0; };
  pot.d2 = [](double) { return 0.0; };
  pot.d3 = [](double) { return 0.0; };
  pot.label = "zero";
  return pot;
}

RadialPotential quartic_potential(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ConfigError("quartic potential needs alpha > 0 and beta > 0");
  RadialPotential pot;
  pot.value = [=](double r) {
    return 0.25 * beta * r * r * r * r - 0.5 * alpha * r * r;
  };
  pot.d1 = [=](double r) { return r * (beta * r * r - alpha); };
  pot.d2 = [=](double r) { return 3.0 * beta * r * r - alpha; };
  pot.d3 = [=](double r) { return 6.0 * beta * r; };
  char buf[64];
  std::snprintf(buf, sizeof(buf), "quartic:alpha=%g,beta=%g", alpha, beta);
  pot.label = buf;
  check_slope_at_origin(pot);
  probe_confinement(pot);
  return pot;
}

RadialPotential parse_potential(const std::string& text) {
  if (text == "zero") return zero_potential();
  const std::string prefix = "quartic:";
  if (text.rfind(prefix, 0) == 0) {
    double alpha = 0.0, beta = 0.0;
    bool have_alpha = false, have_beta = false;
    std::string rest = text.substr(prefix.size());
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      std::string item = rest.substr(pos, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - pos);
      size_t eq = item.find('=');
      if (eq == std::string::npos)
        throw ConfigError("bad potential parameter '" + item + "'");
      std::string key = item.substr(0, eq);
      double val = 0.0;
      try {
        val = std::stod(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError("bad numeric value in potential '" + text + "'");
      }
      if (key == "alpha") {
        alpha = val;
        have_alpha = true;
      } else if (key == "beta") {
        beta = val;
        have_beta = true;
      } else {
        throw ConfigError("unknown potential parameter '" + key + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!have_alpha || !have_beta)
      throw ConfigError("quartic potential needs alpha=..,beta=..");
    return quartic_potential(alpha, beta);
  }
  throw ConfigError("unknown potential '" + text +
                    "' (expected 'zero' or 'quartic:alpha=..,beta=..')");
}

void probe_confinement(const RadialPotential& pot) {
  double prev = 0.0;
  for (int k = 1; k <= 4; ++k) {
    double r = std::pow(10.0, k);
    double q = (0.5 * r * r + pot.value(r)) / r;
    if (k > 1 && !(q >= 2.0 * prev))
      throw ConfigError("potential '" + pot.label +
                        "' fails the confinement probe near r=" +
                        std::to_string(r));
    prev = q;
  }
}

double phi(double c, double r, double l, const RadialPotential& pot) {
  return 0.5 * r * r - r * c * l + 0.5 * l * l + pot.value(r);
}

double speed_map_inverse(double l, const RadialPotential& pot) {
  if (l < 0.0) throw std::invalid_argument("speed_map_inverse: l must be >= 0");
  if (l == 0.0) return 0.0;
  auto f = [&](double r) { return r + pot.d1(r) - l; };
  auto df = [&](double r) { return 1.0 + pot.d2(r); };

  // Expand the bracket; the map is unbounded under confinement.
  double hi = std::max(1.0, l);
  double fprev = f(0.0);
  int guard = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++guard > 200)
      throw NumericsError(errc::non_monotone,
                          "speed map failed to reach l on (0, " +
                              std::to_string(hi) + "]");
  }
  // Monotonicity probe on the bracket.
  const int n_probe = 64;
  for (int i = 1; i <= n_probe; ++i) {
    double r = hi * i / n_probe;
    double fr = f(r);
    if (fr < fprev - 1e-12 * std::max(1.0, std::abs(fprev)))
      throw NumericsError(errc::non_monotone,
                          "r + V'(r) is decreasing near r=" +
                              std::to_string(r));
    fprev = fr;
  }
  double rbar = bisect_newton(f, df, 0.0, hi, 1e-3,
                              1e-13 * std::max(1.0, l));
  if (std::abs(f(rbar)) > 1e-12 * std::max(1.0, l))
    throw NumericsError(errc::non_monotone,
                        "speed_map_inverse failed to converge");
  return rbar;
}

double r0(const RadialPotential& pot, double r_scan) {
  // Scan for a sign change of V' (negative then positive per the expected
  // pattern). A dense linear scan keeps this robust for moderate r0.
  const int n = 4096;
  double prev_r = r_scan / n;
  double prev = pot.d1(prev_r);
  double lo = 0.0, hi = 0.0;
  for (int i = 2; i <= n; ++i) {
    double r = r_scan * i / n;
    double cur = pot.d1(r);
    if (prev < 0.0 && cur >= 0.0) {
      lo = prev_r;
      hi = r;
      break;
    }
    prev_r = r;
    prev = cur;
  }
  if (hi == 0.0)
    throw NumericsError(errc::no_interior_critical_point,
                        "V' has constant sign on (0, " +
                            std::to_string(r_scan) + "]");
  double root = bisect_newton(pot.d1, pot.d2, lo, hi, 1e-3, 1e-13);
  if (std::abs(pot.d1(root)) > 1e-12)
    throw NumericsError(errc::no_interior_critical_point,
                        "failed to polish the root of V'");
  double delta = std::max(1e-6, 1e-6 * root);
  if (!(pot.d1(root - delta) < 0.0 && pot.d1(root + delta) > 0.0))
    throw NumericsError(errc::no_interior_critical_point,
                        "no verified sign change of V' across the root");
  return root;
}

double r0_or(const RadialPotential& pot, double fallback) {
  try {
    return r0(pot);
  } catch (const NumericsError&) {
    return fallback;
  }
}

}  // namespace swh

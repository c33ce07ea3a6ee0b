#include "swh/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace swh {

namespace {

// Newton iteration on the Legendre polynomial P_n; standard construction,
// accurate to machine precision for the orders used here (n <= 128).
GaussRule compute_gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double pi = 3.14159265358979323846;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

double integrate_panels(const std::function<double(double)>& f,
                        std::span<const Panel> panels, int order) {
  const GaussRule& gl = gauss_legendre(order);
  double total = 0.0;
  for (const Panel& p : panels) {
    double mid = 0.5 * (p.lo + p.hi);
    double half = 0.5 * (p.hi - p.lo);
    double acc = 0.0;
    for (int k = 0; k < order; ++k) acc += gl.w[k] * f(mid + half * gl.x[k]);
    total += half * acc;
  }
  return total;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace swh

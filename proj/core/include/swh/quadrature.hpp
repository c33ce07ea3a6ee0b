#pragma once

#include <functional>
#include <span>
#include <vector>

namespace swh {

/// Gauss-Legendre nodes and weights on [-1,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Returns the n-point Gauss-Legendre rule (cached, thread-safe).
const GaussRule& gauss_legendre(int n);

/// Half-open integration segment (lo, hi].
struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// Composite Gauss-Legendre integral of f over a panel list.
double integrate_panels(const std::function<double(double)>& f,
                        std::span<const Panel> panels, int order);

/// Deterministic pairwise summation (fixed reduction tree).
double pairwise_sum(std::span<const double> v);

}  // namespace swh

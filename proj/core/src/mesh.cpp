#include "swh/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "swh/errors.hpp"

namespace swh {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void Mesh2D::validate() const {
  if (nt() < 3 || nr() < 3) throw ConfigError("mesh needs at least 2x2 cells");
  if (theta_nodes.front() != 0.0 ||
      std::abs(theta_nodes.back() - kPi) > 1e-14)
    throw ConfigError("theta nodes must span [0, pi]");
  for (int i = 0; i + 1 < nt(); ++i)
    if (!(theta_nodes[i] < theta_nodes[i + 1]))
      throw ConfigError("theta nodes must be strictly increasing");
  if (!(r_nodes.front() > 0.0)) throw ConfigError("r nodes must be positive");
  for (int j = 0; j + 1 < nr(); ++j)
    if (!(r_nodes[j] < r_nodes[j + 1]))
      throw ConfigError("r nodes must be strictly increasing");
}

Mesh2D make_mesh(const EquilibriumSpec& spec, int n_theta, int n_r,
                 double r_lo, double R_max) {
  spec.validate();
  if (n_theta < 2 || n_r < 2) throw ConfigError("mesh needs >= 2 cells per axis");
  if (R_max <= 0.0) R_max = envelope_radius(spec);
  if (r_lo <= 0.0) r_lo = std::min(5e-4, R_max / 100.0);
  if (!(r_lo < R_max)) throw ConfigError("r_lo must be below R_max");

  Mesh2D mesh;
  mesh.theta_nodes.resize(n_theta + 1);
  for (int i = 0; i <= n_theta; ++i)
    mesh.theta_nodes[i] = kPi * i / n_theta;
  mesh.theta_nodes.back() = kPi;

  // Node density 1 + 3 exp(-(r-rbar)^2/(2 s^2)); nodes are placed at equal
  // increments of its cumulative integral, evaluated on a fixed fine grid so
  // that refining n_r keeps existing nodes (same interpolation queries).
  double rbar = speed_map_inverse(spec.l, spec.pot);
  double curv = std::max(1.0 + spec.pot.d2(rbar), 0.2);
  double s = std::max(2.0 * std::sqrt(spec.sigma / curv),
                      (R_max - r_lo) / 12.0);
  const int fine = 4096;
  std::vector<double> cum(fine + 1, 0.0);
  auto density = [&](double r) {
    double z = (r - rbar) / s;
    return 1.0 + 3.0 * std::exp(-0.5 * z * z);
  };
  double h = (R_max - r_lo) / fine;
  for (int k = 1; k <= fine; ++k) {
    double ra = r_lo + (k - 1) * h, rb = r_lo + k * h;
    cum[k] = cum[k - 1] + 0.5 * h * (density(ra) + density(rb));
  }
  mesh.r_nodes.resize(n_r + 1);
  for (int j = 0; j <= n_r; ++j) {
    double target = cum[fine] * j / n_r;
    auto it = std::lower_bound(cum.begin(), cum.end(), target);
    int k = std::max<int>(1, it - cum.begin());
    double t = (target - cum[k - 1]) / (cum[k] - cum[k - 1]);
    mesh.r_nodes[j] = r_lo + (k - 1 + t) * h;
  }
  mesh.r_nodes.front() = r_lo;
  mesh.r_nodes.back() = R_max;
  mesh.validate();
  return mesh;
}

Mesh2D reflect_theta(const Mesh2D& mesh) {
  Mesh2D out = mesh;
  for (int i = 0; i < mesh.nt(); ++i)
    out.theta_nodes[i] = kPi - mesh.theta_nodes[mesh.nt() - 1 - i];
  out.theta_nodes.front() = 0.0;
  out.theta_nodes.back() = kPi;
  return out;
}

}  // namespace swh

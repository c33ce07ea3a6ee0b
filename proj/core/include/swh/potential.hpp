#pragma once

#include <functional>
#include <string>

namespace swh {

/// Radial confining potential V(|v|) together with its radial derivatives.
/// The third derivative is optional; operations that need it report a clean
/// error when it is absent.
///
/// Well-posedness of all downstream integrals requires the confinement
/// condition (r^2/2 + V(r))/r -> +inf as r -> inf; probe_confinement() checks
/// it numerically on a geometric ladder (a heuristic probe, not a proof).
struct RadialPotential {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  std::function<double(double)> d3;  // may be empty
  std::string label;

  bool has_d3() const { return static_cast<bool>(d3); }
};

/// V == 0. The equilibria are then plain Gaussians in velocity.
RadialPotential zero_potential();

/// V(r) = beta r^4/4 - alpha r^2/2 with alpha, beta > 0. Self-propulsion at
/// speeds below r0 = sqrt(alpha/beta), friction beyond.
RadialPotential quartic_potential(double alpha, double beta);

/// Parses "zero" or "quartic:alpha=..,beta=..".
RadialPotential parse_potential(const std::string& text);

/// Heuristic confinement probe: (r^2/2 + V)/r must grow by at least a factor
/// 2 per decade over r in {10, 1e2, 1e3, 1e4}. Throws ConfigError otherwise.
void probe_confinement(const RadialPotential& pot);

/// Total potential at any velocity with |v| = r and cos(angle to the mean
/// direction) = c, for mean-velocity modulus l:
///   r^2/2 - r c l + l^2/2 + V(r).
double phi(double c, double r, double l, const RadialPotential& pot);

/// Inverse of the strictly increasing speed map r -> r + V'(r): the unique
/// rbar >= 0 with rbar + V'(rbar) = l. Throws NumericsError(non_monotone) if
/// the map is detected non-increasing on the search bracket.
double speed_map_inverse(double l, const RadialPotential& pot);

/// Positive root of V' with a verified sign change (negative below, positive
/// above). Throws NumericsError(no_interior_critical_point) when V' keeps a
/// constant sign on (0, r_scan].
double r0(const RadialPotential& pot, double r_scan = 50.0);

/// r0 when it exists, `fallback` otherwise.
double r0_or(const RadialPotential& pot, double fallback);

}  // namespace swh

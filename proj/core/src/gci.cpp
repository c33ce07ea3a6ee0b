#include "swh/gci.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <cmath>

#include "swh/errors.hpp"

namespace swh {

namespace {

constexpr double kGp = 0.57735026918962576451;  // 2x2 Gauss abscissa

enum class Problem { chi, chi_omega };

struct Assembly {
  Eigen::SparseMatrix<double> A;      // boundary conditions applied
  Eigen::SparseMatrix<double> A_raw;  // pure Galerkin operator
  Eigen::VectorXd b;
  Eigen::VectorXd b_raw;
  Eigen::VectorXd mass_w;  // Int phi_a r^{d-1} e sin^{d-2}
  double n0 = 0.0;         // Int r^{d-1} e sin^{d-2}
};

// Bilinear shape functions on [-1,1]^2; local node k = di + 2*dj.
inline void shape(double xi, double eta, double* N, double* dNxi,
                  double* dNeta) {
  static const double sx[4] = {-1.0, 1.0, -1.0, 1.0};
  static const double sy[4] = {-1.0, -1.0, 1.0, 1.0};
  for (int k = 0; k < 4; ++k) {
    N[k] = 0.25 * (1.0 + sx[k] * xi) * (1.0 + sy[k] * eta);
    dNxi[k] = 0.25 * sx[k] * (1.0 + sy[k] * eta);
    dNeta[k] = 0.25 * sy[k] * (1.0 + sx[k] * xi);
  }
}

Assembly assemble(const EquilibriumSpec& spec, const Mesh2D& mesh,
                  Problem problem) {
  mesh.validate();
  const int d = spec.d;
  const int nt = mesh.nt();
  const int nr = mesh.nr();
  const int n = mesh.n_nodes();
  const double sigma = spec.sigma;
  const double l = spec.l;
  const double shift = log_weight_shift(spec);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nt - 1) * (nr - 1) * 16);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd mass_w = Eigen::VectorXd::Zero(n);
  double n0 = 0.0;

  double N[4], dNxi[4], dNeta[4];
  for (int j = 0; j + 1 < nr; ++j) {
    double r0n = mesh.r_nodes[j], r1n = mesh.r_nodes[j + 1];
    double dr = r1n - r0n;
    for (int i = 0; i + 1 < nt; ++i) {
      double t0 = mesh.theta_nodes[i], t1 = mesh.theta_nodes[i + 1];
      double dth = t1 - t0;
      double jac = 0.25 * dth * dr;
      int glob[4] = {mesh.index(i, j), mesh.index(i + 1, j),
                     mesh.index(i, j + 1), mesh.index(i + 1, j + 1)};
      double K[4][4] = {};
      double F[4] = {};
      double M[4] = {};
      for (double eta : {-kGp, kGp}) {
        for (double xi : {-kGp, kGp}) {
          shape(xi, eta, N, dNxi, dNeta);
          double th = 0.5 * (t0 + t1) + 0.5 * dth * xi;
          double r = 0.5 * (r0n + r1n) + 0.5 * dr * eta;
          double c = std::cos(th);
          double sth = std::sin(th);
          double e = std::exp(
              (-0.5 * r * r + r * c * l - spec.pot.value(r)) / sigma - shift);
          double spow = d == 2 ? 1.0 : std::pow(sth, d - 2);
          double base = e * spow * jac;

          double k_th = sigma * std::pow(r, d - 3) * e * spow * jac;
          double k_r = sigma * std::pow(r, d - 1) * e * spow * jac;
          double k_m = 0.0;
          double load;
          if (problem == Problem::chi) {
            if (d > 2)
              k_m = sigma * (d - 2) * std::pow(r, d - 3) * e *
                    (d == 4 ? 1.0 : std::pow(sth, d - 4)) * jac;
            load = std::pow(r, d) * e * std::pow(sth, d - 1) * jac;
          } else {
            load = std::pow(r, d - 1) * (r * c - l) * e * spow * jac;
          }
          double w_mass = std::pow(r, d - 1) * base;
          n0 += w_mass;

          for (int a = 0; a < 4; ++a) {
            double ga = dNxi[a] * 2.0 / dth;
            double ra = dNeta[a] * 2.0 / dr;
            F[a] += load * N[a];
            M[a] += w_mass * N[a];
            for (int bn = 0; bn < 4; ++bn) {
              double gb = dNxi[bn] * 2.0 / dth;
              double rb = dNeta[bn] * 2.0 / dr;
              K[a][bn] += k_th * ga * gb + k_r * ra * rb + k_m * N[a] * N[bn];
            }
          }
        }
      }
      for (int a = 0; a < 4; ++a) {
        b[glob[a]] += F[a];
        mass_w[glob[a]] += M[a];
        for (int bn = 0; bn < 4; ++bn)
          trip.emplace_back(glob[a], glob[bn], K[a][bn]);
      }
    }
  }

  if (problem == Problem::chi_omega) {
    // The continuous load is compatible (it integrates to a multiple of H,
    // gated upstream), but the 2x2-Gauss load inherits an O(h^2) defect.
    // Project it out against the weighted-mean functional, otherwise the
    // defect re-enters the moments through the mean shift.
    double defect = b.sum();
    b -= (defect / n0) * mass_w;
  }

  Assembly out;
  out.A_raw.resize(n, n);
  out.A_raw.setFromTriplets(trip.begin(), trip.end());
  out.b_raw = b;
  out.mass_w = mass_w;
  out.n0 = n0;

  std::vector<char> fixed(n, 0);
  if (problem == Problem::chi) {
    // pole Dirichlet rows (mandatory for d=2, conditioning for d>=3)
    for (int j = 0; j < nr; ++j) {
      fixed[mesh.index(0, j)] = 1;
      fixed[mesh.index(nt - 1, j)] = 1;
    }
  } else {
    // pin one node; constants span the null space of the raw operator
    int pin = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
      double dk = out.A_raw.coeff(k, k);
      if (dk > best) {
        best = dk;
        pin = k;
      }
    }
    fixed[pin] = 1;
  }

  std::vector<Eigen::Triplet<double>> trip_bc;
  trip_bc.reserve(trip.size());
  for (const auto& t : trip)
    if (!fixed[t.row()] && !fixed[t.col()]) trip_bc.push_back(t);
  for (int k = 0; k < n; ++k)
    if (fixed[k]) trip_bc.emplace_back(k, k, 1.0);
  out.A.resize(n, n);
  out.A.setFromTriplets(trip_bc.begin(), trip_bc.end());
  out.b = b;
  for (int k = 0; k < n; ++k)
    if (fixed[k]) out.b[k] = 0.0;
  return out;
}

Eigen::VectorXd solve_spd(const Assembly& asmb, int* iterations) {
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                           Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(1e-12);
  int dim = static_cast<int>(asmb.A.rows());
  cg.setMaxIterations(std::max(4000, 40 * static_cast<int>(std::sqrt(dim))));
  cg.compute(asmb.A);
  Eigen::VectorXd x = cg.solve(asmb.b);
  if (cg.info() != Eigen::Success) {
    cg.setMaxIterations(8 * cg.maxIterations());
    x = cg.solveWithGuess(asmb.b, x);
    if (cg.info() != Eigen::Success)
      throw NumericsError(errc::singular_system,
                          "conjugate gradient failed to reach 1e-12");
  }
  if (iterations) *iterations = static_cast<int>(cg.iterations());
  return x;
}

}  // namespace

std::vector<double> solve_chi(const EquilibriumSpec& spec, const Mesh2D& mesh,
                              SolveStats* stats) {
  spec.validate();
  Assembly asmb = assemble(spec, mesh, Problem::chi);
  int iters = 0;
  Eigen::VectorXd x = solve_spd(asmb, &iters);
  if (stats) {
    stats->iterations = iters;
    stats->residual = (asmb.A * x - asmb.b).norm() / asmb.b.norm();
    double xax = x.dot(asmb.A_raw * x);
    double bx = asmb.b_raw.dot(x);
    stats->energy_gap = std::abs(xax - bx) / std::max(std::abs(bx), 1e-300);
    stats->weighted_mean = 0.0;
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

std::vector<double> solve_chi_omega(const EquilibriumSpec& spec,
                                    const Mesh2D& mesh, SolveStats* stats) {
  spec.validate();
  double Hval = H(spec, make_rule(spec));
  if (std::abs(Hval) > 1e-8)
    throw NumericsError(
        errc::incompatible,
        "l is not an equilibrium order parameter: |H| = " +
            std::to_string(std::abs(Hval)) + " > 1e-8");
  Assembly asmb = assemble(spec, mesh, Problem::chi_omega);
  int iters = 0;
  Eigen::VectorXd x = solve_spd(asmb, &iters);
  double residual = (asmb.A * x - asmb.b).norm() / asmb.b.norm();
  double mean = asmb.mass_w.dot(x) / asmb.n0;
  x.array() -= mean;
  if (stats) {
    stats->iterations = iters;
    stats->residual = residual;
    double xax = x.dot(asmb.A_raw * x);
    double bx = asmb.b_raw.dot(x);
    stats->energy_gap = std::abs(xax - bx) / std::max(std::abs(bx), 1e-300);
    std::vector<double> xv(x.data(), x.data() + x.size());
    double rms =
        weighted_l2_norm(mesh, spec, xv) / std::sqrt(std::max(asmb.n0, 1e-300));
    stats->weighted_mean =
        std::abs(asmb.mass_w.dot(x) / asmb.n0) / std::max(rms, 1e-300);
  }
  return std::vector<double>(x.data(), x.data() + x.size());
}

GciSolution solve_gci(const EquilibriumSpec& spec, const Mesh2D& mesh) {
  GciSolution sol;
  sol.mesh = mesh;
  sol.spec = spec;
  sol.residuals.compatibility_H = H(spec, make_rule(spec));
  SolveStats s1, s2;
  sol.chi = solve_chi(spec, mesh, &s1);
  sol.chi_omega = solve_chi_omega(spec, mesh, &s2);
  sol.residuals.chi_residual = s1.residual;
  sol.residuals.chi_energy_gap = s1.energy_gap;
  sol.residuals.chi_iterations = s1.iterations;
  sol.residuals.chi_omega_residual = s2.residual;
  sol.residuals.chi_omega_energy_gap = s2.energy_gap;
  sol.residuals.chi_omega_mean = s2.weighted_mean;
  sol.residuals.chi_omega_iterations = s2.iterations;
  return sol;
}

namespace {

// Shared 2x2-Gauss loop over cells: calls visit(theta, r, weight, field_h)
// with weight = jac * gauss * r^{d-1} e sin^{d-2}.
template <typename Visit>
void for_each_quad_point(const Mesh2D& mesh, const EquilibriumSpec& spec,
                         std::span<const double> field, Visit&& visit) {
  const int d = spec.d;
  const int nt = mesh.nt();
  const double shift = log_weight_shift(spec);
  double N[4], dNxi[4], dNeta[4];
  for (int j = 0; j + 1 < mesh.nr(); ++j) {
    double ra = mesh.r_nodes[j], rb = mesh.r_nodes[j + 1];
    for (int i = 0; i + 1 < nt; ++i) {
      double ta = mesh.theta_nodes[i], tb = mesh.theta_nodes[i + 1];
      double jac = 0.25 * (tb - ta) * (rb - ra);
      double v[4] = {field[mesh.index(i, j)], field[mesh.index(i + 1, j)],
                     field[mesh.index(i, j + 1)],
                     field[mesh.index(i + 1, j + 1)]};
      for (double eta : {-kGp, kGp}) {
        for (double xi : {-kGp, kGp}) {
          shape(xi, eta, N, dNxi, dNeta);
          double th = 0.5 * (ta + tb) + 0.5 * (tb - ta) * xi;
          double r = 0.5 * (ra + rb) + 0.5 * (rb - ra) * eta;
          double sth = std::sin(th);
          double e = std::exp((-0.5 * r * r + r * std::cos(th) * spec.l -
                               spec.pot.value(r)) /
                                  spec.sigma -
                              shift);
          double w = jac * std::pow(r, d - 1) * e *
                     (d == 2 ? 1.0 : std::pow(sth, d - 2));
          double fh = v[0] * N[0] + v[1] * N[1] + v[2] * N[2] + v[3] * N[3];
          visit(th, r, w, fh);
        }
      }
    }
  }
}

}  // namespace

double weighted_l2_norm(const Mesh2D& mesh, const EquilibriumSpec& spec,
                        std::span<const double> field) {
  double acc = 0.0;
  for_each_quad_point(mesh, spec, field,
                      [&](double, double, double w, double fh) {
                        acc += w * fh * fh;
                      });
  return std::sqrt(acc);
}

double weighted_l2_error(const Mesh2D& mesh, const EquilibriumSpec& spec,
                         std::span<const double> field,
                         const std::function<double(double, double)>& exact) {
  double num = 0.0, den = 0.0;
  for_each_quad_point(mesh, spec, field,
                      [&](double th, double r, double w, double fh) {
                        double g = exact(th, r);
                        num += w * (fh - g) * (fh - g);
                        den += w * g * g;
                      });
  return std::sqrt(num / std::max(den, 1e-300));
}

double weighted_field_integral(const Mesh2D& mesh, const EquilibriumSpec& spec,
                               std::span<const double> field,
                               const std::function<double(double, double)>& g) {
  double acc = 0.0;
  for_each_quad_point(mesh, spec, field,
                      [&](double th, double r, double w, double fh) {
                        acc += w * g(th, r) * fh;
                      });
  return acc;
}

double weighted_measure(const Mesh2D& mesh, const EquilibriumSpec& spec) {
  std::vector<double> ones(mesh.n_nodes(), 1.0);
  double acc = 0.0;
  for_each_quad_point(mesh, spec, ones,
                      [&](double, double, double w, double) { acc += w; });
  return acc;
}

double dirichlet_energy(const Mesh2D& mesh, const EquilibriumSpec& spec,
                        std::span<const double> field, bool include_mass_term) {
  const int d = spec.d;
  const double shift = log_weight_shift(spec);
  double acc = 0.0;
  double N[4], dNxi[4], dNeta[4];
  for (int j = 0; j + 1 < mesh.nr(); ++j) {
    double ra = mesh.r_nodes[j], rb = mesh.r_nodes[j + 1];
    double dr = rb - ra;
    for (int i = 0; i + 1 < mesh.nt(); ++i) {
      double ta = mesh.theta_nodes[i], tb = mesh.theta_nodes[i + 1];
      double dth = tb - ta;
      double jac = 0.25 * dth * dr;
      double v[4] = {field[mesh.index(i, j)], field[mesh.index(i + 1, j)],
                     field[mesh.index(i, j + 1)],
                     field[mesh.index(i + 1, j + 1)]};
      for (double eta : {-kGp, kGp}) {
        for (double xi : {-kGp, kGp}) {
          shape(xi, eta, N, dNxi, dNeta);
          double th = 0.5 * (ta + tb) + 0.5 * dth * xi;
          double r = 0.5 * (ra + rb) + 0.5 * dr * eta;
          double sth = std::sin(th);
          double e = std::exp((-0.5 * r * r + r * std::cos(th) * spec.l -
                               spec.pot.value(r)) /
                                  spec.sigma -
                              shift);
          double spow = d == 2 ? 1.0 : std::pow(sth, d - 2);
          double fh = 0.0, fth = 0.0, fr = 0.0;
          for (int k = 0; k < 4; ++k) {
            fh += v[k] * N[k];
            fth += v[k] * dNxi[k] * 2.0 / dth;
            fr += v[k] * dNeta[k] * 2.0 / dr;
          }
          double integrand = std::pow(r, d - 3) * fth * fth +
                             std::pow(r, d - 1) * fr * fr;
          if (include_mass_term && d > 2)
            integrand += (d - 2) * std::pow(r, d - 3) * fh * fh / (sth * sth);
          acc += jac * spec.sigma * e * spow * integrand;
        }
      }
    }
  }
  return acc;
}

ConvergenceStudy convergence_study(
    const EquilibriumSpec& spec, int base_cells, int n_levels,
    const std::function<double(double, double)>* exact_chi,
    const std::function<double(double, double)>* exact_chi_omega) {
  if (n_levels < 2) throw ConfigError("convergence study needs >= 2 levels");
  ConvergenceStudy study;
  std::vector<Mesh2D> meshes;
  std::vector<std::vector<double>> chis, chi_omegas;
  for (int k = 0; k < n_levels; ++k) {
    int n = base_cells << k;
    study.cells.push_back(n);
    Mesh2D mesh = make_mesh(spec, n, n);
    chis.push_back(solve_chi(spec, mesh));
    chi_omegas.push_back(solve_chi_omega(spec, mesh));
    meshes.push_back(std::move(mesh));
  }

  auto restrict_fine = [](const Mesh2D& coarse, const Mesh2D& fine,
                          const std::vector<double>& xf) {
    std::vector<double> out(coarse.n_nodes());
    for (int j = 0; j < coarse.nr(); ++j)
      for (int i = 0; i < coarse.nt(); ++i)
        out[coarse.index(i, j)] = xf[fine.index(2 * i, 2 * j)];
    return out;
  };

  auto errors = [&](const std::vector<std::vector<double>>& fields,
                    const std::function<double(double, double)>* exact) {
    std::vector<double> errs;
    if (exact) {
      for (int k = 0; k < n_levels; ++k)
        errs.push_back(weighted_l2_error(meshes[k], spec, fields[k], *exact));
    } else {
      for (int k = 0; k + 1 < n_levels; ++k) {
        std::vector<double> ref =
            restrict_fine(meshes[k], meshes[k + 1], fields[k + 1]);
        std::vector<double> diff(ref.size());
        for (size_t m = 0; m < ref.size(); ++m)
          diff[m] = fields[k][m] - ref[m];
        double den = weighted_l2_norm(meshes[k], spec, ref);
        errs.push_back(weighted_l2_norm(meshes[k], spec, diff) /
                       std::max(den, 1e-300));
      }
    }
    return errs;
  };
  auto orders_of = [](const std::vector<double>& errs) {
    std::vector<double> orders;
    for (size_t k = 0; k + 1 < errs.size(); ++k)
      orders.push_back(std::log2(errs[k] / errs[k + 1]));
    return orders;
  };

  study.chi_errors = errors(chis, exact_chi);
  study.chi_omega_errors = errors(chi_omegas, exact_chi_omega);
  study.chi_orders = orders_of(study.chi_errors);
  study.chi_omega_orders = orders_of(study.chi_omega_errors);
  return study;
}

}  // namespace swh

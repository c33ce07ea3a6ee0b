// Command-line front end: phase diagrams, critical diffusion, collision
// invariants, hydrodynamic coefficients, moments and the mean-field particle
// simulator. Exit codes: 0 success, 2 usage/config error, 3 numerical error.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "swh/coefficients.hpp"
#include "swh/errors.hpp"
#include "swh/gci.hpp"
#include "swh/particles.hpp"
#include "swh/phase.hpp"
#include "swh/table_io.hpp"
#include "swh/version.hpp"

using nlohmann::json;

namespace {

struct Config {
  std::string pot_spec = "quartic:alpha=1,beta=1";
  int d = 2;
  double rel_tol = 1e-10;
  int n_theta = 256;
  int n_r = 256;
  double r_lo = 0.0;   // 0 = auto
  double r_max = 0.0;  // 0 = auto
  std::string sigma_range;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  long long n_particles = 10000;
  double dt = 1e-3;
  double t_final = 50.0;
  int record_every = 10;
  std::string init = "equilibrium";
  double init_l = -1.0;
  unsigned long long seed = 1234;
  std::string out_dir = ".";
  // per-invocation parameters
  double sigma = std::nan("");
  double l = std::nan("");
  long long mc_samples = 0;
};

void reject_unknown_keys(const json& obj, const char* section,
                         const std::vector<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw swh::ConfigError("unknown key '" + it.key() + "' in config section '" +
                             section + "'");
  }
}

void apply_config_file(Config& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw swh::ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw swh::ConfigError("config parse error: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw swh::ConfigError("config root must be an object");
  reject_unknown_keys(doc, "(root)",
                      {"potential", "quadrature", "mesh", "phase", "particles",
                       "output"});
  try {
    if (doc.contains("potential")) {
      const json& p = doc["potential"];
      reject_unknown_keys(p, "potential", {"kind", "alpha", "beta"});
      std::string kind = p.value("kind", std::string("quartic"));
      if (kind == "zero") {
        cfg.pot_spec = "zero";
      } else if (kind == "quartic") {
        double alpha = p.value("alpha", 1.0);
        double beta = p.value("beta", 1.0);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "quartic:alpha=%.17g,beta=%.17g",
                      alpha, beta);
        cfg.pot_spec = buf;
      } else {
        throw swh::ConfigError("unknown potential kind '" + kind + "'");
      }
    }
    if (doc.contains("quadrature")) {
      const json& q = doc["quadrature"];
      reject_unknown_keys(q, "quadrature", {"rel_tol"});
      cfg.rel_tol = q.value("rel_tol", cfg.rel_tol);
    }
    if (doc.contains("mesh")) {
      const json& m = doc["mesh"];
      reject_unknown_keys(m, "mesh", {"n_theta", "n_r", "r_lo", "r_max"});
      cfg.n_theta = m.value("n_theta", cfg.n_theta);
      cfg.n_r = m.value("n_r", cfg.n_r);
      cfg.r_lo = m.value("r_lo", cfg.r_lo);
      cfg.r_max = m.value("r_max", cfg.r_max);
    }
    if (doc.contains("phase")) {
      const json& p = doc["phase"];
      reject_unknown_keys(p, "phase",
                          {"sigma_grid", "bracket_lo", "bracket_hi"});
      cfg.sigma_range = p.value("sigma_grid", cfg.sigma_range);
      cfg.bracket_lo = p.value("bracket_lo", cfg.bracket_lo);
      cfg.bracket_hi = p.value("bracket_hi", cfg.bracket_hi);
    }
    if (doc.contains("particles")) {
      const json& p = doc["particles"];
      reject_unknown_keys(p, "particles",
                          {"n", "dt", "t_final", "record_every", "init",
                           "init_l", "seed"});
      cfg.n_particles = p.value("n", cfg.n_particles);
      cfg.dt = p.value("dt", cfg.dt);
      cfg.t_final = p.value("t_final", cfg.t_final);
      cfg.record_every = p.value("record_every", cfg.record_every);
      cfg.init = p.value("init", cfg.init);
      cfg.init_l = p.value("init_l", cfg.init_l);
      cfg.seed = p.value("seed", cfg.seed);
    }
    if (doc.contains("output")) {
      const json& o = doc["output"];
      reject_unknown_keys(o, "output", {"dir"});
      cfg.out_dir = o.value("dir", cfg.out_dir);
    }
  } catch (const json::exception& e) {
    throw swh::ConfigError("config type error: " + std::string(e.what()));
  }
}

json resolved_json(const Config& cfg) {
  json j;
  j["potential"] = cfg.pot_spec;
  j["d"] = cfg.d;
  j["quadrature"]["rel_tol"] = cfg.rel_tol;
  j["mesh"] = {{"n_theta", cfg.n_theta},
               {"n_r", cfg.n_r},
               {"r_lo", cfg.r_lo},
               {"r_max", cfg.r_max}};
  j["phase"] = {{"sigma_grid", cfg.sigma_range},
                {"bracket_lo", cfg.bracket_lo},
                {"bracket_hi", cfg.bracket_hi}};
  j["particles"] = {{"n", cfg.n_particles},
                    {"dt", cfg.dt},
                    {"t_final", cfg.t_final},
                    {"record_every", cfg.record_every},
                    {"init", cfg.init},
                    {"init_l", cfg.init_l}};
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  if (!std::isnan(cfg.sigma)) j["sigma"] = cfg.sigma;
  if (!std::isnan(cfg.l)) j["l"] = cfg.l;
  if (cfg.mc_samples > 0) j["mc_samples"] = cfg.mc_samples;
  return j;
}

std::string config_hash(const Config& cfg) {
  return swh::hex64(swh::fnv1a(resolved_json(cfg).dump()));
}

std::vector<std::string> header_comments(const Config& cfg) {
  return {std::string("swarmhydro ") + swh::version_string,
          "config-hash: " + config_hash(cfg),
          "seed: " + std::to_string(cfg.seed)};
}

json meta_json(const Config& cfg) {
  json m;
  m["version"] = swh::version_string;
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.seed;
  return m;
}

std::vector<double> parse_sigma_range(const std::string& text) {
  size_t c1 = text.find(':');
  if (c1 == std::string::npos) {
    try {
      return {std::stod(text)};
    } catch (const std::exception&) {
      throw swh::ConfigError("bad sigma value '" + text + "'");
    }
  }
  size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw swh::ConfigError("sigma range must be start:stop:step");
  double start = 0, stop = 0, step = 0;
  try {
    start = std::stod(text.substr(0, c1));
    stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw swh::ConfigError("bad sigma range '" + text + "'");
  }
  if (!(step > 0.0) || !(stop >= start))
    throw swh::ConfigError("sigma range needs stop >= start and step > 0");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    double s = start + k * step;
    if (s > stop + 0.5 * step) break;
    grid.push_back(std::min(s, stop));
  }
  return grid;
}

std::string out_path(const Config& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

double resolve_l(const Config& cfg, const swh::RadialPotential& pot) {
  if (!std::isnan(cfg.l)) return cfg.l;
  return swh::find_l_star(cfg.d, cfg.sigma, pot, cfg.rel_tol);
}

void require_sigma(const Config& cfg) {
  if (std::isnan(cfg.sigma))
    throw swh::ConfigError("this command requires --sigma");
}

int cmd_phase_diagram(const Config& cfg) {
  if (cfg.sigma_range.empty())
    throw swh::ConfigError("phase-diagram requires --sigma start:stop:step");
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  std::vector<double> grid = parse_sigma_range(cfg.sigma_range);
  swh::PhaseDiagram diag = swh::sweep(cfg.d, pot, grid, cfg.rel_tol);

  swh::CsvTable table;
  table.comments = header_comments(cfg);
  table.columns = {"sigma", "l_star", "Z_at_l_star", "d2Z_at_l_star"};
  for (size_t k = 0; k < diag.sigmas.size(); ++k)
    table.rows.push_back({diag.sigmas[k], diag.l_values[k],
                          diag.Z_at_l_star[k], diag.d2Z_at_l_star[k]});
  swh::write_csv(out_path(cfg, "phase_diagram.csv"), table);

  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = diag.d;
  j["potential"] = diag.pot_label;
  j["sigma0"] = diag.sigma0;
  j["sigma"] = diag.sigmas;
  j["l_star"] = diag.l_values;
  j["Z_at_l_star"] = diag.Z_at_l_star;
  j["d2Z_at_l_star"] = diag.d2Z_at_l_star;
  swh::write_text_file(out_path(cfg, "phase_diagram.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_sigma_critical(const Config& cfg) {
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  double sigma0 =
      swh::find_sigma0(cfg.d, pot, cfg.rel_tol, cfg.bracket_lo, cfg.bracket_hi);
  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = cfg.d;
  j["potential"] = pot.label;
  j["sigma0"] = sigma0;
  swh::write_text_file(out_path(cfg, "sigma_critical.json"), j.dump(2) + "\n");
  std::printf("sigma0 = %.12g\n", sigma0);
  return 0;
}

int cmd_gci_solve(const Config& cfg) {
  require_sigma(cfg);
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  double l = resolve_l(cfg, pot);
  swh::EquilibriumSpec spec{cfg.d, cfg.sigma, l, pot};
  swh::Mesh2D mesh =
      swh::make_mesh(spec, cfg.n_theta, cfg.n_r, cfg.r_lo, cfg.r_max);
  swh::GciSolution sol = swh::solve_gci(spec, mesh);

  swh::CsvTable table;
  table.comments = header_comments(cfg);
  table.columns = {"theta", "r", "chi", "chi_omega"};
  for (int j = 0; j < mesh.nr(); ++j)
    for (int i = 0; i < mesh.nt(); ++i)
      table.rows.push_back({mesh.theta_nodes[i], mesh.r_nodes[j],
                            sol.chi[mesh.index(i, j)],
                            sol.chi_omega[mesh.index(i, j)]});
  swh::write_csv(out_path(cfg, "gci_fields.csv"), table);
  swh::write_text_file(
      out_path(cfg, "gci_chi.dat"),
      swh::render_gnuplot_matrix(mesh, sol.chi, header_comments(cfg)));
  swh::write_text_file(
      out_path(cfg, "gci_chi_omega.dat"),
      swh::render_gnuplot_matrix(mesh, sol.chi_omega, header_comments(cfg)));

  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = cfg.d;
  j["sigma"] = cfg.sigma;
  j["l"] = l;
  j["potential"] = pot.label;
  j["mesh"] = {{"n_theta", mesh.nt() - 1},
               {"n_r", mesh.nr() - 1},
               {"r_lo", mesh.r_nodes.front()},
               {"r_max", mesh.r_nodes.back()}};
  j["residuals"] = {{"chi_residual", sol.residuals.chi_residual},
                    {"chi_omega_residual", sol.residuals.chi_omega_residual},
                    {"chi_energy_gap", sol.residuals.chi_energy_gap},
                    {"chi_omega_energy_gap",
                     sol.residuals.chi_omega_energy_gap},
                    {"chi_omega_mean", sol.residuals.chi_omega_mean},
                    {"compatibility_H", sol.residuals.compatibility_H},
                    {"chi_iterations", sol.residuals.chi_iterations},
                    {"chi_omega_iterations",
                     sol.residuals.chi_omega_iterations}};
  swh::write_text_file(out_path(cfg, "gci_solve.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_coefficients(const Config& cfg) {
  require_sigma(cfg);
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  double l = resolve_l(cfg, pot);
  swh::EquilibriumSpec spec{cfg.d, cfg.sigma, l, pot};
  swh::Mesh2D mesh =
      swh::make_mesh(spec, cfg.n_theta, cfg.n_r, cfg.r_lo, cfg.r_max);
  swh::GciSolution sol = swh::solve_gci(spec, mesh);
  swh::HydroCoefficients co = swh::compute_coefficients(sol);

  swh::CsvTable table;
  table.comments = header_comments(cfg);
  table.columns = {"d",       "sigma",   "l",       "c_perp",  "c_par",
                   "c_par_prime", "c_perp1", "c_perp2", "c_par1",  "c_par2",
                   "c_par3",  "n_theta", "n_r"};
  table.rows.push_back({static_cast<double>(co.spec.d), co.spec.sigma,
                        co.spec.l, co.c_perp, co.c_par, co.c_par_prime,
                        co.c_perp1, co.c_perp2, co.c_par1, co.c_par2,
                        co.c_par3, static_cast<double>(co.n_theta_cells),
                        static_cast<double>(co.n_r_cells)});
  swh::write_csv(out_path(cfg, "coefficients.csv"), table);

  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = co.spec.d;
  j["sigma"] = co.spec.sigma;
  j["l"] = co.spec.l;
  j["potential"] = pot.label;
  j["c_perp"] = co.c_perp;
  j["c_par"] = co.c_par;
  j["c_par_prime"] = co.c_par_prime;
  j["intermediates"] = {{"c_perp1", co.c_perp1},
                        {"c_perp2", co.c_perp2},
                        {"c_par1", co.c_par1},
                        {"c_par2", co.c_par2},
                        {"c_par3", co.c_par3}};
  j["mesh"] = {{"n_theta", co.n_theta_cells}, {"n_r", co.n_r_cells}};
  swh::write_text_file(out_path(cfg, "coefficients.json"), j.dump(2) + "\n");
  std::printf("c_perp = %.12g  c_par = %.12g  c_par_prime = %.12g\n",
              co.c_perp, co.c_par, co.c_par_prime);
  return 0;
}

int cmd_simulate(const Config& cfg) {
  require_sigma(cfg);
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  swh::SimParams params;
  params.d = cfg.d;
  params.sigma = cfg.sigma;
  params.pot = pot;
  params.n = cfg.n_particles;
  params.t_final = cfg.t_final;
  params.dt = cfg.dt;
  params.seed = cfg.seed;
  params.record_every = cfg.record_every;
  params.init_l = cfg.init_l;
  if (cfg.init == "equilibrium")
    params.init = swh::InitKind::equilibrium;
  else if (cfg.init == "aligned")
    params.init = swh::InitKind::aligned;
  else if (cfg.init == "isotropic")
    params.init = swh::InitKind::isotropic;
  else
    throw swh::ConfigError("init must be equilibrium, aligned or isotropic");

  swh::OrderParameterSeries series = swh::run(params);

  swh::CsvTable table;
  table.comments = header_comments(cfg);
  table.columns = {"t", "u_mod"};
  for (int c = 0; c < params.d; ++c)
    table.columns.push_back("u_dir_" + std::to_string(c));
  for (size_t k = 0; k < series.times.size(); ++k) {
    std::vector<double> row = {series.times[k], series.u_mod[k]};
    for (int c = 0; c < params.d; ++c)
      row.push_back(series.u_dir[k * params.d + c]);
    table.rows.push_back(std::move(row));
  }
  swh::write_csv(out_path(cfg, "series.csv"), table);

  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = params.d;
  j["sigma"] = params.sigma;
  j["potential"] = pot.label;
  j["n"] = params.n;
  j["dt"] = params.dt;
  j["t_final"] = params.t_final;
  j["record_every"] = params.record_every;
  j["init"] = cfg.init;
  j["init_l"] = params.init_l;
  j["n_records"] = series.times.size();
  swh::write_text_file(out_path(cfg, "simulate.json"), j.dump(2) + "\n");
  return 0;
}

int cmd_moments(const Config& cfg) {
  require_sigma(cfg);
  swh::RadialPotential pot = swh::parse_potential(cfg.pot_spec);
  double l = std::isnan(cfg.l) ? 0.0 : cfg.l;
  swh::EquilibriumSpec spec{cfg.d, cfg.sigma, l, pot};
  swh::QuadratureRule rule = swh::make_rule(spec, cfg.rel_tol);

  double Zv = swh::Z(spec, rule);
  double dZ = swh::dZ_dl(spec, rule);
  double d2Z = swh::d2Z_dll(spec, rule);
  double Hv = swh::H(spec, rule);
  swh::PressureTensor pt = swh::pressure_tensor(spec, rule);

  swh::CsvTable table;
  table.comments = header_comments(cfg);
  table.columns = {"d",  "sigma",      "l",          "Z",
                   "dZ_dl", "d2Z_dll", "H", "lambda_par", "lambda_perp"};
  std::vector<double> row = {static_cast<double>(cfg.d), cfg.sigma, l, Zv,
                             dZ, d2Z, Hv, pt.lambda_par, pt.lambda_perp};
  json j;
  j["_meta"] = meta_json(cfg);
  j["d"] = cfg.d;
  j["sigma"] = cfg.sigma;
  j["l"] = l;
  j["potential"] = pot.label;
  j["Z"] = Zv;
  j["dZ_dl"] = dZ;
  j["d2Z_dll"] = d2Z;
  j["H"] = Hv;
  j["lambda_par"] = pt.lambda_par;
  j["lambda_perp"] = pt.lambda_perp;

  if (cfg.mc_samples > 0) {
    auto vpar = [](std::span<const double> v) { return v[0]; };
    auto centered_sq = [l](std::span<const double> v) {
      return (v[0] - l) * (v[0] - l);
    };
    int d = cfg.d;
    auto transverse = [d](std::span<const double> v) {
      double r2 = 0.0;
      for (double x : v) r2 += x * x;
      return (r2 - v[0] * v[0]) / (d - 1);
    };
    swh::McEstimate m1 = swh::mc_moment(vpar, spec, cfg.mc_samples, cfg.seed);
    swh::McEstimate m2 =
        swh::mc_moment(centered_sq, spec, cfg.mc_samples, cfg.seed + 1);
    swh::McEstimate m3 =
        swh::mc_moment(transverse, spec, cfg.mc_samples, cfg.seed + 2);
    for (const char* name :
         {"mc_vpar", "mc_se_vpar", "mc_lambda_par", "mc_se_lambda_par",
          "mc_lambda_perp", "mc_se_lambda_perp"})
      table.columns.push_back(name);
    row.insert(row.end(), {m1.estimate, m1.std_error, m2.estimate,
                           m2.std_error, m3.estimate, m3.std_error});
    j["mc"] = {{"samples", cfg.mc_samples},
               {"vpar", {{"mean", m1.estimate}, {"se", m1.std_error}}},
               {"lambda_par", {{"mean", m2.estimate}, {"se", m2.std_error}}},
               {"lambda_perp", {{"mean", m3.estimate}, {"se", m3.std_error}}}};
  }
  table.rows.push_back(std::move(row));
  swh::write_csv(out_path(cfg, "moments.csv"), table);
  swh::write_text_file(out_path(cfg, "moments.json"), j.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  std::string config_file;

  CLI::App app{"swarm equilibrium and hydrodynamic-limit toolbox"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file");
    sub->add_option("--pot", cfg.pot_spec,
                    "potential: zero | quartic:alpha=..,beta=..");
    sub->add_option("--d", cfg.d, "space dimension (>= 2)");
    sub->add_option("--out-dir", cfg.out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "RNG seed");
    sub->add_option("--rel-tol", cfg.rel_tol, "quadrature relative tolerance");
  };

  CLI::App* pd = app.add_subcommand("phase-diagram",
                                    "order-parameter branch over a sigma grid");
  add_common(pd);
  pd->add_option("--sigma", cfg.sigma_range, "sigma grid start:stop:step");

  CLI::App* sc = app.add_subcommand("sigma-critical",
                                    "critical diffusion sigma0");
  add_common(sc);
  sc->add_option("--bracket-lo", cfg.bracket_lo, "sigma bracket lower end");
  sc->add_option("--bracket-hi", cfg.bracket_hi, "sigma bracket upper end");

  CLI::App* gs = app.add_subcommand("gci-solve",
                                    "solve the collision-invariant PDEs");
  add_common(gs);
  gs->add_option("--sigma", cfg.sigma, "diffusion coefficient");
  gs->add_option("--l", cfg.l, "order parameter (default: l(sigma))");
  gs->add_option("--n-theta", cfg.n_theta, "theta cells");
  gs->add_option("--n-r", cfg.n_r, "r cells");
  gs->add_option("--r-lo", cfg.r_lo, "inner radius (0 = auto)");
  gs->add_option("--r-max", cfg.r_max, "truncation radius (0 = auto)");

  CLI::App* co = app.add_subcommand("coefficients",
                                    "hydrodynamic closure constants");
  add_common(co);
  co->add_option("--sigma", cfg.sigma, "diffusion coefficient");
  co->add_option("--l", cfg.l, "order parameter (default: l(sigma))");
  co->add_option("--n-theta", cfg.n_theta, "theta cells");
  co->add_option("--n-r", cfg.n_r, "r cells");
  co->add_option("--r-lo", cfg.r_lo, "inner radius (0 = auto)");
  co->add_option("--r-max", cfg.r_max, "truncation radius (0 = auto)");

  CLI::App* si = app.add_subcommand("simulate",
                                    "mean-field particle simulation");
  add_common(si);
  si->add_option("--sigma", cfg.sigma, "diffusion coefficient");
  si->add_option("--n", cfg.n_particles, "particle count");
  si->add_option("--dt", cfg.dt, "time step");
  si->add_option("--t-final", cfg.t_final, "final time");
  si->add_option("--record-every", cfg.record_every, "record interval (steps)");
  si->add_option("--init", cfg.init, "equilibrium | aligned | isotropic");
  si->add_option("--init-l", cfg.init_l,
                 "initial order parameter (default r0)");

  CLI::App* mo = app.add_subcommand("moments",
                                    "partition function and moments");
  add_common(mo);
  mo->add_option("--sigma", cfg.sigma, "diffusion coefficient");
  mo->add_option("--l", cfg.l, "order parameter (default 0)");
  mo->add_option("--mc-samples", cfg.mc_samples,
                 "add Monte Carlo cross-check columns");

  // Config file values must not override explicit flags, so: parse flags,
  // then re-apply them on top of the file-provided baseline.
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    json err;
    err["error"] = "ConfigError";
    err["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  }

  try {
    if (!config_file.empty()) {
      Config base;
      apply_config_file(base, config_file);
      // flags win: copy file values only where the flag was not given
      CLI::App* sub = app.get_subcommands().front();
      auto flag_given = [&](const std::string& name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt && opt->count() > 0;
      };
      if (!flag_given("--pot")) cfg.pot_spec = base.pot_spec;
      if (!flag_given("--rel-tol")) cfg.rel_tol = base.rel_tol;
      if (!flag_given("--n-theta")) cfg.n_theta = base.n_theta;
      if (!flag_given("--n-r")) cfg.n_r = base.n_r;
      if (!flag_given("--r-lo")) cfg.r_lo = base.r_lo;
      if (!flag_given("--r-max")) cfg.r_max = base.r_max;
      if (!flag_given("--sigma") && sub->get_name() == "phase-diagram")
        cfg.sigma_range = base.sigma_range;
      if (!flag_given("--bracket-lo")) cfg.bracket_lo = base.bracket_lo;
      if (!flag_given("--bracket-hi")) cfg.bracket_hi = base.bracket_hi;
      if (!flag_given("--n")) cfg.n_particles = base.n_particles;
      if (!flag_given("--dt")) cfg.dt = base.dt;
      if (!flag_given("--t-final")) cfg.t_final = base.t_final;
      if (!flag_given("--record-every")) cfg.record_every = base.record_every;
      if (!flag_given("--init")) cfg.init = base.init;
      if (!flag_given("--init-l")) cfg.init_l = base.init_l;
      if (!flag_given("--seed")) cfg.seed = base.seed;
      if (!flag_given("--out-dir")) cfg.out_dir = base.out_dir;
    }

    if (app.got_subcommand("phase-diagram")) return cmd_phase_diagram(cfg);
    if (app.got_subcommand("sigma-critical")) return cmd_sigma_critical(cfg);
    if (app.got_subcommand("gci-solve")) return cmd_gci_solve(cfg);
    if (app.got_subcommand("coefficients")) return cmd_coefficients(cfg);
    if (app.got_subcommand("simulate")) return cmd_simulate(cfg);
    if (app.got_subcommand("moments")) return cmd_moments(cfg);
    throw swh::ConfigError("no subcommand given");
  } catch (const swh::NumericsError& e) {
    json err;
    err["error"] = e.code_name();
    err["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  } catch (const swh::ConfigError& e) {
    json err;
    err["error"] = "ConfigError";
    err["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 2;
  } catch (const std::exception& e) {
    json err;
    err["error"] = "Internal";
    err["message"] = e.what();
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return 3;
  }
}

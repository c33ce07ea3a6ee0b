// End-to-end checks of the command-line tool: exit codes, file outputs,
// determinism and the machine-readable error channel. The binary path comes
// from the SWARMHYDRO_CLI environment variable (set by ctest).

#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

#define EXPECT(cond, what)                                      \
  do {                                                          \
    if (cond) {                                                 \
      std::printf("ok   %s\n", what);                           \
    } else {                                                    \
      std::printf("FAIL %s (%s:%d)\n", what, __FILE__, __LINE__); \
      ++g_failures;                                             \
    }                                                           \
  } while (0)

std::string cli_path() {
  const char* p = std::getenv("SWARMHYDRO_CLI");
  if (!p) {
    std::fprintf(stderr, "SWARMHYDRO_CLI not set\n");
    std::exit(2);
  }
  return p;
}

fs::path scratch_dir() {
  const char* p = std::getenv("CLI_TEST_DIR");
  fs::path dir = p ? fs::path(p) : fs::temp_directory_path() / "swh_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string stderr_text;
};

RunResult run_cli(const std::string& args, const fs::path& scratch,
                  const std::string& tag) {
  fs::path errfile = scratch / (tag + ".stderr");
  std::string cmd = cli_path() + " " + args + " >" +
                    (scratch / (tag + ".stdout")).string() + " 2>" +
                    errfile.string();
  int rc = std::system(cmd.c_str());
  RunResult out;
  out.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream f(errfile);
  std::stringstream ss;
  ss << f.rdbuf();
  out.stderr_text = ss.str();
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

int main() {
  fs::path scratch = scratch_dir();
  const double pi = 3.14159265358979323846;

  {
    fs::path out = scratch / "sc";
    RunResult r = run_cli(
        "sigma-critical --pot quartic:alpha=1,beta=1 --d 2 --out-dir " +
            out.string(),
        scratch, "sc");
    EXPECT(r.exit_code == 0, "sigma-critical exits 0");
    json j = load_json(out / "sigma_critical.json");
    EXPECT(std::abs(j["sigma0"].get<double>() - 1.0 / pi) < 1e-6,
           "sigma0 equals 1/pi to 1e-6");
    EXPECT(j["_meta"].contains("config_hash"), "meta carries the config hash");
  }

  {
    RunResult r = run_cli("sigma-critical --pot zero --d 2 --out-dir " +
                              (scratch / "sc0").string(),
                          scratch, "sc0");
    EXPECT(r.exit_code == 3, "zero potential exits 3");
    json err = json::parse(r.stderr_text);
    EXPECT(err["error"] == "NoSignChange", "error code is NoSignChange");
  }

  {
    fs::path out = scratch / "pd";
    std::string args =
        "phase-diagram --pot quartic:alpha=1,beta=1 --d 2 "
        "--sigma 0.25:0.35:0.05 --out-dir " +
        out.string();
    RunResult r = run_cli(args, scratch, "pd");
    EXPECT(r.exit_code == 0, "phase-diagram exits 0");
    std::string csv1 = slurp(out / "phase_diagram.csv");
    int data_rows = 0;
    bool saw_header = false;
    std::stringstream ss(csv1);
    std::string line;
    while (std::getline(ss, line)) {
      if (line.rfind("# ", 0) == 0) continue;
      if (!saw_header) {
        saw_header = true;
        EXPECT(line == "sigma,l_star,Z_at_l_star,d2Z_at_l_star",
               "csv column header");
        continue;
      }
      ++data_rows;
    }
    EXPECT(data_rows == 3, "0.25:0.35:0.05 yields 3 rows");
    json j = load_json(out / "phase_diagram.json");
    EXPECT(std::abs(j["sigma0"].get<double>() - 1.0 / pi) < 1e-6,
           "sweep json records sigma0");
    EXPECT(j["l_star"][0].get<double>() > 0.0, "ordered below sigma0");
    EXPECT(j["l_star"][2].get<double>() == 0.0, "disordered above sigma0");

    RunResult r2 = run_cli(args, scratch, "pd2");
    EXPECT(r2.exit_code == 0, "rerun exits 0");
    EXPECT(slurp(out / "phase_diagram.csv") == csv1,
           "rerun is byte-identical");
  }

  {
    fs::path out = scratch / "co";
    RunResult r = run_cli(
        "coefficients --pot zero --d 3 --sigma 0.5 --l 1 "
        "--n-theta 64 --n-r 64 --out-dir " +
            out.string(),
        scratch, "co");
    EXPECT(r.exit_code == 0, "coefficients exits 0");
    json j = load_json(out / "coefficients.json");
    EXPECT(std::abs(j["c_perp"].get<double>() - 1.0) < 1e-3,
           "c_perp = 1 for the zero potential");
    EXPECT(std::abs(j["c_par"].get<double>() - 1.0) < 1e-3,
           "c_par = 1 for the zero potential");
    EXPECT(std::abs(j["c_par_prime"].get<double>()) < 1e-3,
           "c_par_prime = 0 for the zero potential");
  }

  {
    fs::path out = scratch / "gci";
    RunResult r = run_cli(
        "gci-solve --pot zero --d 2 --sigma 0.5 --l 1 "
        "--n-theta 128 --n-r 128 --out-dir " +
            out.string(),
        scratch, "gci");
    EXPECT(r.exit_code == 0, "gci-solve exits 0");
    EXPECT(fs::exists(out / "gci_chi.dat"), "gnuplot matrix written");
    json j = load_json(out / "gci_solve.json");
    EXPECT(j["residuals"]["chi_residual"].get<double>() < 1e-10,
           "chi residual recorded and small");
    // spot-check the field file against r sin(theta) on moderate radii
    std::stringstream ss(slurp(out / "gci_fields.csv"));
    std::string line;
    bool saw_header = false;
    double worst = 0.0;
    while (std::getline(ss, line)) {
      if (line.rfind("# ", 0) == 0) continue;
      if (!saw_header) {
        saw_header = true;
        continue;
      }
      double th, rr, chi, om;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &th, &rr, &chi, &om) != 4)
        continue;
      if (rr > 0.2 && rr < 2.5) {
        worst = std::max(worst, std::abs(chi - rr * std::sin(th)));
        worst = std::max(worst, std::abs(om - (rr * std::cos(th) - 1.0)));
      }
    }
    EXPECT(saw_header, "field csv has a header");
    EXPECT(worst < 1e-3, "nodal fields match the Maxwellian solutions");
  }

  {
    fs::path out = scratch / "sim";
    std::string args =
        "simulate --pot quartic:alpha=1,beta=1 --d 2 --sigma 0.2 "
        "--n 100 --t-final 0.5 --dt 0.001 --record-every 10 --seed 5 "
        "--out-dir " +
        out.string();
    RunResult r = run_cli(args, scratch, "sim");
    EXPECT(r.exit_code == 0, "simulate exits 0");
    std::string csv1 = slurp(out / "series.csv");
    int rows = 0;
    std::stringstream ss(csv1);
    std::string line;
    while (std::getline(ss, line))
      if (!line.empty() && line[0] != '#' && line[0] != 't') ++rows;
    EXPECT(rows == 51, "series has floor(t_final/(dt*record_every))+1 rows");
    RunResult r2 = run_cli(args, scratch, "sim2");
    EXPECT(r2.exit_code == 0, "simulate rerun exits 0");
    EXPECT(slurp(out / "series.csv") == csv1, "series is byte-identical");
  }

  {
    fs::path out = scratch / "mom";
    RunResult r = run_cli(
        "moments --pot quartic:alpha=1,beta=1 --d 2 --sigma 0.3 --l 0.5 "
        "--mc-samples 20000 --seed 9 --out-dir " +
            out.string(),
        scratch, "mom");
    EXPECT(r.exit_code == 0, "moments exits 0");
    json j = load_json(out / "moments.json");
    EXPECT(j.contains("mc"), "mc cross-check block present");
    double lp = j["lambda_perp"].get<double>();
    double mc = j["mc"]["lambda_perp"]["mean"].get<double>();
    double se = j["mc"]["lambda_perp"]["se"].get<double>();
    EXPECT(std::abs(lp - mc) < 4.0 * se, "quadrature within mc error bars");
  }

  {
    RunResult r = run_cli("moments --pot cubic --sigma 0.5 --out-dir " +
                              (scratch / "bad1").string(),
                          scratch, "bad1");
    EXPECT(r.exit_code == 2, "unknown potential exits 2");
    json err = json::parse(r.stderr_text);
    EXPECT(err["error"] == "ConfigError", "config errors are labelled");
  }

  {
    RunResult r = run_cli("phase-diagram --pot zero --sigma 0.5:0.1:0.1 "
                          "--out-dir " + (scratch / "bad2").string(),
                          scratch, "bad2");
    EXPECT(r.exit_code == 2, "bad sigma range exits 2");
  }

  {
    fs::path cfgfile = scratch / "config.json";
    std::ofstream(cfgfile) << R"({"potential": {"kind": "zero"},
                                  "mesh": {"n_theta": 48, "n_r": 48}})";
    fs::path out = scratch / "cfg";
    RunResult r = run_cli("coefficients --config " + cfgfile.string() +
                              " --pot quartic:alpha=1,beta=1 --d 2 --sigma 0.2 "
                              "--out-dir " + out.string(),
                          scratch, "cfg");
    EXPECT(r.exit_code == 0, "config file plus overriding flag works");
    json j = load_json(out / "coefficients.json");
    EXPECT(j["potential"].get<std::string>().rfind("quartic", 0) == 0,
           "explicit flag overrides the config file");
    EXPECT(j["mesh"]["n_theta"] == 48, "config mesh settings are honored");

    std::ofstream(scratch / "bad.json") << R"({"potential": {"kind": "zero"},
                                               "extra": 1})";
    RunResult rb = run_cli("coefficients --config " +
                               (scratch / "bad.json").string() +
                               " --sigma 0.2 --out-dir " + out.string(),
                           scratch, "cfgbad");
    EXPECT(rb.exit_code == 2, "unknown config keys are rejected");
  }

  std::printf("\n%d failure(s)\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

// Command-line front end. All heavy lifting happens behind the C API of
// libwlexit; this binary only parses flags, assembles the JSON configs and
// maps error codes onto exit codes (0 ok, 1 runtime, 2 usage).

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "wl/capi.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Grid syntax: "lo:hi:logN" (geometric), "lo:hi:linN" (arithmetic) or an
// explicit comma-separated list.
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  const std::size_t c1 = spec.find(':');
  if (c1 != std::string::npos) {
    const std::size_t c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
      throw CLI::ValidationError("grid", "expected lo:hi:logN or lo:hi:linN");
    const double lo = std::stod(spec.substr(0, c1));
    const double hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const std::string tail = spec.substr(c2 + 1);
    bool log_spacing;
    std::size_t digits;
    if (tail.rfind("log", 0) == 0) {
      log_spacing = true;
      digits = 3;
    } else if (tail.rfind("lin", 0) == 0) {
      log_spacing = false;
      digits = 3;
    } else {
      throw CLI::ValidationError("grid", "spacing must be logN or linN");
    }
    const int n = std::stoi(tail.substr(digits));
    if (n < 1) throw CLI::ValidationError("grid", "need at least one point");
    if (n == 1) return {lo};
    if (log_spacing && !(lo > 0.0 && hi > 0.0))
      throw CLI::ValidationError("grid", "log spacing needs positive bounds");
    for (int i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / (n - 1);
      grid.push_back(log_spacing
                         ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                         : lo + t * (hi - lo));
    }
    return grid;
  }
  std::istringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) grid.push_back(std::stod(item));
  if (grid.empty()) throw CLI::ValidationError("grid", "empty grid");
  return grid;
}

int run_experiment(const json& config) {
  char err[512] = {0};
  const int rc = wlx_run_exit_experiment(config.dump().c_str(), err, sizeof(err));
  if (rc != WLX_OK) {
    std::cerr << "error: " << err << "\n";
    return rc == WLX_INVALID ? kExitUsage : kExitRuntime;
  }
  std::cout << "wrote " << config["out"].get<std::string>()
            << "/{raw.csv,summary.csv,manifest.json}\n";
  return kExitOk;
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  json j;
  f >> j;
  return j;
}

struct ExperimentFlags {
  std::string grid_spec;
  std::string from_config;
  double alpha = 1.0;
  double gamma_star = 0.0;
  std::string update = "nonlinear";
  std::uint64_t replicas = 0;
  std::uint64_t seed = 20120521;
  std::uint64_t step_cap = 10000000000ULL;
  std::string out;
  int successive = 0;
};

void add_common_flags(CLI::App* cmd, ExperimentFlags& flags, const char* grid_flag,
                      const char* grid_desc) {
  cmd->add_option(grid_flag, flags.grid_spec, grid_desc);
  cmd->add_option("--from-config", flags.from_config,
                  "run from a config or manifest JSON file (other flags ignored)");
  cmd->add_option("--alpha", flags.alpha, "step-size exponent alpha in (0,1]");
  cmd->add_option("--gamma-star", flags.gamma_star,
                  "step-size prefactor (0 = non-adaptive)");
  cmd->add_option("--update", flags.update, "weight update rule")
      ->check(CLI::IsMember({"nonlinear", "linearized"}));
  cmd->add_option("--replicas", flags.replicas, "independent replicas per grid point");
  cmd->add_option("--seed", flags.seed, "master seed");
  cmd->add_option("--step-cap", flags.step_cap, "hard per-replica step limit");
  cmd->add_option("--out", flags.out, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wang-Landau exit-time experiments"};
  app.set_version_flag("--version", wlx_version());
  app.require_subcommand(0, 1);

  // ---- toy-exit ----
  ExperimentFlags toy;
  CLI::App* cmd_toy = app.add_subcommand(
      "toy-exit", "first-passage experiment on the three-state toy model");
  add_common_flags(cmd_toy, toy, "--eps-grid",
                   "epsilon grid (lo:hi:logN | lo:hi:linN | v1,v2,...)");
  cmd_toy->add_option("--successive", toy.successive,
                      "record k successive crossings per replica");

  // ---- wl2d-exit ----
  ExperimentFlags wl2d;
  double R = 1.1, upsilon = 0.1;
  int d = 22;
  CLI::App* cmd_wl2d = app.add_subcommand(
      "wl2d-exit", "exit-time experiment on the 2D double-well landscape");
  add_common_flags(cmd_wl2d, wl2d, "--beta-grid",
                   "inverse-temperature grid (lo:hi:linN | v1,v2,...)");
  cmd_wl2d->add_option("--R", R, "half-width of the x1 domain");
  cmd_wl2d->add_option("--d", d, "number of strata");
  cmd_wl2d->add_option("--upsilon", upsilon, "proposal standard deviation");
  cmd_wl2d->add_option("--successive", wl2d.successive,
                       "record k successive crossings per replica");

  // ---- fit ----
  std::string fit_in, fit_kind, fit_transform = "inv-eps", fit_out;
  double fit_expected = std::nan(""), fit_min_x = 0.0;
  int fit_k = 1;
  CLI::App* cmd_fit =
      app.add_subcommand("fit", "fit a scaling law to a summary.csv");
  cmd_fit->add_option("--in", fit_in, "summary.csv path")->required();
  cmd_fit->add_option("--kind", fit_kind, "scaling law")
      ->required()
      ->check(CLI::IsMember({"exp-beta", "power-beta", "power-logeps"}));
  cmd_fit->add_option("--expected", fit_expected, "expected slope for rel_err");
  cmd_fit->add_option("--min-x", fit_min_x,
                      "drop points with beta (or |ln eps|) below this");
  cmd_fit->add_option("--transform", fit_transform,
                      "abscissa for power-logeps")
      ->check(CLI::IsMember({"inv-eps", "loglog-eps"}));
  cmd_fit->add_option("--k", fit_k, "crossing index for successive summaries");
  cmd_fit->add_option("--out", fit_out, "write the report JSON here too");

  // ---- theta-star ----
  double ts_beta = 0.0, ts_R = 1.1, ts_tol = 1e-6;
  int ts_d = 22, ts_resolution = 200;
  std::string ts_window = "-3:3.5", ts_out;
  CLI::App* cmd_ts = app.add_subcommand(
      "theta-star", "per-stratum weights of exp(-beta U) by quadrature");
  cmd_ts->add_option("--beta", ts_beta, "inverse temperature")->required();
  cmd_ts->add_option("--R", ts_R, "half-width of the x1 domain");
  cmd_ts->add_option("--d", ts_d, "number of strata");
  cmd_ts->add_option("--x2-window", ts_window, "x2 integration window lo:hi");
  cmd_ts->add_option("--resolution", ts_resolution, "grid points per unit length");
  cmd_ts->add_option("--tol", ts_tol, "refinement agreement tolerance");
  cmd_ts->add_option("--out", ts_out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_toy->parsed() || cmd_wl2d->parsed()) {
      const bool is_toy = cmd_toy->parsed();
      const ExperimentFlags& flags = is_toy ? toy : wl2d;
      json config;
      if (!flags.from_config.empty()) {
        config = load_json_file(flags.from_config);
        if (config.contains("config")) config = config["config"];
      } else {
        if (flags.grid_spec.empty()) {
          std::cerr << "error: " << (is_toy ? "--eps-grid" : "--beta-grid")
                    << " is required (or --from-config)\n";
          return kExitUsage;
        }
        if (flags.replicas == 0) {
          std::cerr << "error: --replicas is required and must be >= 1\n";
          return kExitUsage;
        }
        if (flags.out.empty()) {
          std::cerr << "error: --out is required\n";
          return kExitUsage;
        }
        config["model"] = is_toy ? "toy" : "landscape2d";
        config["grid"] = parse_grid(flags.grid_spec);
        config["alpha"] = flags.alpha;
        config["gamma_star"] = flags.gamma_star;
        config["update"] = flags.update;
        config["replicas"] = flags.replicas;
        config["seed"] = flags.seed;
        config["step_cap"] = flags.step_cap;
        config["out"] = flags.out;
        if (!is_toy) {
          config["R"] = R;
          config["d"] = d;
          config["upsilon"] = upsilon;
        }
        if (flags.successive > 0) config["successive"] = flags.successive;
      }
      return run_experiment(config);
    }

    if (cmd_fit->parsed()) {
      json config;
      config["in"] = fit_in;
      config["kind"] = fit_kind;
      if (!std::isnan(fit_expected)) config["expected"] = fit_expected;
      config["min_x"] = fit_min_x;
      config["transform"] = fit_transform;
      config["k"] = fit_k;
      if (!fit_out.empty()) config["out"] = fit_out;

      char err[512] = {0};
      std::string report(1 << 16, '\0');
      int rc = wlx_fit_summary(config.dump().c_str(), report.data(),
                               static_cast<int>(report.size()), err, sizeof(err));
      if (rc != WLX_OK) {
        std::cerr << "error: " << err << "\n";
        return rc == WLX_INVALID ? kExitUsage : kExitRuntime;
      }
      report.resize(std::strlen(report.c_str()));
      std::string table(1 << 16, '\0');
      rc = wlx_fit_render_text(report.c_str(), table.data(),
                               static_cast<int>(table.size()), err, sizeof(err));
      if (rc != WLX_OK) {
        std::cerr << "error: " << err << "\n";
        return kExitRuntime;
      }
      std::cout << table.c_str() << "\n" << report << "\n";
      return kExitOk;
    }

    if (cmd_ts->parsed()) {
      const std::size_t colon = ts_window.find(':');
      if (colon == std::string::npos) {
        std::cerr << "error: --x2-window expects lo:hi\n";
        return kExitUsage;
      }
      json config;
      config["beta"] = ts_beta;
      config["R"] = ts_R;
      config["d"] = ts_d;
      config["x2_lo"] = std::stod(ts_window.substr(0, colon));
      config["x2_hi"] = std::stod(ts_window.substr(colon + 1));
      config["resolution"] = ts_resolution;
      config["tol"] = ts_tol;
      config["out"] = ts_out;
      char err[512] = {0};
      const int rc =
          wlx_theta_star_table(config.dump().c_str(), err, sizeof(err));
      if (rc != WLX_OK) {
        std::cerr << "error: " << err << "\n";
        return rc == WLX_INVALID ? kExitUsage : kExitRuntime;
      }
      std::cout << "wrote " << ts_out << "\n";
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  std::cout << app.help();
  return kExitUsage;
}

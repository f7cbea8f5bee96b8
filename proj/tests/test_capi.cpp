#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "wl/capi.h"
#include "wl/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wlexit-capi" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version string") {
  CHECK(std::string(wlx_version()) == WLEXIT_VERSION);
}

TEST_CASE("toy simulator handle lifecycle") {
  wlx_toy_sim* sim = nullptr;
  char err[256] = {0};
  REQUIRE(wlx_toy_sim_create(0.1, 1.0, 1.0, "nonlinear", 11, 0, &sim, err,
                             sizeof(err)) == WLX_OK);
  REQUIRE(sim != nullptr);
  double total = 0.0;
  for (int i = 0; i < 2000; ++i) {
    uint64_t steps = 0;
    int capped = 1;
    REQUIRE(wlx_toy_sim_sample_exit(sim, &steps, &capped, err, sizeof(err)) ==
            WLX_OK);
    CHECK(capped == 0);
    CHECK(steps >= 2);
    total += static_cast<double>(steps);
  }
  CHECK(total / 2000.0 < 63.0);  // adaptation beats the 6/eps + 3 mean
  wlx_toy_sim_destroy(sim);
}

TEST_CASE("handle creation rejects bad parameters with messages") {
  wlx_toy_sim* sim = nullptr;
  char err[256] = {0};
  CHECK(wlx_toy_sim_create(1.5, 1.0, 1.0, "nonlinear", 1, 0, &sim, err,
                           sizeof(err)) == WLX_INVALID);
  CHECK(sim == nullptr);
  CHECK(std::strlen(err) > 0);
  CHECK(std::string(err).find("epsilon") != std::string::npos);

  err[0] = '\0';
  CHECK(wlx_toy_sim_create(0.1, 1.0, 1.0, "smoothed", 1, 0, &sim, err,
                           sizeof(err)) == WLX_INVALID);
  CHECK(std::string(err).find("update rule") != std::string::npos);

  // truncation keeps the buffer terminated
  char tiny[8] = {0};
  CHECK(wlx_toy_sim_create(1.5, 1.0, 1.0, "nonlinear", 1, 0, &sim, tiny,
                           sizeof(tiny)) == WLX_INVALID);
  CHECK(std::strlen(tiny) < sizeof(tiny));
}

TEST_CASE("stateless helpers") {
  char err[256] = {0};
  double out = 0.0;
  REQUIRE(wlx_log_xi(1.0, 1.0, 10, &out, err, sizeof(err)) == WLX_OK);
  CHECK(out == doctest::Approx(std::log(11.0)).epsilon(1e-12));
  CHECK(wlx_log_xi(-1.0, 1.0, 10, &out, err, sizeof(err)) == WLX_INVALID);

  REQUIRE(wlx_toy_expected_exit(0.5, &out, err, sizeof(err)) == WLX_OK);
  CHECK(out == 15.0);
  CHECK(wlx_toy_expected_exit(0.0, &out, err, sizeof(err)) == WLX_INVALID);
}

TEST_CASE("experiment round trip through the C surface") {
  const fs::path dir = fresh_dir("run");
  json config;
  config["model"] = "toy";
  config["grid"] = {0.1};
  config["alpha"] = 1.0;
  config["gamma_star"] = 0.0;
  config["replicas"] = 20000;
  config["seed"] = 99;
  config["out"] = dir.string();

  char err[512] = {0};
  REQUIRE(wlx_run_exit_experiment(config.dump().c_str(), err, sizeof(err)) ==
          WLX_OK);
  REQUIRE(fs::exists(dir / "raw.csv"));
  REQUIRE(fs::exists(dir / "summary.csv"));
  REQUIRE(fs::exists(dir / "manifest.json"));

  // a manifest is accepted wherever a config is
  json manifest;
  {
    std::ifstream in(dir / "manifest.json");
    in >> manifest;
  }
  const fs::path dir2 = fresh_dir("run-again");
  manifest["config"]["out"] = dir2.string();
  REQUIRE(wlx_run_exit_experiment(manifest.dump().c_str(), err, sizeof(err)) ==
          WLX_OK);
  CHECK(slurp(dir / "raw.csv") == slurp(dir2 / "raw.csv"));

  // malformed json and bad configs map to WLX_INVALID
  CHECK(wlx_run_exit_experiment("{not json", err, sizeof(err)) == WLX_INVALID);
  config["grid"] = json::array();
  CHECK(wlx_run_exit_experiment(config.dump().c_str(), err, sizeof(err)) ==
        WLX_INVALID);
  CHECK(std::strlen(err) > 0);
}

TEST_CASE("fit through the C surface") {
  const fs::path dir = fresh_dir("fit");
  const fs::path csv = dir / "summary.csv";
  {
    std::ofstream f(csv);
    f.precision(17);
    f << "grid_value,mean,stderr,median,q10,q90,m_effective,capped_count\n";
    for (double b : {2.0, 3.0, 4.0, 5.0})
      f << b << ',' << 5.0 * std::exp(1.2 * b) << ",1,0,0,0,100,0\n";
  }
  json config;
  config["in"] = csv.string();
  config["kind"] = "exp-beta";
  config["expected"] = 1.2;
  config["out"] = (dir / "fit.json").string();

  char err[512] = {0};
  char report[4096] = {0};
  REQUIRE(wlx_fit_summary(config.dump().c_str(), report, sizeof(report), err,
                          sizeof(err)) == WLX_OK);
  const json fit = json::parse(report);
  CHECK(fit["slope"].get<double>() == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(fit["rel_err"].get<double>() <= 1e-9);
  CHECK(fs::exists(dir / "fit.json"));

  char table[4096] = {0};
  REQUIRE(wlx_fit_render_text(report, table, sizeof(table), err, sizeof(err)) ==
          WLX_OK);
  CHECK(std::string(table).find("exp-beta") != std::string::npos);

  // undersized output buffer is an error, not a truncation
  char small[8] = {0};
  CHECK(wlx_fit_summary(config.dump().c_str(), small, sizeof(small), err,
                        sizeof(err)) == WLX_INVALID);
  CHECK(std::string(err).find("buffer") != std::string::npos);
}

TEST_CASE("theta-star table through the C surface") {
  const fs::path dir = fresh_dir("theta");
  json config;
  config["beta"] = 10.0;
  config["R"] = 1.1;
  config["d"] = 22;
  config["out"] = (dir / "theta.csv").string();

  char err[512] = {0};
  REQUIRE(wlx_theta_star_table(config.dump().c_str(), err, sizeof(err)) ==
          WLX_OK);
  std::ifstream in(dir / "theta.csv");
  REQUIRE(in);
  std::string header;
  std::getline(in, header);
  CHECK(header == "stratum,a_lo,a_hi,theta_star,free_energy");
  std::vector<double> weights;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    for (int i = 0; i < 4; ++i) std::getline(ss, field, ',');
    weights.push_back(std::strtod(field.c_str(), nullptr));
  }
  REQUIRE(weights.size() == 22);
  double sum = 0.0;
  for (double w : weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t l = 0; l < 22; ++l)
    CHECK(weights[l] == doctest::Approx(weights[21 - l]).epsilon(1e-6));

  // unreachable tolerance reports non-convergence as a runtime error
  config["tol"] = 1e-16;
  CHECK(wlx_theta_star_table(config.dump().c_str(), err, sizeof(err)) ==
        WLX_RUNTIME);
}

TEST_CASE("theta-star at the low-temperature figure configuration") {
  // beta = 20, d = 55: weights span ~20 orders of magnitude and must still
  // come out symmetric and normalized
  const fs::path dir = fresh_dir("theta-cold");
  json config;
  config["beta"] = 20.0;
  config["R"] = 1.1;
  config["d"] = 55;
  config["out"] = (dir / "theta.csv").string();
  char err[512] = {0};
  REQUIRE(wlx_theta_star_table(config.dump().c_str(), err, sizeof(err)) ==
          WLX_OK);
  std::ifstream in(dir / "theta.csv");
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> weights, free_energy;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::array<std::string, 5> fields;
    for (auto& f : fields) std::getline(ss, f, ',');
    weights.push_back(std::strtod(fields[3].c_str(), nullptr));
    free_energy.push_back(std::strtod(fields[4].c_str(), nullptr));
  }
  REQUIRE(weights.size() == 55);
  double sum = 0.0;
  for (double w : weights) sum += w;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t l = 0; l < 55; ++l) {
    CHECK(weights[l] == doctest::Approx(weights[54 - l]).epsilon(1e-5));
    CHECK(free_energy[l] ==
          doctest::Approx(-std::log(weights[l]) / 20.0).epsilon(1e-9));
  }
  // the central barrier strata are heavily suppressed
  CHECK(weights[27] < 1e-12);
}

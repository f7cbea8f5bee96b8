#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "wl/scalefit.hpp"

namespace sf = wl::scalefit;
using nlohmann::json;

TEST_CASE("exact recovery of noiseless laws") {
  // t = 5 exp(1.2 beta)
  sf::Points exp_points;
  for (double b : {2.0, 3.0, 4.5, 6.0, 8.0})
    exp_points.emplace_back(b, 5.0 * std::exp(1.2 * b));
  const sf::ScalingFit fe = sf::fit_exp_in_beta(exp_points);
  CHECK(fe.slope == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(fe.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-10));
  CHECK(fe.r_squared == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fe.slope_stderr <= 1e-10);

  // t = 2 beta^4
  sf::Points pow_points;
  for (double b : {1.0, 2.0, 4.0, 8.0, 16.0})
    pow_points.emplace_back(b, 2.0 * std::pow(b, 4.0));
  const sf::ScalingFit fp = sf::fit_power_in_beta(pow_points);
  CHECK(fp.slope == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(fp.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-10));

  // T = 7 |ln eps|^3 under the alpha < 1 transform
  sf::Points log_points;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-6})
    log_points.emplace_back(eps, 7.0 * std::pow(std::abs(std::log(eps)), 3.0));
  const sf::ScalingFit fl =
      sf::fit_power_in_logeps(log_points, sf::EpsTransform::kLogLogEps);
  CHECK(fl.slope == doctest::Approx(3.0).epsilon(1e-10));

  // T = eps^{-1/2} under the alpha = 1 transform
  sf::Points inv_points;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5})
    inv_points.emplace_back(eps, std::pow(eps, -0.5));
  const sf::ScalingFit fi =
      sf::fit_power_in_logeps(inv_points, sf::EpsTransform::kInverseEps);
  CHECK(fi.slope == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("expected slopes attach relative errors") {
  sf::Points points;
  for (double b : {2.0, 3.0, 4.0}) points.emplace_back(b, std::exp(2.0 * b));
  const sf::ScalingFit fit = sf::fit_exp_in_beta(points, 2.5);
  REQUIRE(fit.expected.has_value());
  CHECK(*fit.expected == 2.5);
  CHECK(*fit.rel_err == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("fitting the wrong family shows up in r_squared") {
  sf::Points points;
  for (double b = 2.0; b <= 12.0; b += 1.0)
    points.emplace_back(b, 3.0 * std::exp(1.1 * b));
  const double exp_r2 = sf::fit_exp_in_beta(points).r_squared;
  const double pow_r2 = sf::fit_power_in_beta(points).r_squared;
  CHECK(exp_r2 > pow_r2);
  CHECK(exp_r2 > 0.9999);
  CHECK(pow_r2 < 0.99);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(sf::fit_exp_in_beta({{1.0, 2.0}, {2.0, 3.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      sf::fit_exp_in_beta({{1.0, 2.0}, {1.0, 3.0}, {1.0, 4.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sf::fit_exp_in_beta({{1.0, -2.0}, {2.0, 3.0}, {3.0, 4.0}}),
      std::invalid_argument);
  // a cutoff that leaves fewer than 3 points
  sf::Points points{{1.0, 2.0}, {2.0, 3.0}, {3.0, 4.0}, {4.0, 5.0}};
  CHECK_THROWS_AS(sf::fit_exp_in_beta(points, std::nullopt, 2.5),
                  std::invalid_argument);
  CHECK_NOTHROW(sf::fit_exp_in_beta(points, std::nullopt, 1.5));
}

TEST_CASE("fit json round trip") {
  sf::Points points;
  for (double b : {2.0, 3.0, 4.0, 5.0})
    points.emplace_back(b, 4.0 * std::exp(0.9 * b));
  const sf::ScalingFit fit = sf::fit_exp_in_beta(points, 1.0, 1.0);
  const json j = sf::fit_to_json(fit);
  CHECK(j["kind"] == "exp-beta");
  CHECK(j["cutoffs"]["min_x"] == 1.0);
  const sf::ScalingFit back = sf::fit_from_json(j);
  CHECK(back.slope == fit.slope);
  CHECK(back.r_squared == fit.r_squared);
  REQUIRE(back.expected.has_value());
  CHECK(*back.expected == 1.0);
}

TEST_CASE("table report against the published exponent tables") {
  // alpha -> mu_alpha from the power-law study, gamma_star = 1
  const std::vector<std::pair<double, double>> power_rows = {
      {0.125, 1.11}, {0.25, 1.30}, {0.375, 1.55},
      {0.5, 2.02},   {0.625, 2.72}, {0.75, 4.06}};
  std::vector<sf::TableRow> rows;
  for (const auto& [alpha, reported] : power_rows) {
    sf::Points synthetic;
    for (double b : {5.0, 10.0, 20.0, 40.0})
      synthetic.emplace_back(b, std::pow(b, 1.0 / (1.0 - alpha)));
    sf::TableRow row;
    row.label = "alpha=" + std::to_string(alpha);
    row.fit = sf::fit_power_in_beta(synthetic, 1.0 / (1.0 - alpha));
    row.paper_value = reported;
    rows.push_back(row);
    // the published exponents sit within 5% of 1/(1-alpha)
    CHECK(std::abs(reported - 1.0 / (1.0 - alpha)) / (1.0 / (1.0 - alpha)) <
          0.05);
  }
  const json table = sf::table_to_json(rows);
  REQUIRE(table.size() == power_rows.size());
  CHECK(table[0]["paper_value"] == 1.11);
  CHECK(table[3]["rel_err_vs_paper"].get<double>() < 0.02);
  const std::string text = sf::render_table(rows);
  CHECK(text.find("alpha=0.5") != std::string::npos);
  CHECK(text.find("power-beta") != std::string::npos);

  // exponential rates mu_{gs} decrease in gamma_star and the bin-width rates
  // decrease as the bins widen
  const std::vector<double> mu_gs = {2.32, 1.74, 1.51, 1.25, 0.92};
  for (std::size_t i = 1; i < mu_gs.size(); ++i) CHECK(mu_gs[i] < mu_gs[i - 1]);
  const std::vector<std::pair<double, double>> bin_rows = {
      {0.025, 1.47}, {0.05, 1.21}, {0.1, 0.92}, {0.2, 0.63}};
  for (std::size_t i = 1; i < bin_rows.size(); ++i)
    CHECK(bin_rows[i].second < bin_rows[i - 1].second);

  // a table without references renders fits only
  std::vector<sf::TableRow> bare = {rows[0]};
  bare[0].paper_value.reset();
  const json bare_json = sf::table_to_json(bare);
  CHECK(bare_json[0]["paper_value"].is_null());
  CHECK(sf::render_table(bare).find('-') != std::string::npos);
}

TEST_CASE("summary csv reader") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "wlexit-tests";
  fs::create_directories(dir);
  const fs::path plain = dir / "summary_plain.csv";
  {
    std::ofstream f(plain);
    f << "grid_value,mean,stderr,median,q10,q90,m_effective,capped_count\n";
    f << "3,100.5,1.5,99,80,120,1000,0\n";
    f << "4,200.5,2.5,199,160,240,1000,0\n";
    f << "5,400.5,3.5,399,320,480,0,1000\n";  // skipped: no effective runs
  }
  const sf::Points p = sf::read_summary_csv(plain);
  REQUIRE(p.size() == 2);
  CHECK(p[0].first == 3.0);
  CHECK(p[1].second == 200.5);

  const fs::path successive = dir / "summary_successive.csv";
  {
    std::ofstream f(successive);
    f << "grid_value,k,mean,stderr,median,q10,q90,m_effective,capped_count\n";
    f << "3,1,100,1,99,80,120,1000,0\n";
    f << "3,2,300,1,299,280,320,1000,0\n";
  }
  const sf::Points k1 = sf::read_summary_csv(successive, 1);
  REQUIRE(k1.size() == 1);
  CHECK(k1[0].second == 100.0);
  const sf::Points k2 = sf::read_summary_csv(successive, 2);
  REQUIRE(k2.size() == 1);
  CHECK(k2[0].second == 300.0);

  CHECK_THROWS(sf::read_summary_csv(dir / "missing.csv"));
}

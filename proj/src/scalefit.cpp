#include "wl/scalefit.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace wl::scalefit {

namespace {

using nlohmann::json;

const char* kind_name(FitKind kind) {
  switch (kind) {
    case FitKind::kExpInBeta:
      return "exp-beta";
    case FitKind::kPowerInBeta:
      return "power-beta";
    case FitKind::kPowerInLogEps:
      return "power-logeps";
  }
  return "?";
}

FitKind kind_from_name(const std::string& name) {
  if (name == "exp-beta") return FitKind::kExpInBeta;
  if (name == "power-beta") return FitKind::kPowerInBeta;
  if (name == "power-logeps") return FitKind::kPowerInLogEps;
  throw std::invalid_argument("unknown fit kind '" + name + "'");
}

// Plain OLS of y on x with slope standard error from the residual variance.
ScalingFit ols(const std::vector<double>& x, const std::vector<double>& y,
               FitKind kind, std::optional<double> expected, double min_x) {
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("fit: need at least 3 usable points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
    throw std::invalid_argument("fit: degenerate abscissae (all x equal)");

  ScalingFit fit;
  fit.kind = kind;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_stderr =
      std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.n_points = static_cast<int>(n);
  fit.min_x = min_x;
  if (expected) {
    fit.expected = expected;
    fit.rel_err = std::abs(fit.slope - *expected) / std::abs(*expected);
  }
  return fit;
}

}  // namespace

ScalingFit fit_exp_in_beta(const Points& points, std::optional<double> expected,
                           double min_x) {
  std::vector<double> x, y;
  for (const auto& [beta, t] : points) {
    if (beta < min_x) continue;
    if (!(t > 0.0))
      throw std::invalid_argument("fit_exp_in_beta: exit times must be > 0");
    x.push_back(beta);
    y.push_back(std::log(t));
  }
  return ols(x, y, FitKind::kExpInBeta, expected, min_x);
}

ScalingFit fit_power_in_beta(const Points& points,
                             std::optional<double> expected, double min_x) {
  std::vector<double> x, y;
  for (const auto& [beta, t] : points) {
    if (beta < min_x) continue;
    if (!(beta > 0.0) || !(t > 0.0))
      throw std::invalid_argument("fit_power_in_beta: need beta, t > 0");
    x.push_back(std::log(beta));
    y.push_back(std::log(t));
  }
  return ols(x, y, FitKind::kPowerInBeta, expected, min_x);
}

ScalingFit fit_power_in_logeps(const Points& points, EpsTransform transform,
                               std::optional<double> expected, double min_x) {
  std::vector<double> x, y;
  for (const auto& [eps, t] : points) {
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("fit_power_in_logeps: eps must be in (0, 1)");
    if (!(t > 0.0))
      throw std::invalid_argument("fit_power_in_logeps: exit times must be > 0");
    const double abs_log_eps = std::abs(std::log(eps));
    if (abs_log_eps < min_x) continue;
    x.push_back(transform == EpsTransform::kInverseEps
                    ? std::log(1.0 / eps)
                    : std::log(abs_log_eps));
    y.push_back(std::log(t));
  }
  return ols(x, y, FitKind::kPowerInLogEps, expected, min_x);
}

json fit_to_json(const ScalingFit& fit) {
  json j;
  j["kind"] = kind_name(fit.kind);
  j["slope"] = fit.slope;
  j["slope_stderr"] = fit.slope_stderr;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  if (fit.expected) {
    j["expected"] = *fit.expected;
    j["rel_err"] = *fit.rel_err;
  } else {
    j["expected"] = nullptr;
    j["rel_err"] = nullptr;
  }
  j["n_points"] = fit.n_points;
  j["cutoffs"] = {{"min_x", fit.min_x}};
  return j;
}

ScalingFit fit_from_json(const json& j) {
  ScalingFit fit;
  fit.kind = kind_from_name(j.at("kind").get<std::string>());
  fit.slope = j.at("slope").get<double>();
  fit.slope_stderr = j.at("slope_stderr").get<double>();
  fit.intercept = j.at("intercept").get<double>();
  fit.r_squared = j.at("r_squared").get<double>();
  if (j.contains("expected") && !j.at("expected").is_null()) {
    fit.expected = j.at("expected").get<double>();
    fit.rel_err = j.at("rel_err").get<double>();
  }
  fit.n_points = j.value("n_points", 0);
  if (j.contains("cutoffs")) fit.min_x = j["cutoffs"].value("min_x", 0.0);
  return fit;
}

std::string render_table(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << "label                 kind          slope     +/-       expected  paper     rel_err\n";
  for (const TableRow& row : rows) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-21s %-13s %-9.4g %-9.3g ",
                  row.label.c_str(), kind_name(row.fit.kind), row.fit.slope,
                  row.fit.slope_stderr);
    out << line;
    auto cell = [&out](const std::optional<double>& v) {
      char buf[32];
      if (v)
        std::snprintf(buf, sizeof(buf), "%-9.4g ", *v);
      else
        std::snprintf(buf, sizeof(buf), "%-9s ", "-");
      out << buf;
    };
    cell(row.fit.expected);
    cell(row.paper_value);
    cell(row.fit.rel_err);
    out << '\n';
  }
  return out.str();
}

json table_to_json(const std::vector<TableRow>& rows) {
  json arr = json::array();
  for (const TableRow& row : rows) {
    json r = fit_to_json(row.fit);
    r["label"] = row.label;
    if (row.paper_value) {
      r["paper_value"] = *row.paper_value;
      r["rel_err_vs_paper"] =
          std::abs(row.fit.slope - *row.paper_value) / std::abs(*row.paper_value);
    } else {
      r["paper_value"] = nullptr;
    }
    arr.push_back(r);
  }
  return arr;
}

Points read_summary_csv(const std::filesystem::path& path, int k) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string header;
  if (!std::getline(in, header))
    throw std::runtime_error("empty summary csv: " + path.string());

  std::vector<std::string> cols;
  {
    std::istringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
  }
  auto col = [&cols](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return static_cast<int>(i);
    return -1;
  };
  const int c_grid = col("grid_value");
  const int c_mean = col("mean");
  const int c_k = col("k");
  const int c_meff = col("m_effective");
  if (c_grid < 0 || c_mean < 0)
    throw std::runtime_error(path.string() +
                             ": expected grid_value and mean columns");

  Points points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != cols.size())
      throw std::runtime_error(path.string() + ": ragged csv row '" + line + "'");
    if (c_k >= 0 &&
        std::strtol(fields[static_cast<std::size_t>(c_k)].c_str(), nullptr, 10) != k)
      continue;
    if (c_meff >= 0 &&
        std::strtoull(fields[static_cast<std::size_t>(c_meff)].c_str(), nullptr,
                      10) == 0)
      continue;
    points.emplace_back(
        std::strtod(fields[static_cast<std::size_t>(c_grid)].c_str(), nullptr),
        std::strtod(fields[static_cast<std::size_t>(c_mean)].c_str(), nullptr));
  }
  return points;
}

}  // namespace wl::scalefit

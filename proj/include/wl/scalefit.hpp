#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

// Least-squares regression of exit-time summaries onto the predicted scaling
// laws: exponential in beta, power law in beta, and the two epsilon scalings
// of the toy model.
namespace wl::scalefit {

enum class FitKind { kExpInBeta, kPowerInBeta, kPowerInLogEps };

// Abscissa transform for the toy-model epsilon scalings: ln T against
// ln(1/eps) (the alpha = 1 law) or against ln|ln eps| (alpha < 1).
enum class EpsTransform { kInverseEps, kLogLogEps };

struct ScalingFit {
  FitKind kind = FitKind::kExpInBeta;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::optional<double> expected;
  std::optional<double> rel_err;
  int n_points = 0;
  double min_x = 0.0;  // cutoff applied on the natural abscissa
};

using Points = std::vector<std::pair<double, double>>;  // (x, mean exit time)

// ln t = intercept + slope * beta. Points with beta < min_x are dropped.
ScalingFit fit_exp_in_beta(const Points& points,
                           std::optional<double> expected = std::nullopt,
                           double min_x = 0.0);

// ln t = intercept + slope * ln beta.
ScalingFit fit_power_in_beta(const Points& points,
                             std::optional<double> expected = std::nullopt,
                             double min_x = 0.0);

// Toy scalings in eps; points are (eps, mean T). min_x cuts on |ln eps|.
ScalingFit fit_power_in_logeps(const Points& points, EpsTransform transform,
                               std::optional<double> expected = std::nullopt,
                               double min_x = 0.0);

nlohmann::json fit_to_json(const ScalingFit& fit);
ScalingFit fit_from_json(const nlohmann::json& j);

struct TableRow {
  std::string label;
  ScalingFit fit;
  std::optional<double> paper_value;
};

// Fitted-vs-expected-vs-reported comparison, as aligned text and JSON.
std::string render_table(const std::vector<TableRow>& rows);
nlohmann::json table_to_json(const std::vector<TableRow>& rows);

// Reads a summary.csv produced by the experiment harness into (grid_value,
// mean) points. For successive-exit summaries the crossing index k must be
// selected (defaults to the first crossing). Rows whose m_effective is zero
// are skipped.
Points read_summary_csv(const std::filesystem::path& path, int k = 1);

}  // namespace wl::scalefit

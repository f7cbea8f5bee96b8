#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wl/chain.hpp"
#include "wl/schedule.hpp"
#include "wl/stats.hpp"
#include "wl/weights.hpp"

// Replica farms over parameter grids: deterministic per-replica seeding,
// CSV/manifest emission, summary statistics and the Exp(1) limit-law
// diagnostics.
namespace wl::exitlab {

enum class ModelKind { kToy, kLandscape2d };

struct ExperimentConfig {
  ModelKind model = ModelKind::kToy;
  std::vector<double> grid;  // epsilon values (toy) or beta values (2d)
  StepSchedule schedule;
  UpdateRule update_rule = UpdateRule::kNonlinear;
  std::uint64_t replicas = 0;
  std::uint64_t seed = 0;
  std::uint64_t step_cap = kDefaultStepCap;
  std::string output_path;  // directory for raw.csv / summary.csv / manifest.json

  // Landscape geometry; ignored for the toy model.
  double half_width = 1.1;
  int n_strata = 22;
  double proposal_sd = 0.1;

  // 0 = single first-exit experiment; k >= 1 = successive-exit experiment
  // recording k alternating crossings per replica.
  int successive = 0;
};

// Rejects empty/non-monotone grids, zero replicas, out-of-range model
// parameters. Throws std::invalid_argument.
void validate(const ExperimentConfig& config);

struct SummaryRow {
  double grid_value = 0.0;
  int k = 0;  // 0 in single-exit mode, 1-based crossing index otherwise
  stats::Summary summary;
};

struct GridResult {
  std::vector<SummaryRow> summaries;
  std::filesystem::path raw_csv;
  std::filesystem::path summary_csv;
  std::filesystem::path manifest;
};

// Runs replicas for every grid point (parallel across replicas, deterministic
// per-replica seeds derived from (seed, grid index, replica index)), writes
// raw.csv, summary.csv and manifest.json under output_path, and returns the
// summaries. Step-cap exhaustion is recorded per replica, never fatal.
// On error, partially written outputs are removed.
GridResult run_grid(const ExperimentConfig& config);

// Empirical survival P(scaled T > c) on a c-grid.
std::vector<std::pair<double, double>> survival_curve(
    const std::vector<std::uint64_t>& samples, double scale, double c_lo = 0.0,
    double c_hi = 6.0, double c_step = 0.25);

// KS sup-distance of scaled samples to the unit exponential.
double ks_to_exp1(const std::vector<double>& scaled_samples);

nlohmann::json config_to_json(const ExperimentConfig& config);
// Accepts either a bare config object or a manifest carrying one under
// "config".
ExperimentConfig config_from_json(const nlohmann::json& j);

nlohmann::json make_manifest(const ExperimentConfig& config,
                             const GridResult& result);

// Raw rows as written to raw.csv, for tools that post-process samples.
struct RawRow {
  double grid_value;
  std::uint64_t replica;
  int k;
  std::uint64_t exit_time;
  bool capped;
};
std::vector<RawRow> read_raw_csv(const std::filesystem::path& path);

// Worker threads used by the replica farm: hardware concurrency, overridable
// with the WLEXIT_THREADS environment variable.
unsigned worker_threads();

}  // namespace wl::exitlab

#include "wl/exitlab.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "wl/landscape2d.hpp"
#include "wl/rng.hpp"
#include "wl/toy3.hpp"
#include "wl/version.hpp"

namespace wl::exitlab {

namespace {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void parallel_for(std::uint64_t count, unsigned threads,
                  const std::function<void(std::uint64_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n =
      static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Replica bodies. Each returns the per-crossing samples (a single entry in
// single-exit mode).
std::vector<ExitSample> run_toy_replica(const ExperimentConfig& config,
                                        double epsilon, Rng& rng) {
  const toy::Model model(epsilon);
  if (config.successive >= 1) {
    toy::SimOptions opts{config.update_rule, config.step_cap};
    return toy::sample_successive_exits(model, config.schedule,
                                        config.successive, rng, opts);
  }
  if (!config.schedule.adaptive() &&
      config.update_rule == UpdateRule::kNonlinear) {
    // gamma_star = 0 keeps the weights constant; the dedicated non-adaptive
    // sampler walks the identical kernel rows.
    return {toy::sample_exit_nonadaptive(model, rng, config.step_cap)};
  }
  toy::SimOptions opts{config.update_rule, config.step_cap};
  return {toy::sample_exit_adaptive(model, config.schedule, rng, opts).exit};
}

std::vector<ExitSample> run_land_replica(const ExperimentConfig& config,
                                         double beta, Rng& rng) {
  const land::Landscape landscape(beta, config.half_width, config.n_strata,
                                  config.proposal_sd);
  if (config.successive >= 1)
    return land::run_successive_exits(landscape, config.schedule,
                                      config.update_rule, config.successive,
                                      rng, config.step_cap);
  return {land::run_exit(landscape, config.schedule, config.update_rule, rng,
                         config.step_cap)};
}

void remove_outputs(const std::filesystem::path& dir) {
  std::error_code ec;
  for (const char* name : {"raw.csv", "summary.csv", "manifest.json"})
    std::filesystem::remove(dir / name, ec);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("WLEXIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void validate(const ExperimentConfig& config) {
  if (config.grid.empty())
    throw std::invalid_argument("config: grid must be nonempty");
  for (std::size_t i = 1; i < config.grid.size(); ++i) {
    const bool up = config.grid[1] > config.grid[0];
    if (up ? config.grid[i] <= config.grid[i - 1]
           : config.grid[i] >= config.grid[i - 1])
      throw std::invalid_argument("config: grid must be strictly monotone");
  }
  if (config.replicas < 1)
    throw std::invalid_argument("config: replicas must be >= 1");
  if (config.step_cap < 1)
    throw std::invalid_argument("config: step_cap must be >= 1");
  if (config.successive < 0)
    throw std::invalid_argument("config: successive must be >= 0");
  if (config.output_path.empty())
    throw std::invalid_argument("config: output path must be set");
  if (config.model == ModelKind::kToy) {
    for (double e : config.grid) toy::Model check(e);
  } else {
    for (double b : config.grid)
      land::Landscape check(b, config.half_width, config.n_strata,
                            config.proposal_sd);
  }
  // StepSchedule invariants are enforced by its constructor; an
  // aggregate-initialized schedule is re-checked here.
  StepSchedule check(config.schedule.gamma_star, config.schedule.alpha);
}

GridResult run_grid(const ExperimentConfig& config) {
  validate(config);
  const std::filesystem::path dir(config.output_path);
  std::filesystem::create_directories(dir);

  GridResult result;
  result.raw_csv = dir / "raw.csv";
  result.summary_csv = dir / "summary.csv";
  result.manifest = dir / "manifest.json";

  try {
    // (grid point, replica) -> list of crossing samples
    std::vector<std::vector<std::vector<ExitSample>>> all(config.grid.size());
    const unsigned threads = worker_threads();
    for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
      all[gi].resize(config.replicas);
      const double value = config.grid[gi];
      parallel_for(config.replicas, threads, [&](std::uint64_t ri) {
        Rng rng(derive_seed(config.seed, gi, ri));
        all[gi][ri] = config.model == ModelKind::kToy
                          ? run_toy_replica(config, value, rng)
                          : run_land_replica(config, value, rng);
      });
    }

    const bool successive = config.successive >= 1;
    std::ofstream raw(result.raw_csv);
    if (!raw) throw std::runtime_error("cannot write " + result.raw_csv.string());
    raw << (successive ? "grid_value,replica,k,exit_time,capped\n"
                       : "grid_value,replica,exit_time,capped\n");
    for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
      const std::string gv = format_double(config.grid[gi]);
      for (std::uint64_t ri = 0; ri < config.replicas; ++ri) {
        const auto& samples = all[gi][ri];
        for (std::size_t k = 0; k < samples.size(); ++k) {
          raw << gv << ',' << ri << ',';
          if (successive) raw << (k + 1) << ',';
          raw << samples[k].steps << ',' << (samples[k].capped ? 1 : 0) << '\n';
        }
      }
    }
    raw.close();

    const int n_k = successive ? config.successive : 1;
    for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
      for (int k = 0; k < n_k; ++k) {
        std::vector<ExitSample> bucket;
        bucket.reserve(config.replicas);
        for (const auto& samples : all[gi])
          if (static_cast<std::size_t>(k) < samples.size())
            bucket.push_back(samples[static_cast<std::size_t>(k)]);
        SummaryRow row;
        row.grid_value = config.grid[gi];
        row.k = successive ? k + 1 : 0;
        row.summary = stats::summarize(bucket);
        result.summaries.push_back(row);
      }
    }

    std::ofstream sum(result.summary_csv);
    if (!sum)
      throw std::runtime_error("cannot write " + result.summary_csv.string());
    sum << (successive
                ? "grid_value,k,mean,stderr,median,q10,q90,m_effective,capped_count\n"
                : "grid_value,mean,stderr,median,q10,q90,m_effective,capped_count\n");
    for (const SummaryRow& row : result.summaries) {
      sum << format_double(row.grid_value) << ',';
      if (successive) sum << row.k << ',';
      const stats::Summary& s = row.summary;
      sum << format_double(s.mean) << ',' << format_double(s.stderr_of_mean)
          << ',' << format_double(s.median) << ',' << format_double(s.q10)
          << ',' << format_double(s.q90) << ',' << s.m_effective << ','
          << s.capped_count << '\n';
    }
    sum.close();

    std::ofstream man(result.manifest);
    if (!man)
      throw std::runtime_error("cannot write " + result.manifest.string());
    man << make_manifest(config, result).dump(2) << '\n';
    man.close();
  } catch (...) {
    remove_outputs(dir);
    throw;
  }
  return result;
}

std::vector<std::pair<double, double>> survival_curve(
    const std::vector<std::uint64_t>& samples, double scale, double c_lo,
    double c_hi, double c_step) {
  if (samples.empty())
    throw std::invalid_argument("survival_curve: empty sample");
  if (!(scale > 0.0) || !(c_step > 0.0) || !(c_hi >= c_lo))
    throw std::invalid_argument("survival_curve: bad grid");
  std::vector<double> scaled(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    scaled[i] = scale * static_cast<double>(samples[i]);
  std::sort(scaled.begin(), scaled.end());
  std::vector<std::pair<double, double>> curve;
  const double n = static_cast<double>(scaled.size());
  for (double c = c_lo; c <= c_hi + 1e-12; c += c_step) {
    const auto it = std::upper_bound(scaled.begin(), scaled.end(), c);
    const double above = static_cast<double>(scaled.end() - it);
    curve.emplace_back(c, above / n);
  }
  return curve;
}

double ks_to_exp1(const std::vector<double>& scaled_samples) {
  return stats::ks_to_exp1(scaled_samples);
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["model"] = config.model == ModelKind::kToy ? "toy" : "landscape2d";
  j["grid"] = config.grid;
  j["alpha"] = config.schedule.alpha;
  j["gamma_star"] = config.schedule.gamma_star;
  j["update"] = config.update_rule == UpdateRule::kNonlinear ? "nonlinear"
                                                             : "linearized";
  j["replicas"] = config.replicas;
  j["seed"] = config.seed;
  j["step_cap"] = config.step_cap;
  j["out"] = config.output_path;
  if (config.model == ModelKind::kLandscape2d) {
    j["R"] = config.half_width;
    j["d"] = config.n_strata;
    j["upsilon"] = config.proposal_sd;
  }
  if (config.successive >= 1) j["successive"] = config.successive;
  return j;
}

ExperimentConfig config_from_json(const json& root) {
  const json& j = root.contains("config") ? root.at("config") : root;
  ExperimentConfig config;
  const std::string model = j.at("model").get<std::string>();
  if (model == "toy")
    config.model = ModelKind::kToy;
  else if (model == "landscape2d")
    config.model = ModelKind::kLandscape2d;
  else
    throw std::invalid_argument("config: unknown model '" + model + "'");
  config.grid = j.at("grid").get<std::vector<double>>();
  config.schedule = StepSchedule(j.at("gamma_star").get<double>(),
                                 j.value("alpha", 1.0));
  const std::string update = j.value("update", "nonlinear");
  if (update == "nonlinear")
    config.update_rule = UpdateRule::kNonlinear;
  else if (update == "linearized")
    config.update_rule = UpdateRule::kLinearized;
  else
    throw std::invalid_argument("config: unknown update rule '" + update + "'");
  config.replicas = j.at("replicas").get<std::uint64_t>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.step_cap = j.value("step_cap", kDefaultStepCap);
  config.output_path = j.at("out").get<std::string>();
  config.half_width = j.value("R", 1.1);
  config.n_strata = j.value("d", 22);
  config.proposal_sd = j.value("upsilon", 0.1);
  config.successive = j.value("successive", 0);
  return config;
}

json make_manifest(const ExperimentConfig& config, const GridResult& result) {
  json m;
  m["tool"] = "wlexit";
  m["version"] = WLEXIT_VERSION;
  m["created_utc"] = utc_timestamp();
  m["config"] = config_to_json(config);
  // alpha <= 1/2 with adaptation lies outside the square-summable step-size
  // assumption of the convergence theory; tagged, not rejected.
  m["outside_a3"] = config.schedule.outside_a3();
  m["outputs"] = {{"raw_csv", result.raw_csv.string()},
                  {"summary_csv", result.summary_csv.string()}};
  return m;
}

std::vector<RawRow> read_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty raw csv: " + path.string());
  const bool successive = line.find(",k,") != std::string::npos;
  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    RawRow row{};
    std::getline(ss, field, ',');
    row.grid_value = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    row.replica = std::strtoull(field.c_str(), nullptr, 10);
    if (successive) {
      std::getline(ss, field, ',');
      row.k = static_cast<int>(std::strtol(field.c_str(), nullptr, 10));
    }
    std::getline(ss, field, ',');
    row.exit_time = std::strtoull(field.c_str(), nullptr, 10);
    std::getline(ss, field, ',');
    row.capped = field == "1";
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wl::exitlab

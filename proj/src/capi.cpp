#include "wl/capi.h"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "wl/exitlab.hpp"
#include "wl/landscape2d.hpp"
#include "wl/rng.hpp"
#include "wl/scalefit.hpp"
#include "wl/toy3.hpp"
#include "wl/version.hpp"

namespace {

using nlohmann::json;

void set_error(char* errbuf, int errbuf_len, const char* msg) {
  if (errbuf == nullptr || errbuf_len <= 0) return;
  std::snprintf(errbuf, static_cast<std::size_t>(errbuf_len), "%s", msg);
}

// Maps exceptions onto the C error codes.
template <typename Fn>
int guarded(char* errbuf, int errbuf_len, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    set_error(errbuf, errbuf_len, e.what());
    return WLX_INVALID;
  } catch (const std::invalid_argument& e) {
    set_error(errbuf, errbuf_len, e.what());
    return WLX_INVALID;
  } catch (const std::exception& e) {
    set_error(errbuf, errbuf_len, e.what());
    return WLX_RUNTIME;
  } catch (...) {
    set_error(errbuf, errbuf_len, "unknown error");
    return WLX_RUNTIME;
  }
}

int copy_out(const std::string& s, char* out, int out_len, char* errbuf,
             int errbuf_len) {
  if (out == nullptr || out_len <= static_cast<int>(s.size())) {
    set_error(errbuf, errbuf_len,
              ("output buffer too small: need " + std::to_string(s.size() + 1) +
               " bytes")
                  .c_str());
    return WLX_INVALID;
  }
  std::memcpy(out, s.data(), s.size() + 1);
  return WLX_OK;
}

json parse_config(const char* config_json) {
  if (config_json == nullptr)
    throw std::invalid_argument("config_json is null");
  return json::parse(config_json);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

extern "C" {

const char* wlx_version(void) { return WLEXIT_VERSION; }

int wlx_run_exit_experiment(const char* config_json, char* errbuf,
                            int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    const wl::exitlab::ExperimentConfig config =
        wl::exitlab::config_from_json(parse_config(config_json));
    wl::exitlab::run_grid(config);
    return WLX_OK;
  });
}

int wlx_fit_summary(const char* config_json, char* out_json, int out_json_len,
                    char* errbuf, int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    const json cfg = parse_config(config_json);
    const std::string in = cfg.at("in").get<std::string>();
    const std::string kind = cfg.at("kind").get<std::string>();
    std::optional<double> expected;
    if (cfg.contains("expected") && !cfg["expected"].is_null())
      expected = cfg["expected"].get<double>();
    const double min_x = cfg.value("min_x", 0.0);
    const int k = cfg.value("k", 1);

    const wl::scalefit::Points points = wl::scalefit::read_summary_csv(in, k);
    wl::scalefit::ScalingFit fit;
    if (kind == "exp-beta") {
      fit = wl::scalefit::fit_exp_in_beta(points, expected, min_x);
    } else if (kind == "power-beta") {
      fit = wl::scalefit::fit_power_in_beta(points, expected, min_x);
    } else if (kind == "power-logeps") {
      const std::string transform = cfg.value("transform", "inv-eps");
      wl::scalefit::EpsTransform t;
      if (transform == "inv-eps")
        t = wl::scalefit::EpsTransform::kInverseEps;
      else if (transform == "loglog-eps")
        t = wl::scalefit::EpsTransform::kLogLogEps;
      else
        throw std::invalid_argument("unknown transform '" + transform + "'");
      fit = wl::scalefit::fit_power_in_logeps(points, t, expected, min_x);
    } else {
      throw std::invalid_argument("unknown fit kind '" + kind + "'");
    }

    const std::string report = wl::scalefit::fit_to_json(fit).dump(2);
    if (cfg.contains("out") && !cfg["out"].is_null()) {
      std::ofstream f(cfg["out"].get<std::string>());
      if (!f)
        throw std::runtime_error("cannot write " +
                                 cfg["out"].get<std::string>());
      f << report << '\n';
    }
    return copy_out(report, out_json, out_json_len, errbuf, errbuf_len);
  });
}

int wlx_fit_render_text(const char* report_json, char* out_text,
                        int out_text_len, char* errbuf, int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    const json j = parse_config(report_json);
    std::vector<wl::scalefit::TableRow> rows;
    auto push = [&rows](const json& o) {
      wl::scalefit::TableRow row;
      row.label = o.value("label", "fit");
      row.fit = wl::scalefit::fit_from_json(o);
      if (o.contains("paper_value") && !o["paper_value"].is_null())
        row.paper_value = o["paper_value"].get<double>();
      rows.push_back(row);
    };
    if (j.is_array())
      for (const json& o : j) push(o);
    else
      push(j);
    return copy_out(wl::scalefit::render_table(rows), out_text, out_text_len,
                    errbuf, errbuf_len);
  });
}

int wlx_theta_star_table(const char* config_json, char* errbuf,
                         int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    const json cfg = parse_config(config_json);
    const wl::land::Landscape landscape(
        cfg.at("beta").get<double>(), cfg.value("R", 1.1), cfg.value("d", 22),
        0.1 /* proposal sd unused by quadrature */);
    wl::land::QuadratureOptions opts;
    opts.x2_lo = cfg.value("x2_lo", -3.0);
    opts.x2_hi = cfg.value("x2_hi", 3.5);
    const int resolution = cfg.value("resolution", 200);
    if (resolution < 2)
      throw std::invalid_argument("resolution must be >= 2 points per unit");
    opts.x1_subdivisions = std::max(
        4, static_cast<int>(landscape.bin_width() * resolution));
    opts.x2_subdivisions_per_unit = resolution;
    opts.tolerance = cfg.value("tol", 1e-6);

    const wl::land::QuadratureResult q =
        wl::land::theta_star_quadrature(landscape, opts);

    const std::string out = cfg.at("out").get<std::string>();
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << "stratum,a_lo,a_hi,theta_star,free_energy\n";
    for (int l = 0; l < landscape.n_strata; ++l) {
      const double w = q.weights[static_cast<std::size_t>(l)];
      f << (l + 1) << ',' << format_double(landscape.edge(l)) << ','
        << format_double(landscape.edge(l + 1)) << ',' << format_double(w)
        << ',' << format_double(-std::log(w) / landscape.beta) << '\n';
    }
    return WLX_OK;
  });
}

struct wlx_toy_sim {
  wl::toy::Model model;
  wl::StepSchedule schedule;
  wl::toy::SimOptions opts;
  wl::Rng rng;
};

int wlx_toy_sim_create(double epsilon, double gamma_star, double alpha,
                       const char* update_rule, uint64_t seed,
                       uint64_t step_cap, wlx_toy_sim** out_sim, char* errbuf,
                       int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    if (out_sim == nullptr) throw std::invalid_argument("out_sim is null");
    *out_sim = nullptr;
    wl::toy::SimOptions opts;
    const std::string rule = update_rule == nullptr ? "nonlinear" : update_rule;
    if (rule == "nonlinear")
      opts.rule = wl::UpdateRule::kNonlinear;
    else if (rule == "linearized")
      opts.rule = wl::UpdateRule::kLinearized;
    else
      throw std::invalid_argument("unknown update rule '" + rule + "'");
    if (step_cap > 0) opts.step_cap = step_cap;
    *out_sim = new wlx_toy_sim{wl::toy::Model(epsilon),
                               wl::StepSchedule(gamma_star, alpha), opts,
                               wl::Rng(seed)};
    return WLX_OK;
  });
}

int wlx_toy_sim_sample_exit(wlx_toy_sim* sim, uint64_t* exit_steps,
                            int* capped, char* errbuf, int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    if (sim == nullptr || exit_steps == nullptr)
      throw std::invalid_argument("null argument");
    const wl::toy::AdaptiveExit run =
        wl::toy::sample_exit_adaptive(sim->model, sim->schedule, sim->rng,
                                      sim->opts);
    *exit_steps = run.exit.steps;
    if (capped != nullptr) *capped = run.exit.capped ? 1 : 0;
    return WLX_OK;
  });
}

void wlx_toy_sim_destroy(wlx_toy_sim* sim) { delete sim; }

int wlx_log_xi(double gamma_star, double alpha, uint64_t n, double* out,
               char* errbuf, int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    if (out == nullptr) throw std::invalid_argument("out is null");
    *out = wl::log_xi(wl::StepSchedule(gamma_star, alpha), n);
    return WLX_OK;
  });
}

int wlx_toy_expected_exit(double epsilon, double* out, char* errbuf,
                          int errbuf_len) {
  return guarded(errbuf, errbuf_len, [&]() {
    if (out == nullptr) throw std::invalid_argument("out is null");
    *out = wl::toy::expected_exit_nonadaptive(wl::toy::Model(epsilon));
    return WLX_OK;
  });
}

}  // extern "C"

#include "wl/toy3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace wl::toy {

Model::Model(double epsilon_) : epsilon(epsilon_) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("toy::Model: epsilon must lie in (0, 1), got " +
                                std::to_string(epsilon_));
}

WeightVector target_weights(const Model& model) {
  const double z = 2.0 + model.epsilon;
  return {1.0 / z, model.epsilon / z, 1.0 / z};
}

Matrix3 nonadaptive_kernel(const Model& model) {
  const double e3 = model.epsilon / 3.0;
  return {{{1.0 - e3, e3, 0.0},
           {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
           {0.0, e3, 1.0 - e3}}};
}

namespace {

// Off-diagonal acceptance-weighted rates, shared by the two kernel builders.
// r_ij = theta(i)/theta(j).
Matrix3 kernel_from_ratios(double eps, double r01, double r10, double r12,
                           double r21) {
  const double p01 = std::min(eps * r01, 1.0) / 3.0;
  const double p10 = std::min(r10 / eps, 1.0) / 3.0;
  const double p12 = std::min(r12 / eps, 1.0) / 3.0;
  const double p21 = std::min(eps * r21, 1.0) / 3.0;
  return {{{1.0 - p01, p01, 0.0},
           {p10, 1.0 - p10 - p12, p12},
           {0.0, p21, 1.0 - p21}}};
}

}  // namespace

Matrix3 adaptive_kernel(const WeightVector& theta, const Model& model) {
  if (theta.size() != 3)
    throw std::invalid_argument("adaptive_kernel: theta must have 3 entries");
  return kernel_from_ratios(model.epsilon, theta[0] / theta[1],
                            theta[1] / theta[0], theta[1] / theta[2],
                            theta[2] / theta[1]);
}

Matrix3 adaptive_kernel_from_log(const LogWeightVector& lw, const Model& model) {
  if (lw.size() != 3)
    throw std::invalid_argument(
        "adaptive_kernel_from_log: lw must have 3 entries");
  return kernel_from_ratios(model.epsilon, std::exp(lw[0] - lw[1]),
                            std::exp(lw[1] - lw[0]), std::exp(lw[1] - lw[2]),
                            std::exp(lw[2] - lw[1]));
}

double expected_exit_nonadaptive(const Model& model) {
  return 6.0 / model.epsilon + 3.0;
}

ExitSample sample_exit_nonadaptive(const Model& model, Rng& rng,
                                   std::uint64_t step_cap) {
  const Matrix3 kernel = nonadaptive_kernel(model);
  int x = 0;
  for (std::uint64_t n = 1; n <= step_cap; ++n) {
    x = rng.pick3(kernel[static_cast<std::size_t>(x)]);
    if (x == 2) return {n, false};
  }
  return {step_cap, true};
}

ExitSample sample_exit_decomposition(const Model& model, Rng& rng) {
  const std::uint64_t rounds = rng.geometric(0.5);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    total += rng.geometric(model.epsilon / 3.0);  // sojourn in state 0
    total += rng.geometric(2.0 / 3.0);            // sojourn in state 1
  }
  return {total, false};
}

std::uint64_t ExitDecomposition::reconstructed_total() const {
  std::uint64_t t = first_passage_01 + time_in_1;
  for (std::uint64_t s : sojourns_01) t += s;
  return t;
}

namespace {

// One adaptive trajectory driven until `target` is hit, continuing from the
// supplied (x, lw, n) state. Returns the number of steps taken; updates the
// state in place. `decomp` may be null for legs that do not track it.
ExitSample run_until(const Model& model, const StepSchedule& schedule,
                     UpdateRule rule, int target, int& x, LogWeightVector& lw,
                     std::uint64_t& n, std::uint64_t step_cap, Rng& rng,
                     ExitDecomposition* decomp) {
  const double eps = model.epsilon;
  const std::uint64_t start = n;
  bool seen_state1 = false;
  std::uint64_t entered_state0_at = 0;
  bool in_return_sojourn = false;

  while (n < step_cap) {
    const int prev = x;
    std::array<double, 3> row;
    if (x == 0) {
      const double p01 = std::min(eps * std::exp(lw[0] - lw[1]), 1.0) / 3.0;
      row = {1.0 - p01, p01, 0.0};
    } else if (x == 1) {
      const double p10 = std::min(std::exp(lw[1] - lw[0]) / eps, 1.0) / 3.0;
      const double p12 = std::min(std::exp(lw[1] - lw[2]) / eps, 1.0) / 3.0;
      row = {p10, 1.0 - p10 - p12, p12};
    } else {
      const double p21 = std::min(eps * std::exp(lw[2] - lw[1]), 1.0) / 3.0;
      row = {0.0, p21, 1.0 - p21};
    }
    x = rng.pick3(row);
    ++n;
    update_log_weights(lw, x, schedule.gamma(n), rule);

    if (decomp != nullptr) {
      if (x == 1) {
        ++decomp->time_in_1;
        if (!seen_state1) {
          seen_state1 = true;
          decomp->first_passage_01 = n - start;
        } else if (in_return_sojourn) {
          decomp->sojourns_01.push_back(n - entered_state0_at);
          in_return_sojourn = false;
        }
      } else if (x == 0 && prev == 1) {
        ++decomp->returns_10;
        entered_state0_at = n;
        in_return_sojourn = true;
      }
    }
    if (x == target) return {n - start, false};
  }
  return {n - start, true};
}

}  // namespace

AdaptiveExit sample_exit_adaptive(const Model& model,
                                  const StepSchedule& schedule, Rng& rng,
                                  const SimOptions& opts) {
  AdaptiveExit out;
  out.final_log_weights = LogWeightVector(3, 0.0);
  int x = 0;
  std::uint64_t n = 0;
  out.exit = run_until(model, schedule, opts.rule, 2, x, out.final_log_weights,
                       n, opts.step_cap, rng, &out.decomposition);
  return out;
}

std::vector<ExitSample> sample_successive_exits(const Model& model,
                                                const StepSchedule& schedule,
                                                int k, Rng& rng,
                                                const SimOptions& opts) {
  if (k < 1)
    throw std::invalid_argument("sample_successive_exits: k must be >= 1");
  std::vector<ExitSample> durations;
  durations.reserve(static_cast<std::size_t>(k));
  int x = 0;
  LogWeightVector lw(3, 0.0);
  std::uint64_t n = 0;
  int target = 2;
  for (int j = 0; j < k; ++j) {
    const ExitSample leg = run_until(model, schedule, opts.rule, target, x, lw,
                                     n, opts.step_cap, rng, nullptr);
    durations.push_back(leg);
    if (leg.capped) break;
    target = target == 2 ? 0 : 2;
  }
  return durations;
}

ExitSample n2_statistic(const Model& model, const StepSchedule& schedule,
                        Rng& rng, const SimOptions& opts) {
  const AdaptiveExit run = sample_exit_adaptive(model, schedule, rng, opts);
  return {run.decomposition.time_in_1, run.exit.capped};
}

PredictedWindow predicted_window(const Model& model,
                                 const StepSchedule& schedule, double slack) {
  const double a = schedule.alpha;
  const double gs = schedule.gamma_star;
  if (!(a >= 0.5 && a <= 1.0))
    throw std::invalid_argument(
        "predicted_window: no theoretical window for alpha outside [1/2, 1]");
  if (a < 1.0) {
    if (!(gs > 0.0))
      throw std::invalid_argument("predicted_window: gamma_star must be > 0");
    const double inv = 1.0 / (1.0 - a);
    const double scale = std::pow((1.0 - a) / gs, inv) *
                         std::pow(std::abs(std::log(model.epsilon)), inv);
    return {scale / 2.0, 2.0 * scale, scale};
  }
  if (!(slack > 1.0))
    throw std::invalid_argument("predicted_window: slack must exceed 1");
  const double scale = std::pow(model.epsilon, -1.0 / (1.0 + gs));
  return {scale / slack, scale * slack, scale};
}

int GenericModel::propose(int x, Rng& rng) const {
  static constexpr std::array<std::array<double, 3>, 3> q = {
      {{2.0 / 3.0, 1.0 / 3.0, 0.0},
       {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
       {0.0, 1.0 / 3.0, 2.0 / 3.0}}};
  return rng.pick3(q[static_cast<std::size_t>(x)]);
}

double GenericModel::pi_ratio(int from, int to) const {
  if (from == to) return 1.0;
  if (to == 1) return model.epsilon;       // into the transition state
  if (from == 1) return 1.0 / model.epsilon;
  return 1.0;  // 0 <-> 2 is never proposed; ratio would be 1 by symmetry
}

}  // namespace wl::toy

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "wl/chain.hpp"
#include "wl/rng.hpp"
#include "wl/schedule.hpp"
#include "wl/weights.hpp"

// Three-state birth-death chain with a low-probability transition state in
// the middle: target weights (1, eps, 1)/(2+eps), nearest-neighbor proposals,
// exact Metropolis kernels, and first-passage samplers from the left state
// to the right one. States are 0-based: 0 and 2 are the metastable states,
// 1 is the transition state.
namespace wl::toy {

struct Model {
  double epsilon;
  explicit Model(double epsilon_);
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

// (1, eps, 1) / (2 + eps).
WeightVector target_weights(const Model& model);

// Metropolis kernel for uniform penalization weights (the reference,
// non-adaptive dynamics). Rows: [1-e/3, e/3, 0], [1/3, 1/3, 1/3],
// [0, e/3, 1-e/3].
Matrix3 nonadaptive_kernel(const Model& model);

// Metropolis kernel for the target reweighted by theta; nearest-neighbor
// proposals keep the (0,2) and (2,0) entries at zero.
Matrix3 adaptive_kernel(const WeightVector& theta, const Model& model);
Matrix3 adaptive_kernel_from_log(const LogWeightVector& lw, const Model& model);

// E[first passage 0 -> 2] under the non-adaptive kernel: 6/eps + 3.
double expected_exit_nonadaptive(const Model& model);

// Direct simulation of the non-adaptive chain from state 0 until state 2.
ExitSample sample_exit_nonadaptive(const Model& model, Rng& rng,
                                   std::uint64_t step_cap = kDefaultStepCap);

// Equal-in-distribution sampler built from the renewal structure of the
// non-adaptive chain: N ~ Geo(1/2) rounds of Geo(eps/3) + Geo(2/3) sojourns.
ExitSample sample_exit_decomposition(const Model& model, Rng& rng);

// Path statistics of one first-passage trajectory:
// exit_time = first_passage_01 + sum(sojourns_01) + time_in_1.
struct ExitDecomposition {
  std::uint64_t first_passage_01 = 0;        // steps until state 1 first hit
  std::uint64_t returns_10 = 0;              // jumps 1 -> 0 before exit
  std::vector<std::uint64_t> sojourns_01;    // per-return escape times from 0
  std::uint64_t time_in_1 = 0;               // steps spent sitting in state 1
  std::uint64_t reconstructed_total() const;
};

struct SimOptions {
  UpdateRule rule = UpdateRule::kNonlinear;
  std::uint64_t step_cap = kDefaultStepCap;
};

struct AdaptiveExit {
  ExitSample exit;
  LogWeightVector final_log_weights;
  ExitDecomposition decomposition;
};

// Wang-Landau run from state 0 with theta~_0 = (1,1,1) until state 2 is hit.
// Per-step row probabilities come from the closed-form kernel; the weight
// state at the hitting time is returned for the successive-exit analysis.
AdaptiveExit sample_exit_adaptive(const Model& model,
                                  const StepSchedule& schedule, Rng& rng,
                                  const SimOptions& opts = {});

// Continues a single adaptive chain, recording the durations of successive
// crossings 0 -> 2, 2 -> 0, 0 -> 2, ... A capped entry terminates the list.
std::vector<ExitSample> sample_successive_exits(const Model& model,
                                                const StepSchedule& schedule,
                                                int k, Rng& rng,
                                                const SimOptions& opts = {});

// Number of time points spent in the transition state before the first hit
// of state 2 along an adaptive run.
ExitSample n2_statistic(const Model& model, const StepSchedule& schedule,
                        Rng& rng, const SimOptions& opts = {});

// Predicted location of the exit time for eps -> 0:
//   alpha in [1/2, 1): scale = ((1-alpha)/gs)^{1/(1-alpha)} |ln eps|^{1/(1-alpha)},
//                      window (scale/2, 2 scale);
//   alpha = 1:         scale = eps^{-1/(1+gs)}, window (scale/h, scale*h).
struct PredictedWindow {
  double lower;
  double upper;
  double scale;
};

PredictedWindow predicted_window(const Model& model,
                                 const StepSchedule& schedule,
                                 double slack = 10.0);

// Adapter driving the same chain through the generic wl_step machinery
// (proposal + accept/reject instead of closed-form rows). Cross-check path.
struct GenericModel {
  Model model;

  int propose(int x, Rng& rng) const;
  double pi_ratio(int from, int to) const;
  int stratum(int x) const { return x; }
  int stratum_count() const { return 3; }
};

}  // namespace wl::toy

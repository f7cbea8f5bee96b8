#pragma once

#include <concepts>
#include <cstdint>

#include "wl/rng.hpp"
#include "wl/schedule.hpp"
#include "wl/weights.hpp"

namespace wl {

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000'000ULL;

// One first-passage measurement; `capped` marks runs stopped by the step cap
// rather than by the exit event.
struct ExitSample {
  std::uint64_t steps = 0;
  bool capped = false;
};

// The pair (X_n, theta~_n) plus the step counter n. Weights live
// unnormalized in log domain; step_index advances by exactly one per step.
template <typename Position>
struct ChainState {
  Position position{};
  LogWeightVector log_weights;
  std::uint64_t step_index = 0;
};

// Hooks a model must provide to drive the generic stepper. The proposal must
// be symmetric; pi_ratio returns pi(proposal)/pi(current) and may be 0 for
// forbidden moves.
template <typename M, typename Position>
concept SamplerModel = requires(const M m, const Position x, Rng& rng) {
  { m.propose(x, rng) } -> std::convertible_to<Position>;
  { m.pi_ratio(x, x) } -> std::convertible_to<double>;
  { m.stratum(x) } -> std::convertible_to<int>;
  { m.stratum_count() } -> std::convertible_to<int>;
};

// One Wang-Landau step: Metropolis move against the reweighted target, then
// weight update with gamma_{n+1} applied to the stratum of the post-step
// position (also after a rejected move).
template <typename Position, typename M>
  requires SamplerModel<M, Position>
void wl_step(ChainState<Position>& state, const M& model,
             const StepSchedule& schedule, UpdateRule rule, Rng& rng) {
  const Position proposal = model.propose(state.position, rng);
  const double pi_ratio = model.pi_ratio(state.position, proposal);
  if (pi_ratio > 0.0) {
    // Forbidden proposals (pi_ratio = 0) are rejected outright without
    // consuming an acceptance draw or touching the proposal's stratum.
    const int from = model.stratum(state.position);
    const int to = model.stratum(proposal);
    const double acc =
        acceptance_from_log_weights(pi_ratio, state.log_weights, from, to);
    if (rng.uniform01() < acc) state.position = proposal;
  }

  const std::uint64_t n1 = state.step_index + 1;
  update_log_weights(state.log_weights, model.stratum(state.position),
                     schedule.gamma(n1), rule);
  state.step_index = n1;
}

}  // namespace wl

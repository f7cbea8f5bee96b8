#pragma once

#include <cstdint>
#include <vector>

namespace wl {

// theta: strictly positive entries summing to 1 (the set Theta of
// non-degenerate probability vectors on {1..d}).
using WeightVector = std::vector<double>;

// ln of unnormalized penalization weights theta~. Normalization is an
// explicit, separate operation; ratios theta(i)/theta(j) can be read off
// directly as exp(lw[i] - lw[j]).
using LogWeightVector = std::vector<double>;

// Stratum indices are 0-based throughout the library.

enum class UpdateRule { kNonlinear, kLinearized };

double log_sum_exp(const LogWeightVector& lw);

// theta(i) = exp(lw(i) - logsumexp(lw)); safe for arbitrarily shifted input.
WeightVector normalize(const LogWeightVector& lw);

// Multiplicative renormalized update:
// theta'(i) = theta(i) (1 + gamma 1_{i=hit}) / (1 + gamma theta(hit)).
// Valid for any gamma >= 0 (schedules with gamma_star > 1 start above 1).
WeightVector update_nonlinear(const WeightVector& theta, int hit, double gamma);

// Log-domain form of the same update on unnormalized weights:
// lw'(hit) = lw(hit) + ln(1 + gamma), other entries unchanged.
LogWeightVector update_unnormalized(const LogWeightVector& lw, int hit,
                                    double gamma);
void update_unnormalized_inplace(LogWeightVector& lw, int hit, double gamma);

// First-order-in-gamma rule:
// theta'(hit) = theta(hit) + gamma theta(hit)(1 - theta(hit)),
// theta'(k)   = theta(k)   - gamma theta(k) theta(hit)  for k != hit.
// Requires gamma * theta(hit) < 1 to stay inside the simplex.
WeightVector update_linearized(const WeightVector& theta, int hit, double gamma);

// Applies the selected rule to log-domain state. The nonlinear rule is the
// unnormalized increment; the linearized rule normalizes on the fly.
void update_log_weights(LogWeightVector& lw, int hit, double gamma,
                        UpdateRule rule);

// Metropolis ratio for the reweighted target with a symmetric proposal:
// min(1, pi_ratio * theta(from) / theta(to)), pi_ratio = pi(proposal)/pi(x).
double acceptance_ratio(double pi_ratio, const WeightVector& theta, int from,
                        int to);

// Same quantity computed from log weights without normalizing.
double acceptance_from_log_weights(double pi_ratio, const LogWeightVector& lw,
                                   int from, int to);

bool is_valid_weight_vector(const WeightVector& theta, double tol = 1e-12);

}  // namespace wl

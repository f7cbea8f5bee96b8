#pragma once

#include <cstdint>

namespace wl {

// Deterministic step-size sequence gamma_n = gamma_star * n^{-alpha}.
//
// alpha in (0, 1]. Values alpha <= 1/2 are accepted (they are the fast
// escape regimes of the experiments) but lie outside the usual
// square-summability requirement of stochastic approximation; outside_a3()
// reports that so drivers can tag such runs.
struct StepSchedule {
  double gamma_star = 0.0;
  double alpha = 1.0;

  StepSchedule() = default;
  StepSchedule(double gamma_star_, double alpha_);

  // gamma_n for n >= 1. n = 0 is rejected.
  double gamma(std::uint64_t n) const;

  bool adaptive() const { return gamma_star > 0.0; }
  bool outside_a3() const { return gamma_star > 0.0 && alpha <= 0.5; }
};

// ln Xi_n with Xi_n = prod_{k=1..n} (1 + gamma_k) and Xi_0 = 1. Compensated
// summation keeps the relative error at the 1e-15 level even for n = 1e6.
double log_xi(const StepSchedule& schedule, std::uint64_t n);

// Incremental form of log_xi for sweeps over n.
class LogXiAccumulator {
 public:
  explicit LogXiAccumulator(const StepSchedule& schedule)
      : schedule_(schedule) {}

  // Advances from n to n+1 and returns ln Xi_{n+1}.
  double advance();
  double value() const { return sum_; }
  std::uint64_t index() const { return n_; }

 private:
  StepSchedule schedule_;
  std::uint64_t n_ = 0;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// Envelope on ln Xi_n.
//
// For alpha in (0, 1) the bounds are
//   upper = gamma_star/(1-alpha) * n^{1-alpha}
//   lower = upper + ln C             (alpha in (1/2, 1))
//   lower = 2 gs sqrt(n) - gs^2/2 ln n + ln C   (alpha = 1/2)
// with the explicit constants
//   ln C = -gs/(1-alpha) - gs^2 alpha/(2 alpha - 1)   (alpha in (1/2, 1))
//   ln C = -2 gs - gs^2/2                             (alpha = 1/2)
// recomputed from the chain of integral comparisons behind the bound. For
// alpha < 1/2 only the upper bound is sharp; lower is set to -inf there.
// For alpha = 1 there is no two-sided envelope: both fields carry the
// asymptote ln(n^{gs} / Gamma(1+gs)) and `asymptote` is set.
struct XiBounds {
  double lower;
  double upper;
  bool asymptote;
};

XiBounds xi_bounds(const StepSchedule& schedule, std::uint64_t n);

// Exact ln Xi_n for alpha = 1 via the Gamma-function product formula,
// ln Gamma(n+1+gs) - ln Gamma(1+gs) - ln Gamma(n+1). Test oracle.
double log_xi_exact_alpha1(double gamma_star, std::uint64_t n);

}  // namespace wl

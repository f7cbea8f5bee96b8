#include "wl/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wl {

StepSchedule::StepSchedule(double gamma_star_, double alpha_)
    : gamma_star(gamma_star_), alpha(alpha_) {
  if (!(gamma_star >= 0.0) || !std::isfinite(gamma_star))
    throw std::invalid_argument("StepSchedule: gamma_star must be >= 0, got " +
                                std::to_string(gamma_star_));
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("StepSchedule: alpha must lie in (0, 1], got " +
                                std::to_string(alpha_));
}

double StepSchedule::gamma(std::uint64_t n) const {
  if (n == 0) throw std::invalid_argument("StepSchedule::gamma: n must be >= 1");
  if (gamma_star == 0.0) return 0.0;
  if (alpha == 1.0) return gamma_star / static_cast<double>(n);
  return gamma_star * std::pow(static_cast<double>(n), -alpha);
}

double LogXiAccumulator::advance() {
  ++n_;
  // Kahan step
  const double term = std::log1p(schedule_.gamma(n_)) - carry_;
  const double next = sum_ + term;
  carry_ = (next - sum_) - term;
  sum_ = next;
  return sum_;
}

double log_xi(const StepSchedule& schedule, std::uint64_t n) {
  LogXiAccumulator acc(schedule);
  for (std::uint64_t k = 0; k < n; ++k) acc.advance();
  return acc.value();
}

double log_xi_exact_alpha1(double gamma_star, std::uint64_t n) {
  const double nn = static_cast<double>(n);
  return std::lgamma(nn + 1.0 + gamma_star) - std::lgamma(1.0 + gamma_star) -
         std::lgamma(nn + 1.0);
}

XiBounds xi_bounds(const StepSchedule& schedule, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("xi_bounds: n must be >= 1");
  const double gs = schedule.gamma_star;
  const double a = schedule.alpha;
  const double nn = static_cast<double>(n);

  if (a == 1.0) {
    const double ref = gs * std::log(nn) - std::lgamma(1.0 + gs);
    return {ref, ref, true};
  }

  const double upper = gs / (1.0 - a) * std::pow(nn, 1.0 - a);
  double lower;
  if (a == 0.5) {
    const double log_c = -2.0 * gs - 0.5 * gs * gs;
    lower = 2.0 * gs * std::sqrt(nn) - 0.5 * gs * gs * std::log(nn) + log_c;
  } else if (a > 0.5) {
    const double log_c = -gs / (1.0 - a) - gs * gs * a / (2.0 * a - 1.0);
    lower = upper + log_c;
  } else {
    lower = -std::numeric_limits<double>::infinity();
  }
  return {lower, upper, false};
}

}  // namespace wl

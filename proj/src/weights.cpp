#include "wl/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wl {

namespace {

void check_hit(std::size_t d, int hit) {
  if (hit < 0 || static_cast<std::size_t>(hit) >= d)
    throw std::invalid_argument("stratum index out of range");
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("gamma must be finite and >= 0");
}

}  // namespace

double log_sum_exp(const LogWeightVector& lw) {
  if (lw.empty()) throw std::invalid_argument("log_sum_exp: empty vector");
  const double m = *std::max_element(lw.begin(), lw.end());
  double s = 0.0;
  for (double v : lw) s += std::exp(v - m);
  return m + std::log(s);
}

WeightVector normalize(const LogWeightVector& lw) {
  const double lse = log_sum_exp(lw);
  WeightVector theta(lw.size());
  for (std::size_t i = 0; i < lw.size(); ++i) theta[i] = std::exp(lw[i] - lse);
  return theta;
}

WeightVector update_nonlinear(const WeightVector& theta, int hit, double gamma) {
  check_hit(theta.size(), hit);
  check_gamma(gamma);
  const double denom = 1.0 + gamma * theta[static_cast<std::size_t>(hit)];
  WeightVector out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = theta[i] / denom;
  out[static_cast<std::size_t>(hit)] *= 1.0 + gamma;
  return out;
}

void update_unnormalized_inplace(LogWeightVector& lw, int hit, double gamma) {
  check_hit(lw.size(), hit);
  check_gamma(gamma);
  lw[static_cast<std::size_t>(hit)] += std::log1p(gamma);
}

LogWeightVector update_unnormalized(const LogWeightVector& lw, int hit,
                                    double gamma) {
  LogWeightVector out(lw);
  update_unnormalized_inplace(out, hit, gamma);
  return out;
}

WeightVector update_linearized(const WeightVector& theta, int hit, double gamma) {
  check_hit(theta.size(), hit);
  check_gamma(gamma);
  const double th = theta[static_cast<std::size_t>(hit)];
  if (gamma * th >= 1.0)
    throw std::invalid_argument(
        "update_linearized: gamma * theta(hit) >= 1 leaves the simplex");
  WeightVector out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    out[i] = theta[i] - gamma * theta[i] * th;
  out[static_cast<std::size_t>(hit)] = th + gamma * th * (1.0 - th);
  return out;
}

void update_log_weights(LogWeightVector& lw, int hit, double gamma,
                        UpdateRule rule) {
  if (gamma == 0.0) return;
  if (rule == UpdateRule::kNonlinear) {
    update_unnormalized_inplace(lw, hit, gamma);
    return;
  }
  check_hit(lw.size(), hit);
  check_gamma(gamma);
  const double th = std::exp(lw[static_cast<std::size_t>(hit)] - log_sum_exp(lw));
  if (gamma * th >= 1.0)
    throw std::invalid_argument(
        "update_log_weights: gamma * theta(hit) >= 1 leaves the simplex");
  const double shrink = std::log1p(-gamma * th);
  for (double& v : lw) v += shrink;
  lw[static_cast<std::size_t>(hit)] +=
      std::log1p(gamma * (1.0 - th)) - std::log1p(-gamma * th);
}

double acceptance_ratio(double pi_ratio, const WeightVector& theta, int from,
                        int to) {
  check_hit(theta.size(), from);
  check_hit(theta.size(), to);
  if (!(pi_ratio >= 0.0))
    throw std::invalid_argument("acceptance_ratio: pi_ratio must be >= 0");
  const double r = pi_ratio * theta[static_cast<std::size_t>(from)] /
                   theta[static_cast<std::size_t>(to)];
  return std::min(1.0, r);
}

double acceptance_from_log_weights(double pi_ratio, const LogWeightVector& lw,
                                   int from, int to) {
  check_hit(lw.size(), from);
  check_hit(lw.size(), to);
  if (!(pi_ratio >= 0.0))
    throw std::invalid_argument(
        "acceptance_from_log_weights: pi_ratio must be >= 0");
  const double r = pi_ratio * std::exp(lw[static_cast<std::size_t>(from)] -
                                       lw[static_cast<std::size_t>(to)]);
  return std::min(1.0, r);
}

bool is_valid_weight_vector(const WeightVector& theta, double tol) {
  if (theta.empty()) return false;
  double sum = 0.0;
  for (double v : theta) {
    if (!(v > 0.0) || !(v < 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

}  // namespace wl

#include "wl/landscape2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wl::land {

Landscape::Landscape(double beta_, double half_width_, int n_strata_,
                     double proposal_sd_)
    : beta(beta_),
      half_width(half_width_),
      n_strata(n_strata_),
      proposal_sd(proposal_sd_) {
  if (!(beta > 0.0)) throw std::invalid_argument("Landscape: beta must be > 0");
  if (!(half_width > 0.0))
    throw std::invalid_argument("Landscape: R must be > 0");
  if (n_strata < 2) throw std::invalid_argument("Landscape: d must be >= 2");
  if (!(proposal_sd > 0.0))
    throw std::invalid_argument("Landscape: upsilon must be > 0");
}

double potential(double x1, double x2) {
  const double a = x2 - 1.0 / 3.0;
  const double b = x2 - 5.0 / 3.0;
  const double l = x1 + 1.0;
  const double r = x1 - 1.0;
  // the two wells are summed as a pair so that U(x1,.) == U(-x1,.) exactly
  const double wells =
      std::exp(-r * r - x2 * x2) + std::exp(-l * l - x2 * x2);
  return 3.0 * std::exp(-x1 * x1 - a * a) - 3.0 * std::exp(-x1 * x1 - b * b) -
         5.0 * wells + 0.2 * x1 * x1 * x1 * x1 + 0.2 * a * a * a * a;
}

int stratum_index(double x1, const Landscape& landscape) {
  const double R = landscape.half_width;
  if (!(std::abs(x1) <= R))
    throw std::invalid_argument("stratum_index: |x1| > R, x1 = " +
                                std::to_string(x1));
  if (x1 >= R) return landscape.n_strata - 1;  // closed last bin
  const int idx = static_cast<int>((x1 + R) / landscape.bin_width());
  return std::clamp(idx, 0, landscape.n_strata - 1);
}

Walker make_walker(const Landscape& landscape, Position start) {
  Walker w;
  w.pos = start;
  w.potential_value = potential(start);
  w.log_weights.assign(static_cast<std::size_t>(landscape.n_strata), 0.0);
  w.step_index = 0;
  return w;
}

void wl2d_step(Walker& walker, const Landscape& landscape,
               const StepSchedule& schedule, UpdateRule rule, Rng& rng) {
  double z1, z2;
  rng.normal_pair(z1, z2);
  const double y1 = walker.pos.x1 + landscape.proposal_sd * z1;
  const double y2 = walker.pos.x2 + landscape.proposal_sd * z2;

  if (std::abs(y1) <= landscape.half_width) {
    const double uy = potential(y1, y2);
    const double pi_ratio =
        std::exp(-landscape.beta * (uy - walker.potential_value));
    if (pi_ratio > 0.0) {
      const int from = stratum_index(walker.pos.x1, landscape);
      const int to = stratum_index(y1, landscape);
      const double acc =
          acceptance_from_log_weights(pi_ratio, walker.log_weights, from, to);
      if (rng.uniform01() < acc) {
        walker.pos = {y1, y2};
        walker.potential_value = uy;
      }
    }
  }
  const std::uint64_t n1 = walker.step_index + 1;
  update_log_weights(walker.log_weights,
                     stratum_index(walker.pos.x1, landscape),
                     schedule.gamma(n1), rule);
  walker.step_index = n1;
}

ExitSample run_exit(const Landscape& landscape, const StepSchedule& schedule,
                    UpdateRule rule, Rng& rng, std::uint64_t step_cap) {
  Walker w = make_walker(landscape, {-1.0, 0.0});
  while (w.step_index < step_cap) {
    wl2d_step(w, landscape, schedule, rule, rng);
    if (w.pos.x1 > 1.0) return {w.step_index, false};
  }
  return {step_cap, true};
}

std::vector<ExitSample> run_successive_exits(const Landscape& landscape,
                                             const StepSchedule& schedule,
                                             UpdateRule rule, int k, Rng& rng,
                                             std::uint64_t step_cap) {
  if (k < 1)
    throw std::invalid_argument("run_successive_exits: k must be >= 1");
  std::vector<ExitSample> durations;
  durations.reserve(static_cast<std::size_t>(k));
  Walker w = make_walker(landscape, {-1.0, 0.0});
  double threshold = 1.0;  // cross x1 > +1 first, then x1 < -1, alternating
  std::uint64_t leg_start = 0;
  while (static_cast<int>(durations.size()) < k) {
    if (w.step_index >= step_cap) {
      durations.push_back({w.step_index - leg_start, true});
      break;
    }
    wl2d_step(w, landscape, schedule, rule, rng);
    const bool crossed =
        threshold > 0.0 ? w.pos.x1 > threshold : w.pos.x1 < threshold;
    if (crossed) {
      durations.push_back({w.step_index - leg_start, false});
      leg_start = w.step_index;
      threshold = -threshold;
    }
  }
  return durations;
}

namespace {

double lse_accumulate(double acc, double term) {
  if (acc == -std::numeric_limits<double>::infinity()) return term;
  if (term <= acc) return acc + std::log1p(std::exp(term - acc));
  return term + std::log1p(std::exp(acc - term));
}

// ln of the Simpson approximation of the stratum integral of e^{-beta U}.
double log_stratum_integral(const Landscape& landscape, int stratum, int nx1,
                            int nx2, double x2_lo, double x2_hi) {
  const double a = landscape.edge(stratum);
  const double h1 = landscape.bin_width() / nx1;
  const double h2 = (x2_hi - x2_lo) / nx2;
  double acc = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nx1; ++i) {
    const double w1 = (i == 0 || i == nx1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const double x1 = a + h1 * i;
    for (int j = 0; j <= nx2; ++j) {
      const double w2 = (j == 0 || j == nx2) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      const double x2 = x2_lo + h2 * j;
      const double term =
          std::log(w1 * w2) - landscape.beta * potential(x1, x2);
      acc = lse_accumulate(acc, term);
    }
  }
  return acc + std::log(h1 * h2 / 9.0);
}

WeightVector quadrature_weights(const Landscape& landscape, int nx1, int nx2,
                                double x2_lo, double x2_hi) {
  LogWeightVector logs(static_cast<std::size_t>(landscape.n_strata));
  for (int l = 0; l < landscape.n_strata; ++l)
    logs[static_cast<std::size_t>(l)] =
        log_stratum_integral(landscape, l, nx1, nx2, x2_lo, x2_hi);
  return normalize(logs);
}

}  // namespace

QuadratureResult theta_star_quadrature(const Landscape& landscape,
                                       const QuadratureOptions& opts) {
  if (!(opts.x2_hi > opts.x2_lo))
    throw std::invalid_argument("theta_star_quadrature: empty x2 window");
  if (opts.x1_subdivisions < 2 || opts.x2_subdivisions_per_unit < 2)
    throw std::invalid_argument("theta_star_quadrature: resolution too low");

  auto even = [](int n) { return n % 2 == 0 ? n : n + 1; };
  int nx1 = even(opts.x1_subdivisions);
  int nx2 = even(static_cast<int>(
      std::ceil((opts.x2_hi - opts.x2_lo) * opts.x2_subdivisions_per_unit)));

  // Refine until two successive grids agree; the configured resolution is
  // the starting point.
  WeightVector current =
      quadrature_weights(landscape, nx1, nx2, opts.x2_lo, opts.x2_hi);
  double delta = std::numeric_limits<double>::infinity();
  for (int round = 0; round < opts.max_refinements; ++round) {
    nx1 *= 2;
    nx2 *= 2;
    const WeightVector next =
        quadrature_weights(landscape, nx1, nx2, opts.x2_lo, opts.x2_hi);
    delta = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      delta = std::max(delta, std::abs(next[i] - current[i]) / next[i]);
    current = next;
    if (delta <= opts.tolerance) return {current, delta};
  }
  throw std::runtime_error(
      "theta_star_quadrature: refinement still changed weights by " +
      std::to_string(delta) + " (> tolerance " +
      std::to_string(opts.tolerance) + ") after " +
      std::to_string(opts.max_refinements) + " doublings");
}

Position GenericModel::propose(const Position& x, Rng& rng) const {
  double z1, z2;
  rng.normal_pair(z1, z2);
  return {x.x1 + landscape.proposal_sd * z1, x.x2 + landscape.proposal_sd * z2};
}

double GenericModel::pi_ratio(const Position& from, const Position& to) const {
  if (std::abs(to.x1) > landscape.half_width) return 0.0;
  return std::exp(-landscape.beta * (potential(to) - potential(from)));
}

}  // namespace wl::land

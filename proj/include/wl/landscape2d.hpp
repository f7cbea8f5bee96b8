#pragma once

#include <cstdint>
#include <vector>

#include "wl/chain.hpp"
#include "wl/rng.hpp"
#include "wl/schedule.hpp"
#include "wl/weights.hpp"

// Double-well landscape on [-R, R] x IR: target density proportional to
// 1_{[-R,R]}(x1) exp(-beta U), strata = vertical slabs of width 2R/d, and a
// Gaussian-proposal Metropolis chain with Wang-Landau reweighting.
namespace wl::land {

struct Landscape {
  double beta;
  double half_width;   // R
  int n_strata;        // d
  double proposal_sd;  // upsilon

  Landscape(double beta_, double half_width_, int n_strata_,
            double proposal_sd_);

  double bin_width() const { return 2.0 * half_width / n_strata; }
  // a_l for l = 0..d (stratum l covers [edge(l), edge(l+1)))
  double edge(int l) const { return -half_width + bin_width() * l; }
};

struct Position {
  double x1 = 0.0;
  double x2 = 0.0;
};

// Two Gaussian wells at (+-1, 0), a Gaussian bump/dip pair along x1 = 0 and
// quartic confinement.
double potential(double x1, double x2);
inline double potential(const Position& p) { return potential(p.x1, p.x2); }

// Half-open slabs, last one closed at +R. Throws for |x1| > R.
int stratum_index(double x1, const Landscape& landscape);

// Walker state with the current potential value cached.
struct Walker {
  Position pos;
  double potential_value = 0.0;
  LogWeightVector log_weights;
  std::uint64_t step_index = 0;
};

Walker make_walker(const Landscape& landscape, Position start);

// One step: isotropic Gaussian proposal; proposals leaving |x1| <= R are
// rejected outright (pi = 0 outside); otherwise Metropolis acceptance
// min(1, e^{-beta dU} theta(I(x))/theta(I(y))); the weight update applies to
// the stratum of the post-step position.
void wl2d_step(Walker& walker, const Landscape& landscape,
               const StepSchedule& schedule, UpdateRule rule, Rng& rng);

// From x_- = (-1, 0) with uniform weights until the first index n with
// X_{n,1} > 1.
ExitSample run_exit(const Landscape& landscape, const StepSchedule& schedule,
                    UpdateRule rule, Rng& rng,
                    std::uint64_t step_cap = kDefaultStepCap);

// Continues one chain through k alternating crossings of x1 > 1 / x1 < -1;
// a capped entry terminates the list.
std::vector<ExitSample> run_successive_exits(
    const Landscape& landscape, const StepSchedule& schedule, UpdateRule rule,
    int k, Rng& rng, std::uint64_t step_cap = kDefaultStepCap);

struct QuadratureOptions {
  double x2_lo = -3.0;
  double x2_hi = 3.5;
  // Simpson subintervals per stratum in x1 and per unit length in x2.
  int x1_subdivisions = 32;
  int x2_subdivisions_per_unit = 128;
  double tolerance = 1e-6;  // refinement agreement, relative
  int max_refinements = 4;  // doublings tried before giving up
};

struct QuadratureResult {
  WeightVector weights;
  double refinement_delta = 0.0;  // max relative change under doubling
};

// Per-stratum weights of exp(-beta U), normalized, by composite Simpson
// quadrature in log domain (robust for large beta). The grid is doubled
// until two successive refinements agree within the tolerance; throws if
// that never happens within max_refinements doublings.
QuadratureResult theta_star_quadrature(const Landscape& landscape,
                                       const QuadratureOptions& opts = {});

// Adapter for the generic wl_step machinery; cross-check path against the
// specialized stepper.
struct GenericModel {
  Landscape landscape;

  Position propose(const Position& x, Rng& rng) const;
  double pi_ratio(const Position& from, const Position& to) const;
  int stratum(const Position& x) const {
    return stratum_index(x.x1, landscape);
  }
  int stratum_count() const { return landscape.n_strata; }
};

}  // namespace wl::land

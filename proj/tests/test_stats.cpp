#include <cmath>
#include <vector>

#include "doctest.h"
#include "wl/rng.hpp"
#include "wl/stats.hpp"

namespace st = wl::stats;

TEST_CASE("summary of a known sample") {
  std::vector<wl::ExitSample> samples;
  for (std::uint64_t v = 1; v <= 10; ++v) samples.push_back({v, false});
  samples.push_back({1000, true});  // capped, excluded from moments

  const st::Summary s = st::summarize(samples);
  CHECK(s.m_effective == 10);
  CHECK(s.capped_count == 1);
  CHECK(s.mean == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(s.median == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(s.q10 == doctest::Approx(1.9).epsilon(1e-15));
  CHECK(s.q90 == doctest::Approx(9.1).epsilon(1e-15));
  CHECK(s.stderr_of_mean ==
        doctest::Approx(std::sqrt(82.5 / 9.0 / 10.0)).epsilon(1e-12));
}

TEST_CASE("ks distance to Exp(1)") {
  // exact quantiles at (i - 1/2)/n leave a comb of width 1/(2n)
  const int n = 200;
  std::vector<double> q;
  for (int i = 1; i <= n; ++i)
    q.push_back(-std::log(1.0 - (i - 0.5) / n));
  CHECK(st::ks_to_exp1(q) <= 0.5 / n + 1e-12);

  // a point mass at the exponential median sits 1/2 away
  std::vector<double> c(50, std::log(2.0));
  CHECK(st::ks_to_exp1(c) >= 0.5 - 1e-12);
}

TEST_CASE("incomplete gamma and chi-square tails") {
  // chi2(2) is Exp(1/2), so the tail is exactly exp(-x/2)
  CHECK(st::chi2_sf(2.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(st::chi2_sf(7.0, 2.0) == doctest::Approx(std::exp(-3.5)).epsilon(1e-12));
  // classical 5% critical values
  CHECK(st::chi2_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(st::chi2_sf(18.307038053275146, 10.0) ==
        doctest::Approx(0.05).epsilon(1e-9));
  CHECK(st::chi2_sf(0.0, 3.0) == 1.0);
  for (double a : {0.5, 1.0, 3.7}) {
    for (double x : {0.1, 1.0, 5.0, 40.0}) {
      CHECK(st::gamma_p(a, x) + st::gamma_q(a, x) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-sample chi-square separates equal from shifted distributions") {
  wl::Rng rng(99);
  std::vector<std::uint64_t> a, b, c;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(rng.geometric(0.2));
    b.push_back(rng.geometric(0.2));
    c.push_back(rng.geometric(0.3));
  }
  CHECK(st::chi2_two_sample(a, b).p_value > 0.01);
  CHECK(st::chi2_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("goodness of fit against exact probabilities") {
  wl::Rng rng(123);
  std::vector<std::uint64_t> counts(3, 0);
  const std::array<double, 3> row{0.5, 0.3, 0.2};
  for (int i = 0; i < 30000; ++i)
    ++counts[static_cast<std::size_t>(rng.pick3(row))];
  const st::Chi2Result r =
      st::chi2_goodness_of_fit(counts, {row[0], row[1], row[2]});
  CHECK(r.dof == 2);
  CHECK(r.p_value > 1e-4);
}

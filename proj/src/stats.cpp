#include "wl/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wl::stats {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0))
    throw std::invalid_argument("quantile: q must lie in [0, 1]");
  if (sorted.size() == 1) return sorted[0];
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

Summary summarize(const std::vector<ExitSample>& samples) {
  Summary out;
  std::vector<double> vals;
  vals.reserve(samples.size());
  for (const ExitSample& s : samples) {
    if (s.capped)
      ++out.capped_count;
    else
      vals.push_back(static_cast<double>(s.steps));
  }
  out.m_effective = vals.size();
  if (vals.empty()) return out;
  out.mean = mean(vals);
  const double sd = sample_stddev(vals);
  out.stderr_of_mean = sd / std::sqrt(static_cast<double>(vals.size()));
  std::sort(vals.begin(), vals.end());
  out.median = quantile_sorted(vals, 0.5);
  out.q10 = quantile_sorted(vals, 0.1);
  out.q90 = quantile_sorted(vals, 0.9);
  return out;
}

double ks_to_exp1(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("ks_to_exp1: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = 1.0 - std::exp(-samples[i]);
    const double hi = static_cast<double>(i + 1) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

namespace {

// Series expansion of P(a,x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0)
    throw std::invalid_argument("gamma_q: need a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  return x < a + 1.0 ? 1.0 - gamma_p_series(a, x) : gamma_q_cf(a, x);
}

double chi2_sf(double x, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi2_sf: dof must be > 0");
  if (x <= 0.0) return 1.0;
  return gamma_q(0.5 * dof, 0.5 * x);
}

Chi2Result chi2_two_sample(const std::vector<std::uint64_t>& a,
                           const std::vector<std::uint64_t>& b,
                           int target_bins) {
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("chi2_two_sample: samples too small");
  std::vector<std::uint64_t> pool(a);
  pool.insert(pool.end(), b.begin(), b.end());
  std::sort(pool.begin(), pool.end());

  // Right-open bin edges at combined quantiles; duplicates collapse.
  std::vector<std::uint64_t> edges;
  for (int k = 1; k < target_bins; ++k) {
    const std::size_t idx = pool.size() * static_cast<std::size_t>(k) /
                            static_cast<std::size_t>(target_bins);
    const std::uint64_t e = pool[idx];
    if (edges.empty() || e > edges.back()) edges.push_back(e);
  }
  const std::size_t nbins = edges.size() + 1;
  if (nbins < 2)
    throw std::invalid_argument("chi2_two_sample: degenerate samples");

  auto bin_of = [&edges](std::uint64_t v) {
    return static_cast<std::size_t>(
        std::upper_bound(edges.begin(), edges.end(), v) - edges.begin());
  };
  std::vector<double> ca(nbins, 0.0), cb(nbins, 0.0);
  for (std::uint64_t v : a) ca[bin_of(v)] += 1.0;
  for (std::uint64_t v : b) cb[bin_of(v)] += 1.0;

  const double ra = std::sqrt(static_cast<double>(b.size()) /
                              static_cast<double>(a.size()));
  const double rb = 1.0 / ra;
  double stat = 0.0;
  int dof = -1;  // constraint: totals fixed
  for (std::size_t i = 0; i < nbins; ++i) {
    const double tot = ca[i] + cb[i];
    if (tot == 0.0) continue;
    const double diff = ra * ca[i] - rb * cb[i];
    stat += diff * diff / tot;
    ++dof;
  }
  if (dof < 1) throw std::invalid_argument("chi2_two_sample: < 2 usable bins");
  return {stat, dof, chi2_sf(stat, static_cast<double>(dof))};
}

Chi2Result chi2_goodness_of_fit(const std::vector<std::uint64_t>& counts,
                                const std::vector<double>& probs) {
  if (counts.size() != probs.size() || counts.size() < 2)
    throw std::invalid_argument("chi2_goodness_of_fit: bad inputs");
  double n = 0.0;
  for (std::uint64_t c : counts) n += static_cast<double>(c);
  double stat = 0.0;
  int dof = -1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double expct = n * probs[i];
    if (expct <= 0.0) {
      if (counts[i] != 0)
        return {std::numeric_limits<double>::infinity(),
                static_cast<int>(counts.size()) - 1, 0.0};
      continue;
    }
    const double diff = static_cast<double>(counts[i]) - expct;
    stat += diff * diff / expct;
    ++dof;
  }
  if (dof < 1)
    throw std::invalid_argument("chi2_goodness_of_fit: < 2 usable bins");
  return {stat, dof, chi2_sf(stat, static_cast<double>(dof))};
}

}  // namespace wl::stats

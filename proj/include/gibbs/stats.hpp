#ifndef GIBBS_STATS_HPP
#define GIBBS_STATS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/tools/roots.hpp>

#include "gibbs/errors.hpp"

namespace gibbs {

// Asymptotic Kolmogorov distribution P(sup|B^0| <= x).
inline double kolmogorov_cdf(double x) {
  if (x <= 0.2) return 0.0;
  double s = 0;
  for (int k = 1; k <= 100; ++k) {
    double t = std::exp(-2.0 * k * k * x * x);
    s += (k % 2 ? t : -t);
    if (t < 1e-18) break;
  }
  return 1 - 2 * s;
}

// x with kolmogorov_cdf(x) = 1 - level; 1.94947 at level 0.001.
inline double kolmogorov_critical(double level) {
  require(level > 0 && level < 1, "kolmogorov_critical: level must lie in (0,1)");
  auto f = [&](double x) { return kolmogorov_cdf(x) - (1 - level); };
  boost::math::tools::eps_tolerance<double> tol(50);
  auto r = boost::math::tools::bisect(f, 0.3, 5.0, tol);
  return 0.5 * (r.first + r.second);
}

inline double ks_threshold_one(std::size_t n, double level = 1e-3) {
  return kolmogorov_critical(level) / std::sqrt(static_cast<double>(n));
}

inline double ks_threshold_two(std::size_t n, std::size_t m, double level = 1e-3) {
  double a = static_cast<double>(n), b = static_cast<double>(m);
  return kolmogorov_critical(level) * std::sqrt((a + b) / (a * b));
}

// sup_x |F_n(x) - F(x)|
inline double ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  require(!x.empty(), "ks_one_sample: empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  require(!x.empty() && !y.empty(), "ks_two_sample: empty sample");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() && j < y.size()) {
    double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::fabs(i / n - j / m));
  }
  return d;
}

struct ChiSquareResult {
  double statistic = 0;
  double threshold = 0;
  int df = 0;
  int bins = 0;
};

// Pearson test of counts against cell probabilities. Neighbouring cells are merged (left to
// right, leftover folded into the last group) until every expected count is at least min_expected.
inline ChiSquareResult chi_square_test(const std::vector<double>& counts, const std::vector<double>& probs,
                                       double level = 1e-3, double min_expected = 5.0) {
  require(counts.size() == probs.size() && !counts.empty(), "chi_square_test: counts and probs differ in length");
  double total = 0, ptot = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    require(probs[i] >= 0 && counts[i] >= 0, "chi_square_test: negative count or probability");
    total += counts[i];
    ptot += probs[i];
  }
  require(total > 0 && ptot > 0, "chi_square_test: empty table");
  std::vector<double> oc, ec;
  double o = 0, e = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    o += counts[i];
    e += total * probs[i] / ptot;
    if (e >= min_expected) {
      oc.push_back(o);
      ec.push_back(e);
      o = e = 0;
    }
  }
  if (e > 0 || o > 0) {
    if (ec.empty()) {
      oc.push_back(o);
      ec.push_back(e);
    } else {
      oc.back() += o;
      ec.back() += e;
    }
  }
  ChiSquareResult r;
  r.bins = static_cast<int>(oc.size());
  r.df = std::max(1, r.bins - 1);
  for (std::size_t i = 0; i < oc.size(); ++i) r.statistic += (oc[i] - ec[i]) * (oc[i] - ec[i]) / ec[i];
  r.threshold = boost::math::quantile(boost::math::chi_squared(r.df), 1 - level);
  return r;
}

// two-sided normal critical value; 3.2905 at level 0.001
inline double z_critical(double level = 1e-3) {
  require(level > 0 && level < 1, "z_critical: level must lie in (0,1)");
  return boost::math::quantile(boost::math::normal(), 1 - level / 2);
}

// Running mean and variance (Welford).
class RunningMoments {
 public:
  void add(double x) {
    ++n_;
    double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const { return std::sqrt(variance() / static_cast<double>(n_)); }
  // (mean - target) / standard error
  double z(double target) const {
    double se = std_error();
    require(se > 0, "RunningMoments: zero standard error");
    return (mean_ - target) / se;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0, m2_ = 0;
};

}  // namespace gibbs

#endif

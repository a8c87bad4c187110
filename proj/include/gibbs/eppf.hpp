#ifndef GIBBS_EPPF_HPP
#define GIBBS_EPPF_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <quadmath.h>

#include "gibbs/errors.hpp"
#include "gibbs/partition.hpp"
#include "gibbs/specfun.hpp"
#include "gibbs/stabledist.hpp"

namespace gibbs {

namespace detail {

constexpr double ninf = -std::numeric_limits<double>::infinity();

inline void check_pd(double alpha, double theta, const char* what) {
  require(alpha >= 0 && alpha < 1, std::string(what) + ": alpha must lie in [0,1)");
  if (alpha == 0)
    require(theta > 0, std::string(what) + ": theta must be > 0 when alpha = 0");
  else
    require(theta > -alpha, std::string(what) + ": theta must exceed -alpha");
}

// log S_alpha(n,k) for k = 0..n (entry 0 is -inf); alpha = 0 gives unsigned Stirling numbers of the first kind.
inline std::vector<double> log_stirling_row(double alpha, int n) {
  std::vector<double> row(n + 1, ninf), next(n + 1, ninf);
  row[1] = 0.0;
  for (int m = 1; m < n; ++m) {
    std::fill(next.begin(), next.end(), ninf);
    for (int k = 1; k <= m + 1; ++k) {
      double a = row[k - 1];
      double b = k <= m ? std::log(m - k * alpha) + row[k] : ninf;
      next[k] = log_add_exp(a, b);
    }
    std::swap(row, next);
  }
  return row;
}

// sum_j log (1 - alpha)_{n_j - 1}
inline double log_pd_product(double alpha, const BlockSizes& b) {
  double s = 0;
  for (int m : b.sizes) s += log_rising(1.0 - alpha, m - 1);
  return s;
}

// log of p_alpha,theta / p_alpha,0 as a function of (n,k); exactly 0 at theta = 0.
inline double log_d_factor(double alpha, double theta, int n, int k) {
  if (theta == 0) return 0.0;
  return lgam(static_cast<double>(n)) + lgam(theta + 1) + lgam(theta / alpha + k) - lgam(static_cast<double>(k)) -
         lgam(theta + n) - lgam(theta / alpha + 1);
}

// log V_{n,k} of PD(alpha, theta).
inline double log_v_pd(double alpha, double theta, int n, int k) {
  if (alpha == 0) return k * std::log(theta) + lgam(theta) - lgam(theta + n);
  return log_d_factor(alpha, theta, n, k) + (k - 1) * std::log(alpha) + lgam(static_cast<double>(k)) -
         lgam(static_cast<double>(n));
}

inline BlockCountPmf pmf_from_logs(int n, const std::vector<double>& lp) {
  BlockCountPmf out(n);
  for (int k = 1; k <= n; ++k) out.p[k] = std::exp(lp[k]);
  return out;
}

}  // namespace detail

// log p_{alpha,theta}(n_1,...,n_k); alpha = 0 is the Ewens case.
inline double eppf_pd(double alpha, double theta, const BlockSizes& b) {
  detail::check_pd(alpha, theta, "eppf_pd");
  b.validate();
  return detail::log_v_pd(alpha, theta, b.n(), b.k()) + detail::log_pd_product(alpha, b);
}

// log V_{n,k} + sum_j log (1 - alpha)_{n_j - 1}
inline double eppf_gibbs(const GibbsWeightTable& table, const BlockSizes& b) {
  b.validate();
  require(b.n() <= table.n_max(), "eppf_gibbs: partition size exceeds the weight table");
  return table.log_v(b.n(), b.k()) + detail::log_pd_product(table.alpha(), b);
}

inline BlockCountPmf blocks_pmf(double alpha, double theta, int n) {
  detail::check_pd(alpha, theta, "blocks_pmf");
  require(n >= 1, "blocks_pmf: n must be >= 1");
  auto ls = detail::log_stirling_row(alpha, n);
  std::vector<double> lp(n + 1, detail::ninf);
  for (int k = 1; k <= n; ++k) lp[k] = detail::log_v_pd(alpha, theta, n, k) + ls[k];
  return detail::pmf_from_logs(n, lp);
}

// K_n law of an arbitrary Gibbs table: V_{n,k} S_alpha(n,k).
inline BlockCountPmf blocks_pmf_gibbs(const GibbsWeightTable& table, int n) {
  require(n >= 1 && n <= table.n_max(), "blocks_pmf_gibbs: n outside the weight table");
  auto ls = detail::log_stirling_row(table.alpha(), n);
  std::vector<double> lp(n + 1, detail::ninf);
  for (int k = 1; k <= n; ++k) lp[k] = table.log_v(n, k) + ls[k];
  return detail::pmf_from_logs(n, lp);
}

// sum_l P^{(n)}_{alpha,theta}(l) P^{(l)}_{delta,theta/alpha}(k)
inline BlockCountPmf blocks_pmf_coag(double alpha, double delta, double theta, int n) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "blocks_pmf_coag: alpha and delta must lie in (0,1)");
  require(theta > -alpha * delta, "blocks_pmf_coag: theta must exceed -alpha*delta");
  require(n >= 1, "blocks_pmf_coag: n must be >= 1");
  BlockCountPmf outer = blocks_pmf(alpha, theta, n);
  BlockCountPmf out(n);
  StirlingTable sd(delta, n);
  const double tau = theta / alpha;
  for (int l = 1; l <= n; ++l) {
    if (outer.p[l] == 0) continue;
    for (int k = 1; k <= l; ++k)
      out.p[k] += outer.p[l] * std::exp(detail::log_v_pd(delta, tau, l, k) + sd.log_value(l, k));
  }
  return out;
}

// Closed form of P^{(n)}_{1/4,0}(k): 2^{2-2n} C(2n-k-1, n-1) 3F2((k+1)/2, k/2, k-n; k, 1+k-2n; 2),
// the terminating hypergeometric sum taken in __float128.
inline BlockCountPmf blocks_pmf_quarter(int n) {
  require(n >= 1, "blocks_pmf_quarter: n must be >= 1");
  using detail::quad;
  BlockCountPmf out(n);
  for (int k = 1; k <= n; ++k) {
    quad a1 = quad(k + 1) / 2, a2 = quad(k) / 2, a3 = quad(k - n);
    quad b1 = quad(k), b2 = quad(1 + k - 2 * n);
    quad term = 1, sum = 1;
    for (int j = 0; j < n - k; ++j) {
      term *= (a1 + j) * (a2 + j) * (a3 + j) / ((b1 + j) * (b2 + j) * quad(j + 1)) * 2;
      sum += term;
    }
    quad lbin = ::lgammaq(quad(2 * n - k)) - ::lgammaq(quad(n)) - ::lgammaq(quad(n - k + 1));
    quad v = ::expq(lbin + quad(2 - 2 * n) * ::logq(quad(2))) * sum;
    out.p[k] = static_cast<double>(v);
  }
  return out;
}

// P(K_n^{(alpha)} = l | K_n^{(alpha delta)} = k) for l = k..n; the result is indexed by l.
inline BlockCountPmf cond_blocks_frag(double alpha, double delta, int n, int k) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "cond_blocks_frag: alpha and delta must lie in (0,1)");
  require(n >= 1 && k >= 1 && k <= n, "cond_blocks_frag: need 1 <= k <= n");
  StirlingTable sd(delta, n);
  auto la = detail::log_stirling_row(alpha, n);
  auto lad = detail::log_stirling_row(alpha * delta, n);
  double denom = detail::log_v_pd(alpha * delta, 0, n, k) + lad[k];
  BlockCountPmf out(n);
  for (int l = k; l <= n; ++l) {
    double num = detail::log_v_pd(delta, 0, l, k) + sd.log_value(l, k) + detail::log_v_pd(alpha, 0, n, l) + la[l];
    out.p[l] = std::exp(num - denom);
  }
  return out;
}

// Fragmented Gibbs EPPF: log{ [sum_j P^{(k)}_{delta,0}(j) V~_{n,j}] p_alpha(b) } with
// V~_{n,j} = V_{n,j} (alpha delta)^{1-j} Gamma(n)/Gamma(j) taken from a base table of index alpha*delta.
inline double eppf_frag(double alpha, double delta, const GibbsWeightTable& base, const BlockSizes& b) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "eppf_frag: alpha and delta must lie in (0,1)");
  require(std::fabs(base.alpha() - alpha * delta) <= 1e-12, "eppf_frag: base table must have index alpha*delta");
  b.validate();
  const int n = b.n(), k = b.k();
  require(n <= base.n_max(), "eppf_frag: partition size exceeds the base table");
  StirlingTable sd(delta, k);
  const double lad = std::log(alpha * delta);
  double acc = detail::ninf;
  for (int j = 1; j <= k; ++j) {
    double lpj = detail::log_v_pd(delta, 0, k, j) + sd.log_value(k, j);
    double lvt = base.log_v(n, j) + (1 - j) * lad + detail::lgam(static_cast<double>(n)) -
                 detail::lgam(static_cast<double>(j));
    acc = detail::log_add_exp(acc, lpj + lvt);
  }
  return acc + detail::log_v_pd(alpha, 0, n, k) + detail::log_pd_product(alpha, b);
}

// Mittag-Leffler Gibbs EPPF: p_{alpha,theta}(b) E^{(theta/alpha+k)}_{alpha,theta+n}(-lambda) / E^{(theta/alpha+1)}_{alpha,theta+1}(-lambda).
inline double eppf_ml(double alpha, double theta, double lambda, const BlockSizes& b, const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "eppf_ml: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "eppf_ml");
  require(lambda >= 0 && std::isfinite(lambda), "eppf_ml: lambda must be >= 0");
  b.validate();
  const int n = b.n(), k = b.k();
  double lp = eppf_pd(alpha, theta, b);
  if (lambda == 0) return lp;
  return lp + log_gen_ml(alpha, theta + k * alpha, n - k * alpha, lambda, ctl) -
         log_gen_ml(alpha, theta + alpha, 1 - alpha, lambda, ctl);
}

inline double log_v_ml(double alpha, double theta, double lambda, int n, int k, const SeriesControl& ctl = {}) {
  double lv = detail::log_v_pd(alpha, theta, n, k);
  if (lambda == 0 || n == 1) return lv;
  return lv + log_gen_ml(alpha, theta + k * alpha, n - k * alpha, lambda, ctl) -
         log_gen_ml(alpha, theta + alpha, 1 - alpha, lambda, ctl);
}

inline BlockCountPmf blocks_pmf_ml(double alpha, double theta, double lambda, int n, const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "blocks_pmf_ml: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "blocks_pmf_ml");
  require(lambda >= 0 && std::isfinite(lambda), "blocks_pmf_ml: lambda must be >= 0");
  require(n >= 1, "blocks_pmf_ml: n must be >= 1");
  auto ls = detail::log_stirling_row(alpha, n);
  std::vector<double> lp(n + 1, detail::ninf);
  for (int k = 1; k <= n; ++k) lp[k] = log_v_ml(alpha, theta, lambda, n, k, ctl) + ls[k];
  return detail::pmf_from_logs(n, lp);
}

// alpha = 1/2 EPPF given local time s: 2^{n-k} s^{k-1} h_{k+1-2n}(s) prod_j (1/2)_{n_j-1}.
inline double eppf_hermite(double s, const BlockSizes& b, const SeriesControl& ctl = {}) {
  require(s > 0 && std::isfinite(s), "eppf_hermite: s must be > 0");
  b.validate();
  return log_gibbs_weight_hermite(b.n(), b.k(), s, ctl) + detail::log_pd_product(0.5, b);
}

inline BlockCountPmf blocks_pmf_hermite(double s, int n, const SeriesControl& ctl = {}) {
  require(s > 0 && std::isfinite(s), "blocks_pmf_hermite: s must be > 0");
  require(n >= 1, "blocks_pmf_hermite: n must be >= 1");
  std::vector<double> lp(n + 1, detail::ninf);
  for (int k = 1; k <= n; ++k) {
    double lc = detail::lgam(2.0 * n - k) - detail::lgam(n - k + 1.0) - detail::lgam(static_cast<double>(k)) -
                (n - k) * std::numbers::ln2;
    lp[k] = lc + (k - 1) * std::log(s) + std::log(hermite_h(0.5 * (2 * n - k - 1), s, ctl));
  }
  return detail::pmf_from_logs(n, lp);
}

// r-step fragmented ML-Gibbs EPPF; the numerator is the beta-mixture 3m series.
inline double eppf_mlmc_ml(double alpha, double theta, double lambda, int r, const BlockSizes& b,
                           const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "eppf_mlmc_ml: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "eppf_mlmc_ml");
  require(lambda >= 0 && std::isfinite(lambda), "eppf_mlmc_ml: lambda must be >= 0");
  require(r >= 0, "eppf_mlmc_ml: r must be >= 0");
  b.validate();
  const int n = b.n(), k = b.k();
  double lp = eppf_pd(alpha, theta + r, b);
  if (lambda == 0) return lp;
  std::vector<std::pair<double, double>> betas;
  for (int i = 1; i <= r; ++i) betas.emplace_back(theta + alpha + i - 1, 1 - alpha);
  double num = ml3m_beta_mixture(alpha, theta + r + k * alpha, n - k * alpha, betas, lambda, ctl);
  return lp + std::log(num) - log_gen_ml(alpha, theta + alpha, 1 - alpha, lambda, ctl);
}

// Relative residual of sum_j P^{(n)}_alpha(j) Gamma(theta/alpha+j)/Gamma(j)
//   = Gamma(theta+n) Gamma(theta/alpha+1) / (Gamma(n) Gamma(theta+1)).
inline double pmf_moment_identity_check(double alpha, double theta, int n) {
  require(alpha > 0 && alpha < 1, "pmf_moment_identity_check: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "pmf_moment_identity_check");
  require(n >= 1, "pmf_moment_identity_check: n must be >= 1");
  if (theta == 0) return 0.0;
  BlockCountPmf p = blocks_pmf(alpha, 0, n);
  using detail::lgam;
  double rhs_log = lgam(theta + n) + lgam(theta / alpha + 1) - lgam(static_cast<double>(n)) - lgam(theta + 1);
  double lhs = 0, c = 0;
  for (int j = 1; j <= n; ++j) {
    double y = p.p[j] * std::exp(lgam(theta / alpha + j) - lgam(static_cast<double>(j)) - rhs_log) - c;
    double t = lhs + y;
    c = (t - lhs) - y;
    lhs = t;
  }
  return std::fabs(lhs - 1.0);
}

// max_k relative residual of S_{alpha delta}(n,k) = sum_l alpha^{l-k} S_alpha(n,l) S_delta(l,k).
inline double stirling_composition_residual(double alpha, double delta, int n) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "stirling_composition: alpha and delta must lie in (0,1)");
  require(n >= 1, "stirling_composition: n must be >= 1");
  StirlingTable sa(alpha, n), sd(delta, n), sad(alpha * delta, n);
  double worst = 0;
  for (int k = 1; k <= n; ++k) {
    double acc = detail::ninf;
    for (int l = k; l <= n; ++l)
      acc = detail::log_add_exp(acc, (l - k) * std::log(alpha) + sa.log_value(n, l) + sd.log_value(l, k));
    worst = std::max(worst, std::fabs(std::expm1(acc - sad.log_value(n, k))));
  }
  return worst;
}

// Weight tables ------------------------------------------------------------

inline GibbsWeightTable pd_weight_table(double alpha, double theta, int n_max) {
  require(alpha > 0 && alpha < 1, "pd_weight_table: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "pd_weight_table");
  require(n_max >= 1, "pd_weight_table: n_max must be >= 1");
  std::vector<std::vector<double>> lv(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    lv[n].assign(n + 1, detail::ninf);
    for (int k = 1; k <= n; ++k) lv[n][k] = detail::log_v_pd(alpha, theta, n, k);
  }
  return GibbsWeightTable(alpha, std::move(lv), WeightSource::pd, "PD(alpha,theta)");
}

inline GibbsWeightTable ml_weight_table(double alpha, double theta, double lambda, int n_max,
                                        const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "ml_weight_table: alpha must lie in (0,1)");
  detail::check_pd(alpha, theta, "ml_weight_table");
  require(lambda >= 0 && std::isfinite(lambda), "ml_weight_table: lambda must be >= 0");
  require(n_max >= 1, "ml_weight_table: n_max must be >= 1");
  std::vector<std::vector<double>> lv(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    lv[n].assign(n + 1, detail::ninf);
    for (int k = 1; k <= n; ++k) lv[n][k] = log_v_ml(alpha, theta, lambda, n, k, ctl);
  }
  return GibbsWeightTable(alpha, std::move(lv), WeightSource::ml_gibbs, "ML-Gibbs(alpha,theta,lambda)");
}

// Conditional weights G^{(n,k)}_alpha(t) given S_alpha = t.
inline GibbsWeightTable conditional_weight_table(double alpha, double t, int n_max, const QuadratureControl& ctl = {},
                                                 WeightRoute route = WeightRoute::quadrature) {
  require(n_max >= 1, "conditional_weight_table: n_max must be >= 1");
  std::vector<std::vector<double>> lv(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    lv[n].assign(n + 1, detail::ninf);
    for (int k = 1; k <= n; ++k) lv[n][k] = log_gibbs_weight(alpha, n, k, t, ctl, route);
  }
  return GibbsWeightTable(alpha, std::move(lv), WeightSource::conditional_t, "PD(alpha|t)");
}

// alpha = 1/2 conditional weights indexed by local time s = (2t)^{-1/2}.
inline GibbsWeightTable hermite_weight_table(double s, int n_max, const SeriesControl& ctl = {}) {
  require(s > 0 && std::isfinite(s), "hermite_weight_table: s must be > 0");
  require(n_max >= 1, "hermite_weight_table: n_max must be >= 1");
  std::vector<std::vector<double>> lv(n_max + 1);
  for (int n = 1; n <= n_max; ++n) {
    lv[n].assign(n + 1, detail::ninf);
    for (int k = 1; k <= n; ++k) lv[n][k] = n == 1 ? 0.0 : log_gibbs_weight_hermite(n, k, s, ctl);
  }
  return GibbsWeightTable(0.5, std::move(lv), WeightSource::conditional_t, "PD(1/2|s)");
}

}  // namespace gibbs

#endif

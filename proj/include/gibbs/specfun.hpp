#ifndef GIBBS_SPECFUN_HPP
#define GIBBS_SPECFUN_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "gibbs/detail/series.hpp"
#include "gibbs/errors.hpp"

namespace gibbs {

// Parameters of the 3m-parametric Mittag-Leffler function
//   sum_l (-lambda)^l / l! * prod_i (kappa_i)_l / prod_i Gamma(rho_i l + mu_i).
struct MLParams3m {
  std::vector<double> rho;
  std::vector<double> mu;
  std::vector<double> kappa;

  std::size_t m() const { return rho.size(); }
  void validate() const {
    require(!rho.empty(), "MLParams3m: m must be >= 1");
    require(mu.size() == rho.size() && kappa.size() == rho.size(), "MLParams3m: arrays must have equal length");
    for (double r : rho) require(r > 0, "MLParams3m: rho must be > 0");
  }
};

inline double log_gamma(double x) { return detail::lgam(x); }

// log((x)_n). Products are formed directly for short runs, lgamma differences otherwise.
inline double log_rising(double x, long n) {
  require(x > 0 && std::isfinite(x), "log_rising: x must be > 0");
  require(n >= 0, "log_rising: n must be >= 0");
  if (n == 0) return 0.0;
  if (n <= 24 && x < 1e10) {
    double p = 1.0;
    for (long i = 0; i < n; ++i) p *= x + static_cast<double>(i);
    return std::log(p);
  }
  return detail::lgam(x + static_cast<double>(n)) - detail::lgam(x);
}

// Generalized Stirling numbers S_alpha(n,k) in log space, built with the triangular
// recursion S(n+1,k) = S(n,k-1) + (n - k alpha) S(n,k), S(1,1) = 1.
class StirlingTable {
 public:
  StirlingTable(double alpha, int n_max) : alpha_(alpha), n_max_(n_max) {
    require(alpha > 0 && alpha < 1, "gen_stirling: alpha must lie in (0,1)");
    require(n_max >= 1, "gen_stirling: n must be >= 1");
    const double ninf = -std::numeric_limits<double>::infinity();
    log_.assign(n_max + 1, std::vector<double>(n_max + 2, ninf));
    log_[1][1] = 0.0;
    for (int n = 1; n < n_max; ++n) {
      for (int k = 1; k <= n + 1; ++k) {
        double a = log_[n][k - 1];
        double b = k <= n ? std::log(n - k * alpha) + log_[n][k] : ninf;
        log_[n + 1][k] = detail::log_add_exp(a, b);
      }
    }
  }

  double alpha() const { return alpha_; }
  int n_max() const { return n_max_; }

  double log_value(int n, int k) const {
    require(n >= 1 && n <= n_max_, "gen_stirling: n outside table");
    require(k >= 1 && k <= n, "gen_stirling: k must satisfy 1 <= k <= n");
    return log_[n][k];
  }
  double value(int n, int k) const { return std::exp(log_value(n, k)); }

 private:
  double alpha_;
  int n_max_;
  std::vector<std::vector<double>> log_;
};

inline double log_gen_stirling(double alpha, int n, int k) {
  require(n >= 1, "gen_stirling: n must be >= 1");
  require(k >= 1 && k <= n, "gen_stirling: k must satisfy 1 <= k <= n");
  return StirlingTable(alpha, n).log_value(n, k);
}

inline double gen_stirling(double alpha, int n, int k) { return std::exp(log_gen_stirling(alpha, n, k)); }

// E[S_alpha^{-theta}] = Gamma(theta/alpha + 1) / Gamma(theta + 1).
inline double log_neg_moment_stable(double alpha, double theta) {
  require(alpha > 0 && alpha < 1, "neg_moment_stable: alpha must lie in (0,1)");
  require(theta > -alpha, "neg_moment_stable: theta must exceed -alpha");
  if (theta == 0) return 0.0;
  return detail::lgam(theta / alpha + 1.0) - detail::lgam(theta + 1.0);
}

inline double neg_moment_stable(double alpha, double theta) {
  return std::exp(log_neg_moment_stable(alpha, theta));
}

namespace detail {

// sign of Gamma(x); 0 at the poles.
inline int gamma_sign(double x) {
  if (x > 0) return 1;
  if (x == std::floor(x)) return 0;
  long c = static_cast<long>(std::ceil(-x));
  return (c % 2 == 0) ? 1 : -1;
}

template <class R>
Term<R> lead(R, std::size_t l, double lambda) {
  Term<R> t;
  R dl = static_cast<R>(static_cast<double>(l));
  t.log_abs = (l == 0 ? R(0) : dl * xlog(R(lambda))) - lgam(dl + 1);
  t.sign = (l % 2 == 0) ? 1 : -1;
  t.scale = std::fabs(static_cast<double>(l) * std::log(lambda)) + std::fabs(static_cast<double>(lgam(dl + 1)));
  return t;
}

// Adds log((kappa)_l) for kappa > 0.
template <class R>
void add_rising(Term<R>& t, R kappa, std::size_t l, int power = 1) {
  if (l == 0) return;
  R v = lgam(kappa + R(static_cast<double>(l))) - lgam(kappa);
  t.log_abs += power > 0 ? v : -v;
  t.scale += std::fabs(static_cast<double>(lgam(kappa + R(static_cast<double>(l))))) +
             std::fabs(static_cast<double>(lgam(kappa)));
}

}  // namespace detail

// Prabhakar function sum_l (-lambda)^l / l! (kappa)_l / Gamma(rho l + mu).
inline double prabhakar_ml(double rho, double mu, double kappa, double lambda, const SeriesControl& ctl = {}) {
  require(rho > 0, "prabhakar_ml: rho must be > 0");
  require(mu > 0, "prabhakar_ml: mu must be > 0");
  require(kappa > 0, "prabhakar_ml: kappa must be > 0");
  require(lambda >= 0 && std::isfinite(lambda), "prabhakar_ml: lambda must be >= 0");
  if (lambda == 0) return std::exp(-detail::lgam(mu));
  auto term = [&](auto zero, std::size_t l) {
    using R = decltype(zero);
    auto t = detail::lead(zero, l, lambda);
    detail::add_rising(t, R(kappa), l);
    R g = detail::lgam(R(rho) * R(static_cast<double>(l)) + R(mu));
    t.log_abs -= g;
    t.scale += std::fabs(static_cast<double>(g));
    return t;
  };
  return detail::sum_alternating(term, ctl, "prabhakar_ml");
}

// E^{(omega/alpha)}_{alpha,omega+nu}(-lambda): Laplace transform of
// beta_{omega/alpha,nu/alpha} / S_{alpha,omega+nu}^alpha.
inline double gen_ml(double alpha, double omega, double nu, double lambda, const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "gen_ml: alpha must lie in (0,1)");
  require(omega > 0, "gen_ml: omega must be > 0");
  require(nu > 0, "gen_ml: nu must be > 0");
  require(lambda >= 0 && std::isfinite(lambda), "gen_ml: lambda must be >= 0");
  if (lambda == 0) return 1.0;
  const double kappa = omega / alpha, mu = omega + nu;
  auto term = [&](auto zero, std::size_t l) {
    using R = decltype(zero);
    auto t = detail::lead(zero, l, lambda);
    detail::add_rising(t, R(kappa), l);
    R g0 = detail::lgam(R(mu));
    R g = detail::lgam(R(alpha) * R(static_cast<double>(l)) + R(mu));
    t.log_abs += g0 - g;
    t.scale += std::fabs(static_cast<double>(g0)) + std::fabs(static_cast<double>(g));
    return t;
  };
  return detail::sum_alternating(term, ctl, "gen_ml");
}

// E[ E^{(omega0/alpha)}_{alpha,omega0+nu0}(-lambda prod_j beta_{omega_j/alpha, nu_j/alpha}) ].
inline double ml3m_beta_mixture(double alpha, double omega0, double nu0,
                                const std::vector<std::pair<double, double>>& betas, double lambda,
                                const SeriesControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "ml3m_beta_mixture: alpha must lie in (0,1)");
  require(omega0 > 0 && nu0 > 0, "ml3m_beta_mixture: omega0 and nu0 must be > 0");
  for (auto& b : betas) require(b.first > 0 && b.second > 0, "ml3m_beta_mixture: omega_j and nu_j must be > 0");
  require(lambda >= 0 && std::isfinite(lambda), "ml3m_beta_mixture: lambda must be >= 0");
  if (lambda == 0) return 1.0;
  const double mu = omega0 + nu0;
  auto term = [&](auto zero, std::size_t l) {
    using R = decltype(zero);
    auto t = detail::lead(zero, l, lambda);
    detail::add_rising(t, R(omega0 / alpha), l);
    for (auto& b : betas) {
      detail::add_rising(t, R(b.first / alpha), l);
      detail::add_rising(t, R((b.first + b.second) / alpha), l, -1);
    }
    R g0 = detail::lgam(R(mu));
    R g = detail::lgam(R(alpha) * R(static_cast<double>(l)) + R(mu));
    t.log_abs += g0 - g;
    t.scale += std::fabs(static_cast<double>(g0)) + std::fabs(static_cast<double>(g));
    return t;
  };
  return detail::sum_alternating(term, ctl, "ml3m_beta_mixture");
}

// General 3m-parametric function; kappa and mu may be any reals.
inline double ml3m(const MLParams3m& p, double lambda, const SeriesControl& ctl = {}) {
  p.validate();
  require(lambda >= 0 && std::isfinite(lambda), "ml3m: lambda must be >= 0");
  auto term = [&](auto zero, std::size_t l) {
    using R = decltype(zero);
    detail::Term<R> t;
    if (l > 0 && lambda == 0) {
      t.sign = 0;
      t.last = true;
      return t;
    }
    t = l == 0 ? detail::Term<R>{} : detail::lead(zero, l, lambda);
    for (std::size_t i = 0; i < p.m(); ++i) {
      double kap = p.kappa[i];
      if (l > 0) {
        if (kap <= 0 && kap == std::floor(kap) && static_cast<double>(l) > -kap) {
          t.sign = 0;
          t.last = true;
          return t;
        }
        double top = kap + static_cast<double>(l);
        int s = detail::gamma_sign(top) * detail::gamma_sign(kap);
        if (s == 0) {  // kap a nonpositive integer with l <= -kap: product computed directly
          double prod = 1.0;
          for (std::size_t j = 0; j < l; ++j) prod *= kap + static_cast<double>(j);
          s = prod > 0 ? 1 : (prod < 0 ? -1 : 0);
          if (s == 0) {
            t.sign = 0;
            t.last = true;
            return t;
          }
          t.log_abs += R(std::log(std::fabs(prod)));
        } else {
          t.log_abs += detail::lgam(R(top)) - detail::lgam(R(kap));
          t.scale += std::fabs(static_cast<double>(detail::lgam(R(top))));
        }
        t.sign *= s;
      }
      double arg = p.rho[i] * static_cast<double>(l) + p.mu[i];
      int gs = detail::gamma_sign(arg);
      if (gs == 0) {
        t.sign = 0;
        return t;
      }
      R g = detail::lgam(R(arg));
      t.log_abs -= g;
      t.scale += std::fabs(static_cast<double>(g));
      t.sign *= gs;
    }
    return t;
  };
  return detail::sum_alternating(term, ctl, "ml3m");
}

// Hermite function of index -2q: h_{-2q}(s) = 2^{-q} U(q, 1/2, s^2/2).
// Computed from (1/Gamma(2q)) int t^{2q-1} exp(-t^2/2 - s t) dt.
inline double hermite_h(double q, double lambda, const SeriesControl& ctl = {}) {
  require(q >= 0 && std::isfinite(q), "hermite_h: q must be >= 0");
  require(lambda >= 0 && std::isfinite(lambda), "hermite_h: lambda must be >= 0");
  ctl.validate();
  if (q == 0) return 1.0;
  if (lambda == 0) return std::exp(detail::lgam(q) + (q - 1) * std::numbers::ln2 - detail::lgam(2 * q));
  // (1/Gamma(2q)) int_0^inf t^{2q-1} e^{-t^2/2 - lambda t} dt. The alternating power series
  // only holds absolute accuracy, and these values get small, so the integral is used throughout.
  const double p = 2 * q - 1;
  const double peak = p > 0 ? 0.5 * (std::sqrt(lambda * lambda + 4 * p) - lambda) : 0.0;
  auto log_f = [&](double t) { return (p == 0 ? 0.0 : p * std::log(t)) - 0.5 * t * t - lambda * t; };
  const double shift = peak > 0 ? log_f(peak) : 0.0;
  auto f = [&](double t) {
    if (!(t > 0)) return 0.0;
    double v = std::exp(log_f(t) - shift);
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0, l1 = 0;
  double v = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 0.1 * ctl.rel_tol, &err, &l1);
  if (!std::isfinite(v) || !(v > 0) || !(err <= ctl.rel_tol * l1))
    throw numeric_error("hermite_h: integral did not reach tolerance", v, err);
  return std::exp(std::log(v) + shift - detail::lgam(2 * q));
}

}  // namespace gibbs

#endif

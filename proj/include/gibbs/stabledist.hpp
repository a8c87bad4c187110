#ifndef GIBBS_STABLEDIST_HPP
#define GIBBS_STABLEDIST_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "gibbs/errors.hpp"
#include "gibbs/quadrature.hpp"
#include "gibbs/specfun.hpp"

namespace gibbs {

// Index of a positive stable law, with the reduced fraction m/r when alpha is a
// rational with a small denominator.
struct StableIndex {
  double alpha = 0.5;
  std::optional<std::pair<int, int>> rational_form;

  static StableIndex of(double alpha, int max_denominator = 64) {
    require(alpha > 0 && alpha < 1, "StableIndex: alpha must lie in (0,1)");
    StableIndex s;
    s.alpha = alpha;
    for (int r = 2; r <= max_denominator; ++r) {
      double m = std::round(alpha * r);
      if (m >= 1 && m < r && std::fabs(m / r - alpha) < 1e-14 && std::gcd(static_cast<int>(m), r) == 1) {
        s.rational_form = std::make_pair(static_cast<int>(m), r);
        break;
      }
    }
    return s;
  }
};

namespace detail {

inline bool is_half(double alpha) { return alpha == 0.5; }

// log(sin(x)/x), accurate for small x.
inline double log_sinc(double x) {
  if (std::fabs(x) < 1e-2) {
    double x2 = x * x;
    return -x2 / 6.0 - x2 * x2 / 180.0 - x2 * x2 * x2 / 2835.0;
  }
  return std::log(std::sin(x) / x);
}

// log K(u) - log K(0+) for Zolotarev's function
//   K(u) = (sin(a u)/sin u)^{1/(1-a)} sin((1-a)u)/sin(a u),  0 < u < pi,
// which increases from K(0+) = a^{a/(1-a)} (1-a) to +inf; d(u) ~ a u^2 / 2 near 0.
inline double zolotarev_excess(double a, double u) {
  return (log_sinc(a * u) - log_sinc(u)) / (1 - a) + log_sinc((1 - a) * u) - log_sinc(a * u);
}

// Convergent expansion f_a(t) = (1/pi) sum_k (-1)^{k+1} Gamma(k a + 1)/k! sin(k pi a) t^{-k a - 1},
// used when t^{-a} is small.
inline double log_stable_pdf_series(double a, double t) {
  const double x = std::pow(t, -a);
  const double pi = std::numbers::pi;
  double sum = 0, comp = 0;
  for (int k = 1; k < 400; ++k) {
    double mag = std::exp(lgam(k * a + 1) - lgam(k + 1.0) + k * std::log(x));
    double term = ((k % 2) ? 1.0 : -1.0) * mag * std::sin(k * pi * a);
    double y = term - comp;
    double s2 = sum + y;
    comp = (s2 - sum) - y;
    sum = s2;
    if (mag < 1e-17 * std::fabs(sum)) break;
  }
  return std::log(sum / pi) - std::log(t);
}

// Zolotarev single-integral route:
//   f_a(t) = a / ((1-a) pi t) int_0^pi g(u) e^{-g(u)} du,  g(u) = t^{-a/(1-a)} K(u).
inline double log_stable_pdf_integral(double a, double t, const QuadratureControl& ctl) {
  const double pi = std::numbers::pi;
  const double lg0 = -(a / (1 - a)) * std::log(t) + (a / (1 - a)) * std::log(a) + std::log1p(-a);
  const double g0 = std::exp(lg0);
  if (!std::isfinite(g0)) return -std::numeric_limits<double>::infinity();
  const double umax = pi * (1 - 1e-15);
  // log of g e^{-(g - g0)}
  auto log_h = [&](double u) {
    double d = zolotarev_excess(a, u);
    return lg0 + d - g0 * std::expm1(d);
  };
  double up = 0.0;
  if (g0 < 1.0) up = bisect([&](double u) { return lg0 + zolotarev_excess(a, u) >= 0.0; }, 0.0, umax);
  const double peak = log_h(std::max(up, 1e-300));
  auto h = [&](double u) {
    if (u <= 0 || u >= pi) return 0.0;
    double v = log_h(u) - peak;
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  const double cut = -60.0;
  double u_end = umax;
  if (!(log_h(umax) - peak > cut)) u_end = bisect([&](double u) { return !(log_h(u) - peak > cut); }, up, umax);
  double u_start = 0.0;
  if (up > 0 && log_h(up * 1e-9) - peak < cut) u_start = bisect([&](double u) { return log_h(u) - peak >= cut; }, 0.0, up);

  std::vector<double> pts{u_start};
  if (up > u_start) {
    double wl = up - u_start;
    for (double frac : {0.7, 0.9, 0.98}) pts.push_back(u_start + frac * wl);
    pts.push_back(up);
  }
  double w = u_end - std::max(up, u_start);
  for (double frac : {0.02, 0.1, 0.3}) pts.push_back(std::max(up, u_start) + frac * w);
  pts.push_back(u_end);
  double integral = integrate_panels(h, pts, ctl, "stable_pdf");
  if (!(integral > 0)) return -std::numeric_limits<double>::infinity();
  return std::log(a / ((1 - a) * pi * t)) - g0 + peak + std::log(integral);
}

}  // namespace detail

// log f_alpha(t) for the density of S_alpha with E exp(-lambda S) = exp(-lambda^alpha).
inline double log_stable_pdf(double alpha, double t, const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "stable_pdf: alpha must lie in (0,1)");
  require(t > 0 && std::isfinite(t), "stable_pdf: t must be > 0");
  if (detail::is_half(alpha))
    return -1.5 * std::log(t) - 0.25 / t - std::log(2.0 * std::sqrt(std::numbers::pi));
  ctl.validate();
  if (std::pow(t, -alpha) <= 0.25) return detail::log_stable_pdf_series(alpha, t);
  return detail::log_stable_pdf_integral(alpha, t, ctl);
}

inline double stable_pdf(double alpha, double t, const QuadratureControl& ctl = {}) {
  return std::exp(log_stable_pdf(alpha, t, ctl));
}

// f_{alpha,theta}(t) = t^{-theta} f_alpha(t) / E[S_alpha^{-theta}].
inline double tilted_pdf(double alpha, double theta, double t, const QuadratureControl& ctl = {}) {
  require(theta > -alpha, "tilted_pdf: theta must exceed -alpha");
  require(t > 0, "tilted_pdf: t must be > 0");
  return std::exp(-theta * std::log(t) + log_stable_pdf(alpha, t, ctl) - log_neg_moment_stable(alpha, theta));
}

// Density of S_{alpha,theta}^{-alpha}.
inline double ml_pdf(double alpha, double theta, double z, const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "ml_pdf: alpha must lie in (0,1)");
  require(theta > -alpha, "ml_pdf: theta must exceed -alpha");
  require(z > 0 && std::isfinite(z), "ml_pdf: z must be > 0");
  double lz = std::log(z);
  double lg = log_stable_pdf(alpha, std::exp(-lz / alpha), ctl) + (-1.0 / alpha - 1.0) * lz - std::log(alpha);
  return std::exp((theta / alpha) * lz + lg - log_neg_moment_stable(alpha, theta));
}

// log gen_ml by quadrature over the Mittag-Leffler law of M = S^{-alpha}:
//   int f_M(z) 1F1(omega/alpha; (omega+nu)/alpha; -lambda z) dz, taken in log z.
// All terms are positive, so this holds up where the alternating series cancels.
inline double log_gen_ml_quadrature(double alpha, double omega, double nu, double lambda,
                                    const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "gen_ml: alpha must lie in (0,1)");
  require(omega > 0, "gen_ml: omega must be > 0");
  require(nu > 0, "gen_ml: nu must be > 0");
  require(lambda >= 0 && std::isfinite(lambda), "gen_ml: lambda must be >= 0");
  if (lambda == 0) return 0.0;
  ctl.validate();
  const double a = alpha, theta = omega + nu, ka = omega / a, kb = theta / a;
  const double shift = log_neg_moment_stable(a, theta) + std::log(a);
  auto log_h = [&](double x) {
    double lf = log_stable_pdf(a, std::exp(-x / a), ctl) + (theta / a - 1 / a) * x - shift;
    int sign = 1;
    double lk = boost::math::log_hypergeometric_1F1(ka, kb, -lambda * std::exp(x), &sign);
    return lf + lk;
  };
  const double x_lo = -std::max(0.0, std::log(lambda)) - 45, x_hi = 8;
  double top = -std::numeric_limits<double>::infinity();
  for (double x = x_lo; x <= x_hi; x += 0.5) top = std::max(top, log_h(x));
  if (!std::isfinite(top)) throw numeric_error("gen_ml: quadrature integrand vanished", 0, 0);
  auto h = [&](double x) {
    double v = log_h(x) - top;
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  std::vector<double> pts;
  for (double x = x_lo; x < x_hi; x += 1) pts.push_back(x);
  pts.push_back(x_hi);
  double v = detail::integrate_panels(h, pts, ctl, "gen_ml");
  return top + std::log(v);
}

// log gen_ml: the series when it converges, quadrature otherwise.
inline double log_gen_ml(double alpha, double omega, double nu, double lambda, const SeriesControl& sctl = {},
                         const QuadratureControl& qctl = {}) {
  // the series bound is absolute; insist on relative accuracy before using it in logs
  SeriesControl rel = sctl;
  rel.abs_tol = std::numeric_limits<double>::min();
  try {
    return std::log(gen_ml(alpha, omega, nu, lambda, rel));
  } catch (const numeric_error&) {
    return log_gen_ml_quadrature(alpha, omega, nu, lambda, qctl);
  }
}

// Density of S_alpha / S'_alpha.
inline double lamperti_pdf(double alpha, double y) {
  require(alpha > 0 && alpha < 1, "lamperti_pdf: alpha must lie in (0,1)");
  require(y > 0 && std::isfinite(y), "lamperti_pdf: y must be > 0");
  const double pi = std::numbers::pi;
  double ya = std::pow(y, alpha);
  return std::sin(pi * alpha) / pi * std::pow(y, alpha - 1) / (ya * ya + 2 * std::cos(pi * alpha) * ya + 1);
}

// log I^nu f_alpha(t), Riemann-Liouville integral of the stable density, from
//   (1/Gamma(nu/a)) int_0^1 f_a(t u^{1/a}) u^{-(nu-1)/a - 1} (1-u)^{nu/a - 1} du
// taken in s = -log u. The mass sits either in a boundary layer at s = 0 (small t) or around
// an interior peak (large t); panels are laid out geometrically from that point.
inline double log_frac_integral(double alpha, double nu, double t, const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "frac_integral: alpha must lie in (0,1)");
  require(nu > 0 && std::isfinite(nu), "frac_integral: nu must be > 0");
  require(t > 0 && std::isfinite(t), "frac_integral: t must be > 0");
  ctl.validate();
  const double a = alpha, b = nu / a, c = (nu - 1) / a;
  const double log_t = std::log(t);
  const double ninf = -std::numeric_limits<double>::infinity();
  // log integrand in s, endpoint factor (1 - e^{-s})^{b-1} excluded
  auto core = [&](double s) {
    double x = s / a < 700 ? t * std::exp(-s / a) : std::exp(log_t - s / a);  // t e^{-s/a} keeps tiny s resolved
    return log_stable_pdf(a, x, ctl) + c * s;
  };
  auto slope = [&](double s) {
    double h = 1e-4 * std::max(1.0, s);
    return (core(s + h) - core(std::max(0.0, s - h))) / (s + h - std::max(0.0, s - h));
  };

  double peak = 0, width = 1;
  double d0 = slope(0);
  if (!std::isfinite(d0)) return ninf;
  if (d0 < 0) {
    width = std::min(1.0, 1.0 / -d0);
  } else {
    double hi = 1;
    for (int i = 0; i < 60 && slope(hi) >= 0; ++i) hi *= 2;
    double lo = 0;
    for (int i = 0; i < 100 && hi - lo > 1e-6 * std::max(1.0, hi); ++i) {
      double mid = 0.5 * (lo + hi);
      (slope(mid) >= 0 ? lo : hi) = mid;
    }
    peak = 0.5 * (lo + hi);
    double h = 1e-3 * std::max(1.0, peak);
    double curv = (core(peak + h) - 2 * core(peak) + core(std::max(0.0, peak - h))) / (h * h);
    width = curv < 0 ? std::min(std::max(1.0, peak), 1.0 / std::sqrt(-curv)) : 1.0;
  }
  const double top = core(peak);
  if (!std::isfinite(top)) return ninf;
  // e^{core - top} carries rounding noise of order eps |top|; the log result is unaffected
  QuadratureControl qc = ctl;
  qc.rel_tol = std::max(ctl.rel_tol, 64 * std::numeric_limits<double>::epsilon() * std::fabs(top));

  // breakpoints out to where the integrand is below e^{-60} of its peak
  std::vector<double> pts{peak};
  for (double step = width; pts.front() > 0; step *= 2) {
    double s = std::max(0.0, peak - step);
    pts.insert(pts.begin(), s);
    if (core(s) < top - 60) break;
  }
  for (double step = width;; step *= 2) {
    double s = peak + step;
    pts.push_back(s);
    if (core(s) < top - 60 || pts.size() > 200) break;
  }

  auto f = [&](double s) {
    if (!(s > 0)) return 0.0;
    double v = core(s) - top + (b - 1) * std::log(-std::expm1(-s));
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  double integral = 0;
  std::size_t first = 0;
  if (pts.front() == 0) {
    // [0, s1] carries the endpoint factor ~ s^{b-1}; tanh-sinh absorbs it. Integrated over
    // s = s1 u, u in [0,1], as s1^b int ((1 - e^{-s1 u})/s1)^{b-1} e^{core - top} du.
    const double s1 = pts[1];
    auto g = [&](double u) {
      if (!(u > 0)) return 0.0;
      double sv = s1 * u;
      double v = core(sv) - top + (b - 1) * std::log(-std::expm1(-sv) / s1);
      return std::isfinite(v) ? std::exp(v) : 0.0;
    };
    boost::math::quadrature::tanh_sinh<double> ts(15);
    double err = 0, l1 = 0;
    double v = ts.integrate(g, 0.0, 1.0, 0.1 * qc.rel_tol, &err, &l1);
    if (!std::isfinite(v) || !(err <= std::max(qc.abs_tol, qc.rel_tol * l1)))
      throw numeric_error("frac_integral: quadrature did not reach tolerance", v, err);
    integral += std::pow(s1, b) * v;
    first = 1;
  }
  std::vector<double> rest(pts.begin() + first, pts.end());
  if (rest.size() >= 2) integral += detail::integrate_panels(f, rest, qc, "frac_integral");
  if (!(integral > 0)) return ninf;
  return top + std::log(integral) - detail::lgam(b);
}

inline double frac_integral(double alpha, double nu, double t, const QuadratureControl& ctl = {}) {
  return std::exp(log_frac_integral(alpha, nu, t, ctl));
}

enum class WeightRoute { automatic, quadrature, hermite };

// log G^{(n,k)}_{1/2}(t) via Hermite functions, s = (2t)^{-1/2}.
inline double log_gibbs_weight_hermite(int n, int k, double s, const SeriesControl& sctl = {}) {
  require(n >= 1 && k >= 1 && k <= n, "gibbs_weight: need 1 <= k <= n");
  require(s > 0 && std::isfinite(s), "gibbs_weight: s must be > 0");
  double h = hermite_h(0.5 * (2 * n - k - 1), s, sctl);
  return (n - k) * std::numbers::ln2 + (k - 1) * std::log(s) + std::log(h);
}

// log of the Gibbs weight alpha^k t^{-n} I^{n - k alpha} f_alpha(t) / f_alpha(t).
inline double log_gibbs_weight(double alpha, int n, int k, double t, const QuadratureControl& ctl = {},
                               WeightRoute route = WeightRoute::quadrature) {
  require(alpha > 0 && alpha < 1, "gibbs_weight: alpha must lie in (0,1)");
  require(n >= 1 && k >= 1 && k <= n, "gibbs_weight: need 1 <= k <= n");
  require(t > 0 && std::isfinite(t), "gibbs_weight: t must be > 0");
  if (n == 1) return 0.0;
  bool hermite = route == WeightRoute::hermite || (route == WeightRoute::automatic && detail::is_half(alpha));
  if (hermite) {
    require(detail::is_half(alpha), "gibbs_weight: the Hermite route needs alpha = 1/2");
    return log_gibbs_weight_hermite(n, k, 1.0 / std::sqrt(2.0 * t));
  }
  return k * std::log(alpha) - n * std::log(t) + log_frac_integral(alpha, n - k * alpha, t, ctl) -
         log_stable_pdf(alpha, t, ctl);
}

inline double gibbs_weight(double alpha, int n, int k, double t, const QuadratureControl& ctl = {},
                           WeightRoute route = WeightRoute::quadrature) {
  return std::exp(log_gibbs_weight(alpha, n, k, t, ctl, route));
}

// f^{(nu)}_{alpha,omega}(t): density of S_{alpha,omega} / beta_{omega,nu}.
inline double cond_density(double alpha, double nu, double omega, double t, const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "cond_density: alpha must lie in (0,1)");
  require(nu > 0 && omega > 0, "cond_density: nu and omega must be > 0");
  require(t > 0 && std::isfinite(t), "cond_density: t must be > 0");
  double lc = std::log(alpha) + detail::lgam(nu + omega) - detail::lgam(omega / alpha);
  return std::exp(lc - (nu + omega) * std::log(t) + log_frac_integral(alpha, nu, t, ctl));
}

// j-th size-biased exponentially tilted stable density
//   t^j e^{lambda^alpha - lambda t} f_alpha(t) / sum_l alpha^l S_alpha(j,l) lambda^{l alpha - j}.
inline double sizebiased_gengamma_pdf(double alpha, int j, double lambda, double t, const QuadratureControl& ctl = {}) {
  require(alpha > 0 && alpha < 1, "sizebiased_gengamma_pdf: alpha must lie in (0,1)");
  require(j >= 0, "sizebiased_gengamma_pdf: j must be >= 0");
  require(lambda > 0 && std::isfinite(lambda), "sizebiased_gengamma_pdf: lambda must be > 0");
  require(t > 0 && std::isfinite(t), "sizebiased_gengamma_pdf: t must be > 0");
  double log_norm = 0.0;
  if (j >= 1) {
    StirlingTable st(alpha, j);
    log_norm = -std::numeric_limits<double>::infinity();
    for (int l = 1; l <= j; ++l)
      log_norm = detail::log_add_exp(log_norm, l * std::log(alpha) + st.log_value(j, l) + (l * alpha - j) * std::log(lambda));
  }
  return std::exp(j * std::log(t) + std::pow(lambda, alpha) - lambda * t + log_stable_pdf(alpha, t, ctl) - log_norm);
}

}  // namespace gibbs

#endif

#ifndef GIBBS_QUADRATURE_HPP
#define GIBBS_QUADRATURE_HPP

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gibbs/errors.hpp"

namespace gibbs {

struct QuadratureControl {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 200;

  void validate() const {
    require(std::isfinite(abs_tol) && abs_tol > 0, "QuadratureControl: abs_tol must be > 0");
    require(std::isfinite(rel_tol) && rel_tol > 0, "QuadratureControl: rel_tol must be > 0");
    require(max_subdivisions >= 1, "QuadratureControl: max_subdivisions must be >= 1");
  }
  unsigned max_depth() const {
    unsigned d = 0;
    while ((1 << d) < max_subdivisions && d < 30) ++d;
    return d;
  }
};

namespace detail {

// Adaptive 61-point Gauss-Kronrod on [a,b] (b may be +inf).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureControl& ctl, const char* what) {
  double err = 0, l1 = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, ctl.max_depth(),
                                                                           0.1 * ctl.rel_tol, &err, &l1);
  if (!std::isfinite(v) || !(err <= std::max(ctl.abs_tol, ctl.rel_tol * l1)))
    throw numeric_error(std::string(what) + ": quadrature did not reach tolerance", v, err);
  return v;
}

// Sum of integrals over consecutive panels [pts[i], pts[i+1]].
template <class F, class Pts>
double integrate_panels(F&& f, const Pts& pts, const QuadratureControl& ctl, const char* what) {
  double total = 0, err_total = 0, l1_total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(pts[i + 1] > pts[i])) continue;
    // mapped onto [0,1]: the error estimate misbehaves on very short intervals
    const double lo = pts[i], len = pts[i + 1] - pts[i];
    auto g = [&](double u) { return f(lo + len * u); };
    double err = 0, l1 = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, 1.0, ctl.max_depth(),
                                                                             0.1 * ctl.rel_tol, &err, &l1);
    total += len * v;
    err_total += len * err;
    l1_total += len * l1;
  }
  if (!std::isfinite(total) || !(err_total <= std::max(ctl.abs_tol, ctl.rel_tol * l1_total)))
    throw numeric_error(std::string(what) + ": quadrature did not reach tolerance", total, err_total);
  return total;
}

// Smallest x in [lo,hi] with pred(x) true, pred monotone false->true.
template <class P>
double bisect(P&& pred, double lo, double hi, int iters = 80) {
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail
}  // namespace gibbs

#endif

#ifndef GIBBS_DETAIL_SERIES_HPP
#define GIBBS_DETAIL_SERIES_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include <quadmath.h>

#include "gibbs/errors.hpp"

namespace gibbs {

// Truncation policy shared by every Mittag-Leffler type series.
struct SeriesControl {
  std::size_t max_terms = 100000;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;

  void validate() const {
    require(max_terms >= 1, "SeriesControl: max_terms must be >= 1");
    require(std::isfinite(abs_tol) && abs_tol > 0, "SeriesControl: abs_tol must be finite and > 0");
    require(std::isfinite(rel_tol) && rel_tol > 0, "SeriesControl: rel_tol must be finite and > 0");
  }
};

namespace detail {

using quad = __float128;

inline double lgam(double x) {
  int s;
  return ::lgamma_r(x, &s);
}
inline quad lgam(quad x) { return ::lgammaq(x); }
inline double xexp(double x) { return std::exp(x); }
inline quad xexp(quad x) { return ::expq(x); }
inline double xlog(double x) { return std::log(x); }
inline quad xlog(quad x) { return ::logq(x); }
inline double xabs(double x) { return std::fabs(x); }
inline quad xabs(quad x) { return ::fabsq(x); }

template <class R>
constexpr double unit_roundoff();
template <>
constexpr double unit_roundoff<double>() { return 1.1102230246251565e-16; }
template <>
constexpr double unit_roundoff<quad>() { return 9.62964972193617926528e-35; }

inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// sign 0 marks a vanishing term; last means every later term vanishes too.
template <class R>
struct Term {
  R log_abs = 0;
  int sign = 1;
  double scale = 0;
  bool last = false;
};

struct SeriesOutcome {
  double value = 0;
  double error = 0;
  std::size_t terms = 0;
  bool converged = false;
};

// Neumaier-compensated sum of pairs of terms; the tail bound uses the observed
// term ratio once the magnitudes have started to decrease.
template <class R, class F>
SeriesOutcome sum_series(F& term, const SeriesControl& ctl) {
  R sum = 0, comp = 0, pending = 0;
  bool have_pending = false;
  double round_err = 0;
  double prev_log = -std::numeric_limits<double>::infinity();
  double tail = std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t l = 0;

  auto add = [&](R v) {
    R t = sum + v;
    if (xabs(sum) >= xabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  };

  for (; l < ctl.max_terms; ++l) {
    Term<R> t = term(R(0), l);
    R v = 0;
    if (t.sign != 0) {
      v = t.sign > 0 ? xexp(t.log_abs) : -xexp(t.log_abs);
      round_err += static_cast<double>(xabs(v)) * unit_roundoff<R>() * (4.0 + t.scale);
    }
    if (have_pending) {
      add(pending + v);
      have_pending = false;
    } else {
      pending = v;
      have_pending = true;
    }
    if (t.last) {
      tail = 0;
      converged = true;
      ++l;
      break;
    }
    if (t.sign == 0) continue;
    double la = static_cast<double>(t.log_abs);
    if (l > 0 && la < prev_log) {
      double ratio = std::exp(la - prev_log);
      double av = std::exp(la);
      tail = av * ratio / (1.0 - ratio);
      double cur = std::fabs(static_cast<double>(sum + comp + (have_pending ? pending : R(0))));
      if (tail <= std::max(ctl.abs_tol, ctl.rel_tol * cur) * 0.5) {
        converged = true;
        ++l;
        break;
      }
    }
    prev_log = la;
  }
  if (have_pending) add(pending);
  SeriesOutcome out;
  out.value = static_cast<double>(sum + comp);
  out.error = round_err + (converged ? tail : std::numeric_limits<double>::infinity());
  out.terms = l;
  out.converged = converged;
  return out;
}

// Sums in double first; when cancellation eats the accuracy budget the same
// terms are re-evaluated in __float128.
template <class F>
double sum_alternating(F&& term, const SeriesControl& ctl, const char* what) {
  ctl.validate();
  auto accept = [&](const SeriesOutcome& r) {
    return r.converged && std::isfinite(r.value) && std::isfinite(r.error) &&
           r.error <= std::max(ctl.abs_tol, ctl.rel_tol * std::fabs(r.value));
  };
  SeriesOutcome r = sum_series<double>(term, ctl);
  if (accept(r)) return r.value;
  SeriesOutcome q = sum_series<quad>(term, ctl);
  if (accept(q)) return q.value;
  throw numeric_error(std::string(what) + ": series did not reach tolerance", q.value, q.error);
}

}  // namespace detail
}  // namespace gibbs

#endif

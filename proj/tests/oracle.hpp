// Independent reference computations for the tests. Nothing here calls into the library.
#ifndef GIBBS_TESTS_ORACLE_HPP
#define GIBBS_TESTS_ORACLE_HPP

#include <cmath>
#include <map>
#include <vector>

namespace oracle {

// All set partitions of [n] as restricted growth strings.
inline const std::vector<std::vector<int>>& set_partitions(int n) {
  static std::map<int, std::vector<std::vector<int>>> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::vector<std::vector<int>> out;
  std::vector<int> a(n, 0);
  auto rec = [&](auto&& self, int i, int m) -> void {
    if (i == n) {
      out.push_back(a);
      return;
    }
    for (int b = 0; b <= m + 1; ++b) {
      a[i] = b;
      self(self, i + 1, std::max(m, b));
    }
  };
  if (n >= 1) rec(rec, 1, 0);
  return memo[n] = out;
}

inline std::vector<int> sizes_of(const std::vector<int>& rgs) {
  int k = 0;
  for (int b : rgs) k = std::max(k, b + 1);
  std::vector<int> s(k, 0);
  for (int b : rgs) ++s[b];
  return s;
}

inline long double rising(long double x, int n) {
  long double r = 1;
  for (int i = 0; i < n; ++i) r *= x + i;
  return r;
}

inline long double binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// S_alpha(n,k) = (alpha^k k!)^{-1} sum_j (-1)^j C(k,j) (-j alpha)_n
inline long double stirling_explicit(long double alpha, int n, int k) {
  long double s = 0, fact = 1;
  for (int j = 0; j <= k; ++j) s += ((j % 2) ? -1 : 1) * binom(k, j) * rising(-j * alpha, n);
  for (int i = 2; i <= k; ++i) fact *= i;
  return s / (std::pow(alpha, static_cast<long double>(k)) * fact);
}

// S_alpha(n,k) summed over set partitions, n small.
inline long double stirling_enumerated(long double alpha, int n, int k) {
  long double s = 0;
  for (const auto& p : set_partitions(n)) {
    auto sz = sizes_of(p);
    if (static_cast<int>(sz.size()) != k) continue;
    long double prod = 1;
    for (int m : sz) prod *= rising(1 - alpha, m - 1);
    s += prod;
  }
  return s;
}

// Pitman-Yor EPPF from the seating rule, multiplied out directly.
inline long double pd_eppf_direct(long double alpha, long double theta, const std::vector<int>& sizes) {
  int n = 0, k = static_cast<int>(sizes.size());
  for (int m : sizes) n += m;
  long double num = 1;
  for (int i = 1; i < k; ++i) num *= theta + i * alpha;
  for (int m : sizes) num *= rising(1 - alpha, m - 1);
  return num / rising(theta + 1, n - 1);
}

// Brownian closed forms.
inline double half_stable_pdf(double t) { return std::exp(-1 / (4 * t)) / (2 * std::sqrt(M_PI) * std::pow(t, 1.5)); }
// P(S_{1/2} <= t) = erfc(1/(2 sqrt t))
inline double half_stable_cdf(double t) { return t <= 0 ? 0.0 : std::erfc(0.5 / std::sqrt(t)); }
// S^{-1/2}_{1/2,0} has density e^{-z^2/4}/sqrt(pi): P(Z <= z) = erf(z/2)
inline double half_ml_cdf(double z) { return z <= 0 ? 0.0 : std::erf(0.5 * z); }
// Mills ratio h_{-1}(x) = (1 - Phi(x)) / phi(x)
inline double mills(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)) / (std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI)); }
// e^{x^2} erfc(x); std::erfc keeps full relative accuracy on the ranges tested
inline double erfcx(double x) {
  if (x < 25) return std::exp(x * x) * std::erfc(x);
  // asymptotic series, truncation error below 1e-13 here
  double u = 1 / (2 * x * x), s = 1, term = 1;
  for (int k = 1; k <= 6; ++k) {
    term *= -(2 * k - 1) * u;
    s += term;
  }
  return s / (x * std::sqrt(M_PI));
}

}  // namespace oracle

#endif

#ifndef GIBBS_VERIFY_HPP
#define GIBBS_VERIFY_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/beta.hpp>

#include "gibbs/eppf.hpp"
#include "gibbs/errors.hpp"
#include "gibbs/partition_samplers.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/samplers.hpp"
#include "gibbs/specfun.hpp"
#include "gibbs/stats.hpp"

namespace gibbs {

enum class TestKind { ks_one, ks_two, z_score, chi_square, residual };

inline const char* to_string(TestKind t) {
  switch (t) {
    case TestKind::ks_one: return "KS";
    case TestKind::ks_two: return "two-sample-KS";
    case TestKind::z_score: return "moment-z";
    case TestKind::chi_square: return "chi-square";
    case TestKind::residual: return "residual";
  }
  return "?";
}

inline constexpr double kSignificance = 1e-3;
inline constexpr double kResidualTolerance = 1e-9;

// Statistic and threshold of one run. A run made of m sub-tests reports max_i stat_i/crit_i
// against 1, with each crit_i taken at level 0.001/m.
struct TestOutcome {
  double statistic = 0;
  double threshold = 0;
  std::size_t n_used = 0;
};

using IdentityRunner = std::function<TestOutcome(std::size_t n, RngStream& rng, double perturb)>;

struct IdentitySpec {
  std::string id;
  std::string formula;
  TestKind test = TestKind::ks_two;
  std::vector<std::pair<std::string, double>> params;
  double control_perturb = 0;  // perturbation that must make the check fail
  IdentityRunner run;
};

struct IdentityReport {
  std::string id;
  std::string test;
  std::size_t n_samples = 0;
  double statistic = 0;
  double threshold = 0;
  bool pass = false;
  std::uint64_t seed = 0;
  double wall_time = 0;
  double perturb = 0;
  std::string error;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <class F>
std::vector<double> draws(std::size_t n, F&& f) {
  std::vector<double> v(n);
  for (auto& x : v) x = f();
  return v;
}

struct Part {
  double stat;
  std::function<double(double)> crit;  // critical value at a given level
};

inline Part ks2(const std::vector<double>& x, const std::vector<double>& y) {
  std::size_t a = x.size(), b = y.size();
  return {ks_two_sample(x, y), [a, b](double lv) { return ks_threshold_two(a, b, lv); }};
}

inline Part ks1(const std::vector<double>& x, const std::function<double(double)>& cdf) {
  std::size_t a = x.size();
  return {ks_one_sample(x, cdf), [a](double lv) { return ks_threshold_one(a, lv); }};
}

inline Part zpart(const RunningMoments& m, double target) {
  return {std::fabs(m.z(target)), [](double lv) { return z_critical(lv); }};
}

inline TestOutcome combine(const std::vector<Part>& parts, std::size_t n_used) {
  if (parts.size() == 1) return {parts[0].stat, parts[0].crit(kSignificance), n_used};
  double lv = kSignificance / static_cast<double>(parts.size()), worst = 0;
  for (const auto& p : parts) worst = std::max(worst, p.stat / p.crit(lv));
  return {worst, 1.0, n_used};
}

inline TestOutcome chi_outcome(const std::vector<double>& counts, const std::vector<double>& probs,
                               std::size_t n_used) {
  auto r = chi_square_test(counts, probs, kSignificance);
  return {r.statistic, r.threshold, n_used};
}

inline TestOutcome residual_outcome(double r) { return {r, kResidualTolerance, 0}; }

// E|B_1|^p
inline double abs_normal_moment(double p) {
  return std::exp(0.5 * p * std::numbers::ln2 + std::lgamma(0.5 * (p + 1))) / std::sqrt(std::numbers::pi);
}

// Draws a k-count histogram of n block counts.
template <class F>
std::vector<double> count_histogram(std::size_t n, int kmax, F&& draw_k) {
  std::vector<double> c(kmax + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    int k = draw_k();
    require(k >= 0 && k <= kmax, "count_histogram: value out of range");
    c[k] += 1;
  }
  return c;
}

// Catalog ------------------------------------------------------------------

inline std::vector<IdentitySpec> build_catalog() {
  std::vector<IdentitySpec> cat;

  {
    const double a = 0.6, w = 0.7, nu = 1.3;
    cat.push_back({"jamesid",
                   "tilde_S(alpha,nu,G_{w/alpha}^{1/alpha}) = S_{alpha,w}/beta_{w,nu} = "
                   "S_{alpha,w+nu}/beta^{1/alpha}_{w/alpha,nu/alpha}",
                   TestKind::ks_two,
                   {{"alpha", a}, {"omega", w}, {"nu", nu}},
                   0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double lam = std::exp(rng.log_gamma(w / a) / a);
                       return std::log(sample_tilde_s(a, nu, lam, rng));
                     });
                     const double nu2 = nu + pert;
                     auto y = draws(n, [&] {
                       return detail::log_tilted_variate(a, w + nu2, rng) - rng.log_beta(w / a, nu2 / a) / a;
                     });
                     auto z = draws(n, [&] { return detail::log_tilted_variate(a, w, rng) - rng.log_beta(w, nu2); });
                     return combine({ks2(x, y), ks2(x, z)}, n);
                   }});
  }
  {
    const double a = 0.6, w = 0.7, nu = 1.3;
    cat.push_back({"jamesid2",
                   "beta^alpha_{w,nu}/S^alpha_{alpha,w} = beta_{w/alpha,nu/alpha}/S^alpha_{alpha,w+nu}",
                   TestKind::ks_two,
                   {{"alpha", a}, {"omega", w}, {"nu", nu}},
                   0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       return a * (rng.log_beta(w, nu) - detail::log_tilted_variate(a, w, rng));
                     });
                     auto y = draws(n, [&] {
                       return rng.log_beta(w / a, (nu + pert) / a) - a * detail::log_tilted_variate(a, w + nu + pert, rng);
                     });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double a = 0.5, th = 1.0;
    const int m = 5;
    cat.push_back({"betaKid",
                   "prod_{j=1}^n beta_{(theta+alpha+j-1)/alpha,(1-alpha)/alpha} = "
                   "beta_{theta/alpha+K_n, n/alpha-K_n}, K_n ~ PD(alpha,theta)",
                   TestKind::ks_two,
                   {{"alpha", a}, {"theta", th}, {"n", m}},
                   1.0,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double s = 0;
                       for (int j = 1; j <= m; ++j) s += rng.log_beta((th + a + j - 1) / a, (1 - a) / a);
                       return s;
                     });
                     auto y = draws(n, [&] {
                       int k = crp_block_count(a, th + pert, m, rng);
                       return rng.log_beta(th / a + k, m / a - k);
                     });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double th = 0.3;
    const int m = 4;
    cat.push_back({"beta-half", "prod_{j=1}^n beta^2_{2(theta+j)-1,1} = beta_{theta+1/2,n}", TestKind::ks_two,
                   {{"theta", th}, {"n", m}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double s = 0;
                       for (int j = 1; j <= m; ++j) s += 2 * rng.log_beta(2 * (th + j) - 1, 1);
                       return s;
                     });
                     auto y = draws(n, [&] { return rng.log_beta(th + pert + 0.5, m); });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double th = 0.3;
    const int m = 4;
    cat.push_back({"beta-third", "prod_{j=1}^n beta^3_{3(theta+j)-2,2} = beta_{theta+1/3,n} beta_{theta+2/3,n}",
                   TestKind::ks_two, {{"theta", th}, {"n", m}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double s = 0;
                       for (int j = 1; j <= m; ++j) s += 3 * rng.log_beta(3 * (th + j) - 2, 2);
                       return s;
                     });
                     const double t2 = th + pert;
                     auto y = draws(n, [&] { return rng.log_beta(t2 + 1.0 / 3, m) + rng.log_beta(t2 + 2.0 / 3, m); });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double th = 0.3;
    const int m = 4;
    cat.push_back({"beta-quarter",
                   "prod_{j=1}^n beta^4_{4(theta+j-1)+1,3} = beta_{theta+1/4,n} beta_{theta+1/2,n} beta_{theta+3/4,n} "
                   "= beta_{theta+1/2,n} beta^2_{2theta+1/2,2n}",
                   TestKind::ks_two, {{"theta", th}, {"n", m}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double s = 0;
                       for (int j = 1; j <= m; ++j) s += 4 * rng.log_beta(4 * (th + j - 1) + 1, 3);
                       return s;
                     });
                     const double t2 = th + pert;
                     auto y = draws(n, [&] {
                       return rng.log_beta(t2 + 0.25, m) + rng.log_beta(t2 + 0.5, m) + rng.log_beta(t2 + 0.75, m);
                     });
                     auto z = draws(n, [&] { return rng.log_beta(t2 + 0.5, m) + 2 * rng.log_beta(2 * t2 + 0.5, 2 * m); });
                     return combine({ks2(x, y), ks2(x, z)}, n);
                   }});
  }
  {
    const double a1 = 0.5, a2 = 2.0 / 3, a3 = 0.75, th = 0.5;
    cat.push_back({"stable-compose",
                   "S_{a1 a2 a3,theta} = S_{a1,theta} S^{1/a1}_{a2,theta/a1} S^{1/(a1 a2)}_{a3,theta/(a1 a2)}",
                   TestKind::ks_two, {{"alpha1", a1}, {"alpha2", a2}, {"alpha3", a3}, {"theta", th}}, -0.1,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     const double at = a1 * a2 * a3;
                     auto x = draws(n, [&] { return detail::log_tilted_variate(at, th, rng); });
                     const double b3 = a3 + pert;
                     auto y = draws(n, [&] {
                       return detail::log_tilted_variate(a1, th, rng) +
                              detail::log_tilted_variate(a2, th / a1, rng) / a1 +
                              detail::log_tilted_variate(b3, th / (a1 * a2), rng) / (a1 * a2);
                     });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double a = 0.5, d = 2.0 / 3, th = 0.4;
    cat.push_back({"coag-local",
                   "S^{-alpha delta}_{alpha delta,theta} = S^{-alpha delta}_{alpha,theta} S^{-delta}_{delta,theta/alpha}",
                   TestKind::ks_two, {{"alpha", a}, {"delta", d}, {"theta", th}}, 1.0,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] { return std::log(sample_ml(a * d, th, rng)); });
                     auto y = draws(n, [&] {
                       return d * std::log(sample_ml(a, th, rng)) + std::log(sample_ml(d, th / a + pert, rng));
                     });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double a = 0.45, th = 0.7;
    const int m = 6;
    cat.push_back({"skn",
                   "S_{alpha,theta} = S_{alpha,theta+K_n alpha}/beta_{theta+K_n alpha,n-K_n alpha} = "
                   "S_{alpha,theta+n}/beta^{1/alpha}_{theta/alpha+K_n,n/alpha-K_n}",
                   TestKind::ks_two, {{"alpha", a}, {"theta", th}, {"n", m}}, 1.0,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] { return detail::log_tilted_variate(a, th, rng); });
                     auto y = draws(n, [&] {
                       int k = crp_block_count(a, th + pert, m, rng);
                       return detail::log_tilted_variate(a, th + k * a, rng) - rng.log_beta(th + k * a, m - k * a);
                     });
                     auto z = draws(n, [&] {
                       int k = crp_block_count(a, th + pert, m, rng);
                       return detail::log_tilted_variate(a, th + m, rng) - rng.log_beta(th / a + k, m / a - k) / a;
                     });
                     return combine({ks2(x, y), ks2(x, z)}, n);
                   }});
  }
  {
    const double a = 0.6, th = 0.3;
    cat.push_back({"size-biased-n1",
                   "S_{alpha,theta} = tilde_S(alpha,1-alpha,G^{1/alpha}_{(theta+alpha)/alpha}) = "
                   "S_{alpha,theta+1}/beta^{1/alpha}_{(theta+alpha)/alpha,(1-alpha)/alpha}",
                   TestKind::ks_two, {{"alpha", a}, {"theta", th}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] { return detail::log_tilted_variate(a, th, rng); });
                     const double nu = 1 - a + pert;
                     auto y = draws(n, [&] {
                       double lam = std::exp(rng.log_gamma((th + a) / a) / a);
                       return std::log(sample_tilde_s(a, nu, lam, rng));
                     });
                     auto z = draws(n, [&] {
                       return detail::log_tilted_variate(a, th + a + nu, rng) - rng.log_beta((th + a) / a, nu / a) / a;
                     });
                     return combine({ks2(x, y), ks2(x, z)}, n);
                   }});
  }
  {
    const double a = 0.6, nu = 0.8, lam = 1.5, yv = 1.0;
    cat.push_back({"tilde-s-laplace",
                   "E exp(-y tilde_S(alpha,nu,lambda)) = exp(lambda^alpha - (lambda+y)^alpha) (1+y/lambda)^{-nu}",
                   TestKind::z_score, {{"alpha", a}, {"nu", nu}, {"lambda", lam}, {"y", yv}}, 0.2,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     RunningMoments m;
                     for (std::size_t i = 0; i < n; ++i) m.add(std::exp(-yv * sample_tilde_s(a, nu, lam, rng)));
                     const double y2 = yv + pert;
                     double target = std::exp(std::pow(lam, a) - std::pow(lam + y2, a) - nu * std::log1p(y2 / lam));
                     return combine({zpart(m, target)}, n);
                   }});
  }
  {
    const double a = 0.5, d = 0.5, th = 0.7;
    const int m = 8;
    cat.push_back({"frag-duality-Kn",
                   "K_n = K^{(2)}(K^{(1)}_n) with CRP(alpha,theta) then CRP(delta,theta/alpha) ~ PD(alpha delta,theta) "
                   "block count",
                   TestKind::chi_square, {{"alpha", a}, {"delta", d}, {"theta", th}, {"n", m}}, 1.0,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto c = count_histogram(n, m, [&] {
                       SetPartition p = crp(a, th, m, rng);
                       return coag_partition(p, d, th / a + pert, rng).k();
                     });
                     auto pmf = blocks_pmf(a * d, th, m);
                     return chi_outcome(c, pmf.p, n);
                   }});
  }
  {
    const double a = 0.5, d = 0.5, th = 0.5;
    const int m = 4, ell = 2;
    cat.push_back({"cond-skn-frag",
                   "S_{alpha delta,theta} | K^{(1)}_n = l  =  S_{alpha,theta+n}/beta^{1/alpha}_{theta/alpha+l,n/alpha-l} "
                   "S^{1/alpha}_{delta,theta/alpha}",
                   TestKind::ks_two, {{"alpha", a}, {"delta", d}, {"theta", th}, {"n", m}, {"l", ell}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     std::vector<double> x;
                     x.reserve(n);
                     std::size_t tries = 0;
                     while (x.size() < n) {
                       if (++tries > 1000 * n) throw numeric_error("cond-skn-frag: conditioning event too rare");
                       auto dr = sample_stable_with_partition(a, th, m, rng);
                       if (dr.partition.k() != ell) continue;
                       x.push_back(std::log(dr.s) + detail::log_tilted_variate(d, th / a, rng) / a);
                     }
                     const double t2 = th + pert;
                     auto y = draws(n, [&] {
                       return detail::log_tilted_variate(a, t2 + m, rng) - rng.log_beta(t2 / a + ell, m / a - ell) / a +
                              detail::log_tilted_variate(d, t2 / a, rng) / a;
                     });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double a = 0.6, th = 0.3, th_h = 0.2;
    const int R = 3;
    cat.push_back({"mlmc-marginals",
                   "Z_r ~ S^{-alpha}_{alpha,theta+r} along the chain Z_r = Z_{r+1} beta_{(theta+r+alpha)/alpha,"
                   "(1-alpha)/alpha}; alpha = 1/2: Z_r = 2 sqrt(G_{theta+1/2} + e_1 + ... + e_r)",
                   TestKind::ks_two, {{"alpha", a}, {"theta", th}, {"R", R}, {"theta_half", th_h}}, 0.5,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     std::vector<double> z0(n), z1(n), h2(n);
                     for (std::size_t i = 0; i < n; ++i) {
                       auto c = mlmc_chain(a, th, R, rng);
                       z0[i] = c[0];
                       z1[i] = c[1];
                       h2[i] = mlmc_chain(0.5, th_h, 2, rng)[2];
                     }
                     auto y0 = draws(n, [&] { return sample_ml(a, th + pert, rng); });
                     auto y1 = draws(n, [&] { return sample_ml(a, th + 1 + pert, rng); });
                     auto yh = draws(n, [&] { return sample_ml(0.5, th_h + 2 + pert, rng); });
                     return combine({ks2(z0, y0), ks2(z1, y1), ks2(h2, yh)}, n);
                   }});
  }
  {
    const double th = 1.5, thp = 0.5;
    cat.push_back({"ml-projection",
                   "Z | lambda with density prop. to exp(-lambda z) g_{1/2,theta}(z), mixed over "
                   "lambda ~ G_{2(theta-theta')} S^{1/2}_{1/2,theta'}, is ML(1/2,theta')",
                   TestKind::ks_two, {{"alpha", 0.5}, {"theta", th}, {"theta_prime", thp}}, 0.4,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     // ML(1/2,theta) tilted by exp(-lambda z) is sqrt2 L with L a local time at sqrt2 lambda
                     auto x = draws(n, [&] {
                       double lam = rng.gamma(2 * (th - thp)) / sample_ml(0.5, thp, rng);
                       return std::numbers::sqrt2 * sample_local_time_half(th, std::numbers::sqrt2 * lam, rng);
                     });
                     auto y = draws(n, [&] { return sample_ml(0.5, thp + pert, rng); });
                     return combine({ks2(x, y)}, n);
                   }});
  }
  {
    const double th = 1.0, eta = 0.2;
    cat.push_back({"localtime-frag-beta",
                   "P1^{(theta+1/2)}(sqrt2 M^{(eta)}_{1/2,theta}) ~ beta_{eta+1/2,theta-eta}, "
                   "M^{(eta)}_{1/2,theta} = G_{2(theta-eta)} S^{1/2}_{1/2,eta}",
                   TestKind::ks_one, {{"theta", th}, {"eta", eta}}, 0.3,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double lam = std::numbers::sqrt2 * rng.gamma(2 * (th - eta)) / sample_ml(0.5, eta, rng);
                       return sample_biased_brownian_stick(lam, th + 0.5, rng);
                     });
                     boost::math::beta_distribution<double> B(eta + pert + 0.5, th - eta - pert);
                     return combine({ks1(x, [&](double p) { return boost::math::cdf(B, std::clamp(p, 0.0, 1.0)); })}, n);
                   }});
  }
  {
    const double lam = 0.7;
    cat.push_back({"lfr-mixture",
                   "L_{1,1/2} sqrt(B^2/(B^2+lambda^2)) = L_{1,(2-K2)/2} sqrt(P1^{((3-K2)/2)}(lambda)), "
                   "= L^{(0)}_{1/2,(2-K2)/2}(lambda), P(K2=1) = h_{-2}(lambda); survival exp(-x^2/2 - lambda x)",
                   TestKind::ks_two, {{"lambda", lam}}, 0.4,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto x = draws(n, [&] {
                       double b = rng.normal();
                       return std::sqrt(2 * rng.gamma(1.0)) * std::sqrt(b * b / (b * b + lam * lam));
                     });
                     const double l2 = lam + pert, p1 = hermite_h(1.0, l2);
                     auto y = draws(n, [&] {
                       bool one = rng.uniform() < p1;
                       double th = one ? 0.5 : 0.0;
                       return std::sqrt(2 * rng.gamma(th + 0.5)) * std::sqrt(sample_biased_brownian_stick(l2, th + 0.5, rng));
                     });
                     auto z = draws(n, [&] {
                       return sample_local_time_half(rng.uniform() < p1 ? 0.5 : 0.0, l2, rng);
                     });
                     auto lfr = [&](double v) { return v <= 0 ? 0.0 : -std::expm1(-0.5 * v * v - lam * v); };
                     return combine({ks2(x, y), ks2(x, z), ks1(y, lfr)}, n);
                   }});
  }
  {
    const std::vector<std::pair<double, double>> grid = {{0.5, 0.0}, {0.5, 0.5}};
    const int m = 4096;
    const std::size_t reps = 10000;
    cat.push_back({"kn-limit",
                   "n^{-alpha} K_n under CRP(alpha,theta) at n = 4096 against ML(alpha,theta) = S^{-alpha}_{alpha,theta}",
                   TestKind::ks_two, {{"alpha", 0.5}, {"theta_1", 0.0}, {"theta_2", 0.5}, {"n", m}, {"replicates", reps}},
                   1.0,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     std::size_t r = std::min(n, reps);
                     std::vector<Part> parts;
                     for (auto [a, th] : grid) {
                       const double sc = std::pow(static_cast<double>(m), -a);
                       auto x = draws(r, [&] { return sc * crp_block_count(a, th, m, rng); });
                       auto y = draws(r, [&] { return sample_ml(a, th + pert, rng); });
                       parts.push_back(ks2(x, y));
                     }
                     return combine(parts, r);
                   }});
  }
  {
    const double a = 0.6, th = 0.3, lam = 1.2;
    cat.push_back({"poisson-switching",
                   "P(N(lambda)=j) = lambda^j E[S^{-(theta+j alpha)}] / (j! E[S^{-theta}]) "
                   "E^{(theta/alpha+j+1)}_{alpha,theta+j alpha+1}(-lambda), rate S^{-alpha}_{alpha,theta}",
                   TestKind::chi_square, {{"alpha", a}, {"theta", th}, {"lambda", lam}}, 0.15,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     const int J = 40;
                     auto c = count_histogram(n, J + 1, [&] {
                       auto d = mixed_poisson([&](RngStream& r) { return sample_ml(a, th, r); }, lam, rng);
                       return static_cast<int>(std::min<std::size_t>(d.count(), J + 1));
                     });
                     const double l2 = lam + pert;
                     std::vector<double> p(J + 2, 0.0);
                     double acc = 0;
                     for (int j = 0; j <= J; ++j) {
                       double lp = j * std::log(l2) + log_neg_moment_stable(a, th + j * a) -
                                   log_neg_moment_stable(a, th) - std::lgamma(j + 1.0);
                       p[j] = std::exp(lp) * gen_ml(a, th + (j + 1) * a, 1 - a, l2);
                       acc += p[j];
                     }
                     p[J + 1] = std::max(0.0, 1 - acc);
                     return chi_outcome(c, p, n);
                   }});
  }
  {
    const double th = 0.3, lam = 0.8;
    cat.push_back({"structural-moments",
                   "E[P1(lambda)^{theta+1/2}] = E|B_1|^{2theta+1} h_{-(2theta+1)}(lambda) = "
                   "E exp(-lambda sqrt(2 G_{theta+1/2}))",
                   TestKind::z_score, {{"theta", th}, {"lambda", lam}}, 0.1,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     RunningMoments m1, m2;
                     for (std::size_t i = 0; i < n; ++i) {
                       double p = brownian_cond_sticks(lam, 1, rng)[0];
                       m1.add(std::pow(p, th + 0.5));
                       m2.add(std::exp(-lam * std::sqrt(2 * rng.gamma(th + 0.5))));
                     }
                     double target = abs_normal_moment(2 * th + 1) * hermite_h(th + 0.5, lam + pert);
                     return combine({zpart(m1, target), zpart(m2, target)}, n);
                   }});
  }
  {
    const std::vector<std::pair<double, double>> ad = {{0.5, 0.5}, {2.0 / 3, 0.5}, {0.5, 1.0 / 3}};
    const int nmax = 12;
    cat.push_back({"stirling-composition",
                   "S_{alpha delta}(n,k) = sum_l alpha^{l-k} S_alpha(n,l) S_delta(l,k)", TestKind::residual,
                   {{"n_max", nmax}}, 1e-3,
                   [=](std::size_t, RngStream&, double pert) {
                     double worst = 0;
                     for (auto [a, d] : ad) {
                       StirlingTable sa(a, nmax), sd(d, nmax), sad(a * (d + pert), nmax);
                       for (int n = 1; n <= nmax; ++n)
                         for (int k = 1; k <= n; ++k) {
                           double acc = detail::ninf;
                           for (int l = k; l <= n; ++l)
                             acc = detail::log_add_exp(acc, (l - k) * std::log(a) + sa.log_value(n, l) + sd.log_value(l, k));
                           worst = std::max(worst, std::fabs(std::expm1(acc - sad.log_value(n, k))));
                         }
                     }
                     return residual_outcome(worst);
                   }});
  }
  {
    const std::vector<std::array<double, 3>> grid = {{0.5, 0.5, 0.7}, {2.0 / 3, 0.5, 1.3}, {0.5, 1.0 / 3, 0.2}};
    const int kmax = 12;
    cat.push_back({"pitman-moments",
                   "sum_j P^{(k)}_{delta,0}(j) Gamma(theta/(alpha delta)+j)/(Gamma(theta/(alpha delta)+1) Gamma(j)) = "
                   "Gamma(theta/alpha+k)/(Gamma(theta/alpha+1) Gamma(k))",
                   TestKind::residual, {{"k_max", kmax}}, 1e-3,
                   [=](std::size_t, RngStream&, double pert) {
                     double worst = 0;
                     for (auto [a, d, th] : grid) {
                       const double c = th / (a * d), e = (th + pert) / a;
                       for (int k = 1; k <= kmax; ++k) {
                         BlockCountPmf p = blocks_pmf(d, 0, k);
                         double lhs = 0;
                         for (int j = 1; j <= k; ++j)
                           lhs += p.p[j] * std::exp(std::lgamma(c + j) - std::lgamma(c + 1) - std::lgamma(j * 1.0));
                         double rhs = std::exp(std::lgamma(e + k) - std::lgamma(e + 1) - std::lgamma(k * 1.0));
                         worst = std::max(worst, std::fabs(lhs / rhs - 1));
                       }
                     }
                     return residual_outcome(worst);
                   }});
  }
  {
    const std::vector<std::array<double, 3>> grid = {{0.3, 0.2, 0.5}, {0.5, 1.5, 2.0}, {0.7, 0.2, 2.0}, {0.5, 0.0, 1.0}};
    const int nmax = 10;
    cat.push_back({"mittag-decomposition",
                   "sum_k P^{(n)}_{alpha,theta}(k) E^{(theta/alpha+k)}_{alpha,theta+n}(-lambda) = "
                   "E^{(theta/alpha+1)}_{alpha,theta+1}(-lambda)",
                   TestKind::residual, {{"n_max", nmax}}, 1e-3,
                   [=](std::size_t, RngStream&, double pert) {
                     double worst = 0;
                     for (auto [a, th, lam] : grid) {
                       double rhs = gen_ml(a, th + a, 1 - a, lam + pert);
                       for (int n = 1; n <= nmax; ++n) {
                         BlockCountPmf p = blocks_pmf(a, th, n);
                         double lhs = 0;
                         for (int k = 1; k <= n; ++k) lhs += p.p[k] * gen_ml(a, th + k * a, n - k * a, lam);
                         worst = std::max(worst, std::fabs(lhs - rhs));
                       }
                     }
                     return residual_outcome(worst);
                   }});
  }
  {
    const std::vector<double> thetas = {0.0, 0.3, 1.0, 2.5};
    const std::vector<double> lams = {0.25, 1.0, 3.0};
    cat.push_back({"mittag-hermite",
                   "E^{(2theta+1)}_{1/2,theta+1}(-lambda/sqrt2) = E|B_1|^{2theta+1} h_{-(2theta+1)}(lambda)",
                   TestKind::residual, {{"grid_points", 12}}, 1e-3,
                   [=](std::size_t, RngStream&, double pert) {
                     double worst = 0;
                     for (double th : thetas)
                       for (double lam : lams) {
                         double lhs = gen_ml(0.5, th + 0.5, 0.5, lam / std::numbers::sqrt2);
                         double rhs = abs_normal_moment(2 * th + 1) * hermite_h(th + 0.5, lam + pert);
                         worst = std::max(worst, std::fabs(lhs - rhs));
                       }
                     return residual_outcome(worst);
                   }});
  }
  {
    const double s = 1.0;
    const int m = 6;
    cat.push_back({"brownian-blocks",
                   "K_n of the paintbox over B^2-driven sticks given s has the Hermite Gibbs block-count law",
                   TestKind::chi_square, {{"s", s}, {"n", m}}, 0.3,
                   [=](std::size_t n, RngStream& rng, double pert) {
                     auto c = count_histogram(n, m, [&] { return brownian_cond_partition(s, m, rng).k(); });
                     return chi_outcome(c, blocks_pmf_hermite(s + pert, m).p, n);
                   }});
  }
  return cat;
}

}  // namespace detail

inline const std::vector<IdentitySpec>& list_identities() {
  static const std::vector<IdentitySpec> cat = detail::build_catalog();
  return cat;
}

inline const IdentitySpec& find_identity(const std::string& id) {
  for (const auto& s : list_identities())
    if (s.id == id) return s;
  throw domain_error("unknown identity id: " + id);
}

inline IdentityReport run_identity(const std::string& id, std::size_t n_samples, std::uint64_t seed,
                                   double perturb = 0) {
  const IdentitySpec& spec = find_identity(id);
  require(n_samples >= 1000, "run_identity: n_samples must be >= 1000");
  IdentityReport r;
  r.id = spec.id;
  r.test = to_string(spec.test);
  r.seed = seed;
  r.perturb = perturb;
  RngStream rng(seed, detail::fnv1a(spec.id));
  auto t0 = std::chrono::steady_clock::now();
  TestOutcome o = spec.run(n_samples, rng, perturb);
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.n_samples = o.n_used;
  r.statistic = o.statistic;
  r.threshold = o.threshold;
  r.pass = std::isfinite(o.statistic) && o.statistic <= o.threshold;
  return r;
}

// Runs the catalog entries whose id contains filter (all when empty). Failures inside an
// identity are recorded in its report; the suite carries on. Reports come back in catalog order.
inline std::vector<IdentityReport> run_suite(const std::string& filter, std::size_t n_samples, std::uint64_t seed,
                                             unsigned jobs = 1, bool negative_controls = false) {
  std::vector<const IdentitySpec*> todo;
  for (const auto& s : list_identities())
    if (filter.empty() || s.id.find(filter) != std::string::npos) todo.push_back(&s);
  std::vector<IdentityReport> out(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < todo.size();) {
      const IdentitySpec& s = *todo[i];
      double pert = negative_controls ? s.control_perturb : 0.0;
      try {
        out[i] = run_identity(s.id, n_samples, seed, pert);
      } catch (const std::exception& e) {
        out[i].id = s.id;
        out[i].test = to_string(s.test);
        out[i].seed = seed;
        out[i].perturb = pert;
        out[i].pass = false;
        out[i].statistic = std::numeric_limits<double>::quiet_NaN();
        out[i].error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, todo.size()))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gibbs

#endif

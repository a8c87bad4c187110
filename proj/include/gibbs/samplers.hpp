#ifndef GIBBS_SAMPLERS_HPP
#define GIBBS_SAMPLERS_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/stabledist.hpp"

namespace gibbs {

inline constexpr long kSamplerIterationCap = 1000000;

namespace detail {

inline void check_alpha(double alpha, const char* what) {
  require(alpha > 0 && alpha < 1, std::string(what) + ": alpha must lie in (0,1)");
}

// log S_alpha by Kanter's representation (K(U)/E)^{(1-alpha)/alpha}, U uniform on (0, pi).
inline double log_stable_variate(double alpha, RngStream& rng) {
  double u = std::numbers::pi * rng.uniform();
  double lk = (std::log(std::sin(alpha * u)) - std::log(std::sin(u))) / (1 - alpha) +
              std::log(std::sin((1 - alpha) * u)) - std::log(std::sin(alpha * u));
  return (1 - alpha) / alpha * (lk - std::log(rng.exponential()));
}

// Generalized gamma subordinator at time y: density e^{y - t} y^{-1/alpha} f_alpha(t y^{-1/alpha}).
// Split into ceil(y) pieces, each drawn by rejection from a scaled stable with acceptance e^{-x}.
inline double tau_variate(double alpha, double y, RngStream& rng) {
  if (y <= 0) return 0.0;
  long pieces = static_cast<long>(std::ceil(y));
  double scale = std::pow(y / static_cast<double>(pieces), 1.0 / alpha);
  double total = 0;
  long tries = 0;
  for (long i = 0; i < pieces; ++i) {
    for (;;) {
      if (++tries > kSamplerIterationCap) throw numeric_error("tau variate: rejection iteration cap exceeded");
      double x = scale * std::exp(log_stable_variate(alpha, rng));
      if (rng.uniform() <= std::exp(-x)) {
        total += x;
        break;
      }
    }
  }
  return total;
}

// Exact product for alpha = m/r: (m/S_{alpha,theta})^alpha = r prod beta^{1/r} prod G^{1/r}.
inline double log_tilted_rational(int m, int r, double theta, RngStream& rng) {
  double ly = std::log(static_cast<double>(r));
  for (int k = 1; k <= m - 1; ++k)
    ly += rng.log_beta(theta / m + static_cast<double>(k) / r, k * (1.0 / m - 1.0 / r)) / r;
  for (int k = m; k <= r - 1; ++k) ly += rng.log_gamma(theta / m + static_cast<double>(k) / r) / r;
  double alpha = static_cast<double>(m) / r;
  return std::log(static_cast<double>(m)) - ly / alpha;
}

inline double log_tilted_variate(double alpha, double theta, RngStream& rng) {
  if (theta == 0) return log_stable_variate(alpha, rng);
  StableIndex idx = StableIndex::of(alpha);
  if (idx.rational_form) return log_tilted_rational(idx.rational_form->first, idx.rational_form->second, theta, rng);
  if (theta < 0) return log_tilted_variate(alpha, theta + alpha, rng) - rng.log_beta(theta + alpha, 1 - alpha);
  // T = tau(G)/G^{1/alpha} with G ~ Gamma(theta/alpha)
  double lg = rng.log_gamma(theta / alpha);
  return std::log(tau_variate(alpha, std::exp(lg), rng)) - lg / alpha;
}

}  // namespace detail

inline double sample_stable(double alpha, RngStream& rng) {
  detail::check_alpha(alpha, "sample_stable");
  return std::exp(detail::log_stable_variate(alpha, rng));
}

// S_{alpha,theta}: density t^{-theta} f_alpha(t) / E[S_alpha^{-theta}].
inline double sample_tilted_stable(double alpha, double theta, RngStream& rng) {
  detail::check_alpha(alpha, "sample_tilted_stable");
  require(theta > -alpha, "sample_tilted_stable: theta must exceed -alpha");
  return std::exp(detail::log_tilted_variate(alpha, theta, rng));
}

// S_{alpha,theta}^{-alpha}
inline double sample_ml(double alpha, double theta, RngStream& rng) {
  detail::check_alpha(alpha, "sample_ml");
  require(theta > -alpha, "sample_ml: theta must exceed -alpha");
  return std::exp(-alpha * detail::log_tilted_variate(alpha, theta, rng));
}

// tau_alpha(lambda^alpha)/lambda: density e^{lambda^alpha - lambda t} f_alpha(t).
inline double sample_exp_tilted(double alpha, double lambda, RngStream& rng) {
  detail::check_alpha(alpha, "sample_exp_tilted");
  require(lambda > 0 && std::isfinite(lambda), "sample_exp_tilted: lambda must be > 0");
  return detail::tau_variate(alpha, std::pow(lambda, alpha), rng) / lambda;
}

// G_nu/lambda + tau_alpha(lambda^alpha)/lambda
inline double sample_tilde_s(double alpha, double nu, double lambda, RngStream& rng) {
  detail::check_alpha(alpha, "sample_tilde_s");
  require(nu > 0, "sample_tilde_s: nu must be > 0");
  require(lambda > 0 && std::isfinite(lambda), "sample_tilde_s: lambda must be > 0");
  return rng.gamma(nu) / lambda + sample_exp_tilted(alpha, lambda, rng);
}

// X_{alpha,theta} = S_alpha / S_{alpha,theta}, independent numerator and denominator.
inline double sample_lamperti(double alpha, double theta, RngStream& rng) {
  detail::check_alpha(alpha, "sample_lamperti");
  require(theta > -alpha, "sample_lamperti: theta must exceed -alpha");
  double num = detail::log_stable_variate(alpha, rng);
  return std::exp(num - detail::log_tilted_variate(alpha, theta, rng));
}

// (Z_0, ..., Z_R) with Z_r distributed as S^{-alpha}_{alpha,theta+r}, coupled so that Z_r <= Z_{r+1}.
inline std::vector<double> mlmc_chain(double alpha, double theta, int R, RngStream& rng) {
  detail::check_alpha(alpha, "mlmc_chain");
  require(theta > -alpha, "mlmc_chain: theta must exceed -alpha");
  require(R >= 0, "mlmc_chain: R must be >= 0");
  std::vector<double> z(R + 1);
  if (detail::is_half(alpha)) {
    double acc = rng.gamma(theta + 0.5);
    z[0] = 2 * std::sqrt(acc);
    for (int r = 1; r <= R; ++r) {
      acc += rng.exponential();
      z[r] = 2 * std::sqrt(acc);
    }
    return z;
  }
  double lz = -alpha * detail::log_tilted_variate(alpha, theta + R, rng);
  z[R] = std::exp(lz);
  for (int r = R - 1; r >= 0; --r) {
    lz += rng.log_beta((theta + r + alpha) / alpha, (1 - alpha) / alpha);
    z[r] = std::exp(lz);
  }
  return z;
}

// Local time with density x^{2 theta} e^{-x^2/2 - lambda x} / (Gamma(2 theta + 1) h_{-(2 theta + 1)}(lambda)).
// Rejection from Gamma(2 theta + 1, rate lambda) when lambda >= 1, from sqrt(2 G_{theta+1/2}) below.
inline double sample_local_time_half(double theta, double lambda, RngStream& rng) {
  require(theta > -0.5, "sample_local_time_half: theta must exceed -1/2");
  require(lambda >= 0 && std::isfinite(lambda), "sample_local_time_half: lambda must be >= 0");
  for (long i = 0; i < kSamplerIterationCap; ++i) {
    if (lambda >= 1) {
      double x = rng.gamma(2 * theta + 1) / lambda;
      if (rng.uniform() <= std::exp(-0.5 * x * x)) return x;
    } else {
      double x = std::sqrt(2 * rng.gamma(theta + 0.5));
      if (rng.uniform() <= std::exp(-lambda * x)) return x;
    }
  }
  throw numeric_error("sample_local_time_half: rejection iteration cap exceeded");
}

struct MixedPoissonDraw {
  double rate = 0;
  std::vector<double> times;  // arrival times G_r / A that fall in [0, lambda]
  std::size_t count() const { return times.size(); }
};

// Mixed Poisson process on [0, lambda] with random rate A drawn from rate_sampler.
inline MixedPoissonDraw mixed_poisson(const std::function<double(RngStream&)>& rate_sampler, double lambda,
                                      RngStream& rng) {
  require(lambda >= 0 && std::isfinite(lambda), "mixed_poisson: lambda must be >= 0");
  MixedPoissonDraw d;
  d.rate = rate_sampler(rng);
  require(d.rate >= 0, "mixed_poisson: rate sampler returned a negative rate");
  if (lambda == 0 || d.rate == 0) return d;
  double g = 0;
  for (long i = 0;; ++i) {
    if (i > kSamplerIterationCap) throw numeric_error("mixed_poisson: arrival count cap exceeded");
    g += rng.exponential();
    double t = g / d.rate;
    if (t > lambda) break;
    d.times.push_back(t);
  }
  return d;
}

}  // namespace gibbs

#endif

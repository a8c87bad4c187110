#ifndef GIBBS_RNG_HPP
#define GIBBS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "gibbs/errors.hpp"

namespace gibbs {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// Independent, reproducible stream: (seed, stream_id) fixes the whole sequence.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id),
        eng_(detail::splitmix64(detail::splitmix64(seed) ^ detail::splitmix64(~stream_id + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::mt19937_64& engine() { return eng_; }

  // Uniform on the open interval (0,1).
  double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform()); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  double gamma(double shape) {
    require(shape > 0 && std::isfinite(shape), "gamma variate: shape must be > 0");
    return std::gamma_distribution<double>(shape, 1.0)(eng_);
  }
  // log of a Gamma(shape) variate; stays finite for tiny shapes via G_a = G_{a+1} U^{1/a}.
  double log_gamma(double shape) {
    require(shape > 0 && std::isfinite(shape), "gamma variate: shape must be > 0");
    if (shape >= 1) return std::log(gamma(shape));
    return std::log(gamma(shape + 1)) + std::log(uniform()) / shape;
  }
  // (log B, log(1 - B)) for B ~ Beta(a,b).
  std::pair<double, double> log_beta_pair(double a, double b) {
    require(a > 0 && b > 0, "beta variate: parameters must be > 0");
    double x = log_gamma(a), y = log_gamma(b);
    double m = std::max(x, y);
    double ls = m + std::log(std::exp(x - m) + std::exp(y - m));
    return {x - ls, y - ls};
  }
  double log_beta(double a, double b) { return log_beta_pair(a, b).first; }
  double beta(double a, double b) { return std::exp(log_beta(a, b)); }
  int binomial(int n, double p) { return std::binomial_distribution<int>(n, p)(eng_); }
  long poisson(double mean) { return std::poisson_distribution<long>(mean)(eng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 eng_;
};

}  // namespace gibbs

#endif

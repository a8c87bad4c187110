#ifndef GIBBS_MASS_PARTITION_HPP
#define GIBBS_MASS_PARTITION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/rng.hpp"

namespace gibbs {

// Truncation of the infinite stick-breaking sequences behind the PD fragmenters.
struct TruncationControl {
  double eps = 1e-10;        // stop once the unassigned mass falls below eps
  std::size_t max_atoms = 4096;  // hard cap on sticks per GEM draw

  void validate() const {
    require(eps > 0 && eps < 1, "TruncationControl: eps must lie in (0,1)");
    require(max_atoms >= 1, "TruncationControl: max_atoms must be >= 1");
  }
};

// Ranked masses plus the residual mass left unassigned by truncation.
struct MassPartition {
  std::vector<double> masses;
  double truncation_tail = 0;

  MassPartition() = default;
  MassPartition(std::vector<double> m, double tail = 0) : masses(std::move(m)), truncation_tail(tail) { rank(); }

  void rank() { std::sort(masses.begin(), masses.end(), std::greater<>()); }
  double total() const {
    double s = truncation_tail;
    for (double m : masses) s += m;
    return s;
  }
  double sum_squares() const {
    double s = 0;
    for (double m : masses) s += m * m;
    return s;
  }
  bool valid(double tol = 1e-9) const {
    if (truncation_tail < 0) return false;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      if (!(masses[i] > 0) || masses[i] > 1 + tol) return false;
      if (i > 0 && masses[i] > masses[i - 1]) return false;
    }
    return std::fabs(total() - 1) <= tol;
  }
};

namespace detail {

inline void check_gem(double alpha, double theta, const char* what) {
  require(alpha >= 0 && alpha < 1, std::string(what) + ": alpha must lie in [0,1)");
  require(theta > -alpha && (alpha > 0 || theta > 0), std::string(what) + ": theta must exceed -alpha");
}

// GEM(alpha,theta) sticks scaled by `mass`, stopping when the absolute residual is below eps.
inline std::vector<double> gem_scaled(double alpha, double theta, double mass, const TruncationControl& tc,
                                      RngStream& rng, double& residual) {
  std::vector<double> out;
  double lrem = std::log(mass);
  const double leps = std::log(tc.eps);
  for (std::size_t l = 1; l <= tc.max_atoms && lrem > leps; ++l) {
    auto [lv, l1v] = rng.log_beta_pair(1 - alpha, theta + l * alpha);
    out.push_back(std::exp(lrem + lv));
    lrem += l1v;
  }
  residual = std::exp(lrem);
  return out;
}

// log Gamma(z + x) / Gamma(z + y), kept accurate for large z
inline double log_gamma_ratio(double z, double x, double y) {
  if (z > 1e7) {
    double d = x - y;
    return d * std::log(z) + d * (x + y - 1) / (2 * z);
  }
  return std::lgamma(z + x) - std::lgamma(z + y);
}

// Block labels for n points painted by a GEM(alpha,theta) paintbox, exact and without a stick cap.
// With r points still unplaced (iid uniform on the unbroken remainder), stick j receives none of
// them with probability (b_j)_r / (a + b_j)_r, a = 1 - alpha, b_j = theta + j alpha. While that is
// small sticks are drawn one at a time; otherwise the run of empty sticks is skipped by inverting
// the product in closed form and the count on the first occupied stick is beta-binomial
// conditioned to be positive.
inline std::vector<int> paintbox_labels(double alpha, double theta, int n, RngStream& rng) {
  const double a = 1 - alpha;
  std::vector<int> labels(n, -1), pending(n);
  std::iota(pending.begin(), pending.end(), 0);
  double j = 1;
  int next = 0;
  auto assign = [&](int h) {
    for (int k = 0; k < h; ++k) {
      std::size_t pick = static_cast<std::size_t>(rng.uniform() * pending.size());
      if (pick >= pending.size()) pick = pending.size() - 1;
      labels[pending[pick]] = next;
      pending[pick] = pending.back();
      pending.pop_back();
    }
    ++next;
  };
  while (!pending.empty()) {
    const int r = static_cast<int>(pending.size());
    double b = theta + j * alpha;
    const double log_empty = std::lgamma(b + r) + std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a + b + r);
    if (log_empty < std::log(0.5)) {
      int h = rng.binomial(r, rng.beta(a, b));
      if (h > 0) assign(h);
      j += 1;
      continue;
    }
    if (alpha > 0) {
      // survival of "no hits on sticks j..J" is exp(G(J + 1) - G(j))
      auto G = [&](double z) {
        double g = 0;
        for (int i = 0; i < r; ++i) g += log_gamma_ratio(z, (theta + i) / alpha, (theta + 1 + i - alpha) / alpha);
        return g;
      };
      const double target = std::log(rng.uniform()) + G(j);
      if (G(j + 1) > target) {
        double lo = j, hi = j + 1;  // G(lo + 1) > target >= G(hi + 1) once the loop ends
        while (G(hi + 1) > target) {
          lo = hi;
          hi = j + 2 * (hi - j + 1);
          if (!std::isfinite(hi)) throw numeric_error("paintbox: stick index overflow");
        }
        while (hi - lo > 1) {
          double mid = std::floor(0.5 * (lo + hi));
          if (mid <= lo || mid >= hi) break;
          (G(mid + 1) > target ? lo : hi) = mid;
        }
        j = hi;
      }
      b = theta + j * alpha;
    }
    // P(h) prop. to C(r,h) (a)_h (b)_{r-h}, h = 1..r, built from successive ratios
    std::vector<double> lw(r + 1);
    lw[1] = std::log(static_cast<double>(r)) + std::log(a);
    double top = lw[1];
    for (int h = 1; h < r; ++h) {
      lw[h + 1] = lw[h] + std::log((r - h) / (h + 1.0)) + std::log((a + h) / (b + r - h - 1));
      top = std::max(top, lw[h + 1]);
    }
    double total = 0;
    for (int h = 1; h <= r; ++h) total += std::exp(lw[h] - top);
    double u = rng.uniform() * total, acc = 0;
    int h = r;
    for (int k = 1; k <= r; ++k) {
      acc += std::exp(lw[k] - top);
      if (u <= acc) {
        h = k;
        break;
      }
    }
    assign(h);
    j += 1;
  }
  return labels;
}

}  // namespace detail

// First K sticks of GEM(alpha,theta).
inline std::vector<double> gem_sticks(double alpha, double theta, std::size_t K, RngStream& rng) {
  detail::check_gem(alpha, theta, "gem_sticks");
  require(K >= 1, "gem_sticks: K must be >= 1");
  std::vector<double> out;
  double lrem = 0;
  for (std::size_t l = 1; l <= K; ++l) {
    auto [lv, l1v] = rng.log_beta_pair(1 - alpha, theta + l * alpha);
    out.push_back(std::exp(lrem + lv));
    lrem += l1v;
  }
  return out;
}

// Ranked, truncated PD(alpha,theta) mass partition.
inline MassPartition sample_pd(double alpha, double theta, RngStream& rng, const TruncationControl& tc = {}) {
  detail::check_gem(alpha, theta, "sample_pd");
  tc.validate();
  double tail = 0;
  auto m = detail::gem_scaled(alpha, theta, 1.0, tc, rng, tail);
  return MassPartition(std::move(m), tail);
}

// Size-biased pick of a mass (index into masses); the truncation tail is excluded.
inline std::size_t size_biased_index(const MassPartition& p, RngStream& rng) {
  require(!p.masses.empty(), "size_biased_index: empty mass partition");
  double assigned = p.total() - p.truncation_tail;
  double u = rng.uniform() * assigned, acc = 0;
  for (std::size_t i = 0; i < p.masses.size(); ++i) {
    acc += p.masses[i];
    if (u <= acc) return i;
  }
  return p.masses.size() - 1;
}

// Shatters a size-biased pick by an independent PD(alpha, 1 - alpha).
inline MassPartition frag_single(const MassPartition& p, double alpha, RngStream& rng,
                                 const TruncationControl& tc = {}) {
  require(alpha > 0 && alpha < 1, "frag_single: alpha must lie in (0,1)");
  require(!p.masses.empty(), "frag_single: empty mass partition");
  tc.validate();
  std::size_t pick = size_biased_index(p, rng);
  std::vector<double> out;
  out.reserve(p.masses.size() + 64);
  for (std::size_t i = 0; i < p.masses.size(); ++i)
    if (i != pick) out.push_back(p.masses[i]);
  double tail = 0;
  auto pieces = detail::gem_scaled(alpha, 1 - alpha, p.masses[pick], tc, rng, tail);
  out.insert(out.end(), pieces.begin(), pieces.end());
  return MassPartition(std::move(out), p.truncation_tail + tail);
}

// Every atom shattered by an independent PD(alpha, -alpha delta).
inline MassPartition frag_all(const MassPartition& p, double alpha, double delta, RngStream& rng,
                              const TruncationControl& tc = {}) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "frag_all: alpha and delta must lie in (0,1)");
  require(!p.masses.empty(), "frag_all: empty mass partition");
  tc.validate();
  std::vector<double> out;
  double tail = p.truncation_tail;
  for (double m : p.masses) {
    double r = 0;
    auto pieces = detail::gem_scaled(alpha, -alpha * delta, m, tc, rng, r);
    out.insert(out.end(), pieces.begin(), pieces.end());
    tail += r;
  }
  return MassPartition(std::move(out), tail);
}

// Paintbox coagulation: the atoms of p are painted by an independent PD(delta, tau) paintbox and
// atoms sharing a stick merge.
inline MassPartition coag(const MassPartition& p, double delta, double tau, RngStream& rng) {
  require(delta > 0 && delta < 1, "coag: delta must lie in (0,1)");
  require(tau > -delta, "coag: tau must exceed -delta");
  require(!p.masses.empty(), "coag: empty mass partition");
  auto labels = detail::paintbox_labels(delta, tau, static_cast<int>(p.masses.size()), rng);
  std::vector<double> classes(*std::max_element(labels.begin(), labels.end()) + 1, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) classes[labels[i]] += p.masses[i];
  return MassPartition(std::move(classes), p.truncation_tail);
}

// Coagulation by a caller-supplied paintbox W (sticks summing to at most 1; leftover mass
// sends an atom to a class of its own).
inline MassPartition coag_with(const MassPartition& p, const std::vector<double>& w, RngStream& rng) {
  require(!p.masses.empty(), "coag: empty mass partition");
  std::vector<double> cum;
  double c = 0;
  for (double x : w) {
    require(x >= 0, "coag: paintbox masses must be >= 0");
    c += x;
    cum.push_back(c);
  }
  require(c <= 1 + 1e-9, "coag: paintbox masses exceed 1");
  std::vector<double> classes(w.size(), 0.0), singles;
  for (double m : p.masses) {
    double u = rng.uniform();
    auto it = std::lower_bound(cum.begin(), cum.end(), u);
    if (it == cum.end())
      singles.push_back(m);
    else
      classes[it - cum.begin()] += m;
  }
  classes.erase(std::remove(classes.begin(), classes.end(), 0.0), classes.end());
  classes.insert(classes.end(), singles.begin(), singles.end());
  return MassPartition(std::move(classes), p.truncation_tail);
}

}  // namespace gibbs

#endif

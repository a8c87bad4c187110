#ifndef GIBBS_PARTITION_SAMPLERS_HPP
#define GIBBS_PARTITION_SAMPLERS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "gibbs/errors.hpp"
#include "gibbs/mass_partition.hpp"
#include "gibbs/partition.hpp"
#include "gibbs/rng.hpp"
#include "gibbs/samplers.hpp"

namespace gibbs {

// Partition of {0,...,n-1}; block labels are 0,1,... in order of least element.
struct SetPartition {
  int n = 0;
  std::vector<int> block_of;

  static SetPartition from_labels(const std::vector<int>& labels) {
    SetPartition p;
    p.n = static_cast<int>(labels.size());
    p.block_of.resize(labels.size());
    std::vector<std::pair<int, int>> seen;  // (raw label, new label)
    for (std::size_t i = 0; i < labels.size(); ++i) {
      int raw = labels[i], lab = -1;
      for (auto& [r, l] : seen)
        if (r == raw) {
          lab = l;
          break;
        }
      if (lab < 0) {
        lab = static_cast<int>(seen.size());
        seen.emplace_back(raw, lab);
      }
      p.block_of[i] = lab;
    }
    return p;
  }

  int k() const { return block_of.empty() ? 0 : *std::max_element(block_of.begin(), block_of.end()) + 1; }
  std::vector<int> sizes() const {
    std::vector<int> s(k(), 0);
    for (int b : block_of) ++s[b];
    return s;
  }
  BlockSizes block_sizes() const { return BlockSizes(sizes()); }
  std::vector<std::vector<int>> blocks() const {
    std::vector<std::vector<int>> out(k());
    for (int i = 0; i < n; ++i) out[block_of[i]].push_back(i);
    return out;
  }
  bool valid() const {
    if (static_cast<int>(block_of.size()) != n) return false;
    int next = 0;
    for (int b : block_of) {
      if (b < 0 || b > next) return false;
      if (b == next) ++next;
    }
    return true;
  }
  // every block of *this lies inside a block of coarse
  bool refines(const SetPartition& coarse) const {
    if (coarse.n != n) return false;
    std::vector<int> host(k(), -1);
    for (int i = 0; i < n; ++i) {
      int& h = host[block_of[i]];
      if (h < 0)
        h = coarse.block_of[i];
      else if (h != coarse.block_of[i])
        return false;
    }
    return true;
  }
};

namespace detail {

// Index drawn with probability proportional to w.
inline std::size_t draw_weighted(const std::vector<double>& w, double total, RngStream& rng) {
  double u = rng.uniform() * total, acc = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i];
    if (u < acc) return i;
  }
  return w.size() - 1;
}

// Seats customers in order; new_weight(i, k) and join_scale(i, k) give, for a room of i
// customers and k tables, the weight of a new table and the factor multiplying (n_j - alpha).
template <class NewW, class JoinS>
std::vector<int> seat(int n, double alpha, NewW&& new_weight, JoinS&& join_scale, RngStream& rng) {
  std::vector<int> labels(n, 0), sizes;
  if (n == 0) return labels;
  sizes.push_back(1);
  std::vector<double> w;
  for (int i = 1; i < n; ++i) {
    int k = static_cast<int>(sizes.size());
    double js = join_scale(i, k);
    w.assign(k + 1, 0.0);
    double total = 0;
    for (int j = 0; j < k; ++j) total += (w[j] = (sizes[j] - alpha) * js);
    total += (w[k] = new_weight(i, k));
    std::size_t c = draw_weighted(w, total, rng);
    if (static_cast<int>(c) == k) sizes.push_back(0);
    ++sizes[c];
    labels[i] = static_cast<int>(c);
  }
  return labels;
}

}  // namespace detail

// Two-parameter Chinese restaurant process: after i customers at k tables the next one opens a
// table w.p. (theta + k alpha)/(theta + i) and joins table j w.p. (n_j - alpha)/(theta + i).
inline SetPartition crp(double alpha, double theta, int n, RngStream& rng) {
  detail::check_gem(alpha, theta, "crp");
  require(n >= 1, "crp: n must be >= 1");
  auto labels = detail::seat(
      n, alpha, [&](int, int k) { return theta + k * alpha; }, [](int, int) { return 1.0; }, rng);
  return SetPartition::from_labels(labels);
}

// K_n alone under the CRP.
inline int crp_block_count(double alpha, double theta, int n, RngStream& rng) {
  detail::check_gem(alpha, theta, "crp_block_count");
  require(n >= 1, "crp_block_count: n must be >= 1");
  int k = 1;
  for (int i = 1; i < n; ++i)
    if (rng.uniform() * (theta + i) < theta + k * alpha) ++k;
  return k;
}

// Prediction rule of a Gibbs partition: new table prop. to V_{i+1,k+1}/V_{i,k}, table j prop. to
// (n_j - alpha) V_{i+1,k}/V_{i,k}.
inline SetPartition gibbs_crp(const GibbsWeightTable& table, int n, RngStream& rng) {
  require(n >= 1, "gibbs_crp: n must be >= 1");
  require(n <= table.n_max(), "gibbs_crp: n exceeds the weight table");
  auto labels = detail::seat(
      n, table.alpha(), [&](int i, int k) { return std::exp(table.log_v(i + 1, k + 1) - table.log_v(i, k)); },
      [&](int i, int k) { return std::exp(table.log_v(i + 1, k) - table.log_v(i, k)); }, rng);
  return SetPartition::from_labels(labels);
}

// Partition of [n] generated by the GEM(alpha,theta) paintbox.
inline SetPartition gem_partition(double alpha, double theta, int n, RngStream& rng) {
  detail::check_gem(alpha, theta, "gem_partition");
  require(n >= 1, "gem_partition: n must be >= 1");
  return SetPartition::from_labels(detail::paintbox_labels(alpha, theta, n, rng));
}

// Refines each block of base by an independent CRP(alpha, -alpha delta).
inline SetPartition two_stage_partition(const SetPartition& base, double alpha, double delta, RngStream& rng) {
  require(alpha > 0 && alpha < 1 && delta > 0 && delta < 1, "two_stage_partition: alpha and delta must lie in (0,1)");
  require(base.valid() && base.n >= 1, "two_stage_partition: invalid base partition");
  std::vector<int> labels(base.n);
  int offset = 0;
  for (const auto& block : base.blocks()) {
    auto sub = detail::seat(
        static_cast<int>(block.size()), alpha, [&](int, int k) { return -alpha * delta + k * alpha; },
        [](int, int) { return 1.0; }, rng);
    int m = 0;
    for (std::size_t e = 0; e < block.size(); ++e) {
      labels[block[e]] = offset + sub[e];
      m = std::max(m, sub[e] + 1);
    }
    offset += m;
  }
  return SetPartition::from_labels(labels);
}

inline SetPartition two_stage_partition(int n, const std::function<SetPartition(RngStream&)>& base_sampler,
                                        double alpha, double delta, RngStream& rng) {
  SetPartition base = base_sampler(rng);
  require(base.n == n, "two_stage_partition: base sampler returned a partition of the wrong size");
  return two_stage_partition(base, alpha, delta, rng);
}

// Merges the blocks of base (taken in order of least element) by an independent CRP(delta, tau).
inline SetPartition coag_partition(const SetPartition& base, double delta, double tau, RngStream& rng) {
  require(delta > 0 && delta < 1, "coag_partition: delta must lie in (0,1)");
  require(tau > -delta, "coag_partition: tau must exceed -delta");
  require(base.valid() && base.n >= 1, "coag_partition: invalid base partition");
  SetPartition outer = crp(delta, tau, base.k(), rng);
  std::vector<int> labels(base.n);
  for (int i = 0; i < base.n; ++i) labels[i] = outer.block_of[base.block_of[i]];
  return SetPartition::from_labels(labels);
}

// Joint draw of S_{alpha,theta} and the partition of [n] cut from the same GEM(alpha,theta)
// sequence. Once the first M sticks cover all n points, the rest of the sequence is a scaled
// GEM(alpha, theta + M alpha), so S_{alpha,theta} = S_{alpha,theta+M alpha} / prod_{j<=M}(1 - W_j).
struct StablePartitionDraw {
  double s = 0;
  SetPartition partition;
};

inline StablePartitionDraw sample_stable_with_partition(double alpha, double theta, int n, RngStream& rng) {
  detail::check_alpha(alpha, "sample_stable_with_partition");
  require(theta > -alpha, "sample_stable_with_partition: theta must exceed -alpha");
  require(n >= 1, "sample_stable_with_partition: n must be >= 1");
  constexpr long stick_cap = 100000000;
  std::vector<double> u(n);
  for (double& x : u) x = rng.uniform();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
  // sweep the sticks once, in order, against the sorted points
  std::vector<int> labels(n);
  double lrem = 0, covered = 0;
  long m = 0;
  for (int idx : order) {
    while (m == 0 || covered < u[idx]) {
      if (++m > stick_cap) throw numeric_error("sample_stable_with_partition: stick cap exceeded");
      auto [lv, l1v] = rng.log_beta_pair(1 - alpha, theta + static_cast<double>(m) * alpha);
      covered += std::exp(lrem + lv);
      lrem += l1v;
      if (lrem < -745) covered = 1.0;
    }
    labels[idx] = static_cast<int>(m - 1);
  }
  StablePartitionDraw d;
  d.s = std::exp(detail::log_tilted_variate(alpha, theta + static_cast<double>(m) * alpha, rng) - lrem);
  d.partition = SetPartition::from_labels(labels);
  return d;
}

// Sticks s^2/(s^2 + R_{l-1}) - s^2/(s^2 + R_l), R_l a sum of l squared standard normals.
inline std::vector<double> brownian_cond_sticks(double s, std::size_t K, RngStream& rng) {
  require(s > 0 && std::isfinite(s), "brownian_cond_sticks: s must be > 0");
  require(K >= 1, "brownian_cond_sticks: K must be >= 1");
  const double s2 = s * s;
  std::vector<double> out;
  double r = 0;
  for (std::size_t l = 0; l < K; ++l) {
    double z = rng.normal(), x = z * z;
    out.push_back(s2 * x / ((s2 + r) * (s2 + r + x)));
    r += x;
  }
  return out;
}

// First Brownian conditional stick B^2/(B^2 + s^2) under the bias p^c, c > 0. Rejection from
// chi^2_1 when s < 1, from Gamma(c + 1/2, 2) when s >= 1.
inline double sample_biased_brownian_stick(double s, double c, RngStream& rng) {
  require(s > 0 && std::isfinite(s), "sample_biased_brownian_stick: s must be > 0");
  require(c > 0 && std::isfinite(c), "sample_biased_brownian_stick: c must be > 0");
  const double s2 = s * s;
  for (long i = 0; i < kSamplerIterationCap; ++i) {
    if (s < 1) {
      double z = rng.normal(), x = z * z, p = x / (x + s2);
      if (rng.uniform() <= std::pow(p, c)) return p;
    } else {
      double x = 2 * rng.gamma(c + 0.5);
      if (rng.uniform() <= std::pow(s2 / (x + s2), c)) return x / (x + s2);
    }
  }
  throw numeric_error("sample_biased_brownian_stick: rejection iteration cap exceeded");
}

// Paintbox over the Brownian conditional sticks: a uniform U lands in stick l iff
// R_{l-1} < s^2 U/(1-U) <= R_l.
inline SetPartition brownian_cond_partition(double s, int n, RngStream& rng) {
  require(s > 0 && std::isfinite(s), "brownian_cond_partition: s must be > 0");
  require(n >= 1, "brownian_cond_partition: n must be >= 1");
  const double s2 = s * s;
  std::vector<double> thr(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.uniform();
    thr[i] = s2 * u / (1 - u);
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return thr[a] < thr[b]; });
  std::vector<int> labels(n);
  double r = 0;
  int stick = -1;
  for (int idx : order) {
    while (stick < 0 || r < thr[idx]) {
      double z = rng.normal();
      r += z * z;
      ++stick;
    }
    labels[idx] = stick;
  }
  return SetPartition::from_labels(labels);
}

}  // namespace gibbs

#endif

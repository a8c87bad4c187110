// EPPF roster shared by the partition tests and the acceptance binary, plus the
// enumeration and addition-rule checks run against it.
#ifndef GIBBS_TESTS_EPPF_CASES_HPP
#define GIBBS_TESTS_EPPF_CASES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gibbs/gibbs.hpp"
#include "oracle.hpp"

namespace cases {

using Eppf = std::function<double(const gibbs::BlockSizes&)>;

struct Case {
  std::string name;
  Eppf log_eppf;
  int n_max;  // largest n to enumerate
};

inline std::vector<Case> roster() {
  using namespace gibbs;
  std::vector<Case> out;
  out.push_back({"pd(0.5,0)", [](const BlockSizes& b) { return eppf_pd(0.5, 0, b); }, 8});
  out.push_back({"pd(0.3,1.7)", [](const BlockSizes& b) { return eppf_pd(0.3, 1.7, b); }, 8});
  out.push_back({"pd(0.6,-0.4)", [](const BlockSizes& b) { return eppf_pd(0.6, -0.4, b); }, 8});

  auto pdt = std::make_shared<GibbsWeightTable>(pd_weight_table(0.45, 0.8, 9));
  out.push_back({"gibbs-table(pd 0.45,0.8)", [pdt](const BlockSizes& b) { return eppf_gibbs(*pdt, b); }, 8});
  QuadratureControl tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-300;
  auto cond = std::make_shared<GibbsWeightTable>(conditional_weight_table(0.4, 1.3, 9, tight));
  out.push_back({"gibbs-table(conditional 0.4|t=1.3)", [cond](const BlockSizes& b) { return eppf_gibbs(*cond, b); }, 8});

  out.push_back({"ml(0.5,0,1.2)", [](const BlockSizes& b) { return eppf_ml(0.5, 0, 1.2, b); }, 8});
  out.push_back({"ml(0.35,0.6,2.5)", [](const BlockSizes& b) { return eppf_ml(0.35, 0.6, 2.5, b); }, 8});

  out.push_back({"hermite(s=0.7)", [](const BlockSizes& b) { return eppf_hermite(0.7, b); }, 8});
  out.push_back({"hermite(s=2)", [](const BlockSizes& b) { return eppf_hermite(2.0, b); }, 8});

  auto pd_base = std::make_shared<GibbsWeightTable>(pd_weight_table(0.25, 0.9, 9));
  out.push_back({"frag(0.5,0.5|pd base)", [pd_base](const BlockSizes& b) { return eppf_frag(0.5, 0.5, *pd_base, b); }, 8});
  auto cond_base = std::make_shared<GibbsWeightTable>(conditional_weight_table(0.25, 1.1, 9, tight));
  out.push_back({"frag(0.5,0.5|conditional base)",
                 [cond_base](const BlockSizes& b) { return eppf_frag(0.5, 0.5, *cond_base, b); }, 8});
  auto herm_base = std::make_shared<GibbsWeightTable>(hermite_weight_table(0.9, 9));
  out.push_back({"frag(2/3,3/4|hermite base)",
                 [herm_base](const BlockSizes& b) { return eppf_frag(2.0 / 3, 0.75, *herm_base, b); }, 8});

  out.push_back({"mlmc(0.5,0.3,1,r=1)", [](const BlockSizes& b) { return eppf_mlmc_ml(0.5, 0.3, 1.0, 1, b); }, 8});
  out.push_back({"mlmc(0.4,0.2,1.5,r=2)", [](const BlockSizes& b) { return eppf_mlmc_ml(0.4, 0.2, 1.5, 2, b); }, 8});
  return out;
}

// Set partitions of [n] tallied by their sorted block sizes. An EPPF depends on sizes only,
// so each class needs a single evaluation.
inline const std::map<std::vector<int>, long double>& size_classes(int n) {
  static std::map<int, std::map<std::vector<int>, long double>> memo;
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  std::map<std::vector<int>, long double> out;
  for (const auto& p : oracle::set_partitions(n)) {
    auto sz = oracle::sizes_of(p);
    std::sort(sz.rbegin(), sz.rend());
    out[sz] += 1;
  }
  return memo[n] = out;
}

// sum over all set partitions of [n] of exp(log eppf)
inline double enumeration_total(const Eppf& f, int n) {
  std::vector<std::pair<double, long double>> terms;
  for (const auto& [sz, count] : size_classes(n)) terms.emplace_back(f(gibbs::BlockSizes(sz)), count);
  double m = -std::numeric_limits<double>::infinity();
  for (auto& t : terms) m = std::max(m, t.first);
  long double s = 0;
  for (auto& [l, count] : terms) s += count * std::exp(static_cast<long double>(l - m));
  return static_cast<double>(std::exp(static_cast<long double>(m)) * s);
}

// probabilities of K_n = k obtained by enumeration
inline std::vector<double> enumeration_by_k(const Eppf& f, int n) {
  std::vector<double> p(n + 1, 0.0);
  for (const auto& [sz, count] : size_classes(n))
    p[sz.size()] += static_cast<double>(count * std::exp(static_cast<long double>(f(gibbs::BlockSizes(sz)))));
  return p;
}

// Every integer partition of n as non-increasing sizes.
inline std::vector<std::vector<int>> integer_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int cap) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int m = std::min(left, cap); m >= 1; --m) {
      cur.push_back(m);
      self(self, left - m, m);
      cur.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

// max over b with |b| <= n_max of |p(b) - sum_{b'} p(b')| / p(b), b' ranging over the
// ways of placing element n+1
inline double addition_residual(const Eppf& f, int n_max) {
  double worst = 0;
  for (int n = 1; n <= n_max; ++n)
    for (const auto& sizes : integer_partitions(n)) {
      double lp = f(gibbs::BlockSizes(sizes));
      long double acc = 0;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        auto s = sizes;
        ++s[i];
        acc += std::exp(static_cast<long double>(f(gibbs::BlockSizes(s)) - lp));
      }
      auto s = sizes;
      s.push_back(1);
      acc += std::exp(static_cast<long double>(f(gibbs::BlockSizes(s)) - lp));
      worst = std::max(worst, static_cast<double>(std::fabs(acc - 1)));
    }
  return worst;
}

}  // namespace cases

#endif

// Acceptance checks 1-10. Prints one line per criterion and exits nonzero if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "eppf_cases.hpp"
#include "gibbs/gibbs.hpp"
#include "oracle.hpp"

using namespace gibbs;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Runs one criterion, adding the runtime budget (seconds; 0 for none) to its verdict.
bool report(int id, double budget, const std::function<Verdict()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = budget <= 0 || secs < budget;
  bool ok = v.pass && in_time;
  std::printf("criterion %d: %s  %s  [%.2f s%s]\n", id, ok ? "PASS" : "FAIL", v.detail.c_str(), secs,
              in_time ? "" : ", over budget");
  std::fflush(stdout);
  return ok;
}

template <class G>
double integrate_half_line(G g) {
  auto h = [&](double t) {
    double v = t > 0 && std::isfinite(t) ? g(t) : 0.0;
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate(h, 1e-11);
}

Verdict half_closed_form() {
  double worst = 0;
  for (int n = 1; n <= 20; ++n) {
    auto p = blocks_pmf(0.5, 0, n);
    for (int k = 1; k <= n; ++k) {
      double want = static_cast<double>(oracle::binom(2 * n - k - 1, n - 1)) * std::ldexp(1.0, k + 1 - 2 * n);
      worst = std::max(worst, std::fabs(p.p[k] - want));
    }
  }
  auto p2 = blocks_pmf(0.5, 0, 2);
  bool ex = p2.p[1] == 0.5 && p2.p[2] == 0.5;
  return {worst < 1e-12 && ex, "max abs error " + num(worst) + (ex ? ", n=2 gives (0.5,0.5)" : ", n=2 example wrong")};
}

Verdict stirling_composition() {
  double worst = 0;
  for (auto [a, d] : std::vector<std::pair<double, double>>{{0.5, 0.5}, {2.0 / 3, 0.5}, {0.5, 1.0 / 3}})
    for (int n = 1; n <= 12; ++n) worst = std::max(worst, stirling_composition_residual(a, d, n));
  return {worst < 1e-9, "max relative residual " + num(worst)};
}

Verdict quarter() {
  double worst = 0;
  for (int n = 1; n <= 30; ++n) {
    auto q = blocks_pmf_quarter(n), c = blocks_pmf_coag(0.5, 0.5, 0, n), d = blocks_pmf(0.25, 0, n);
    for (int k = 1; k <= n; ++k) worst = std::max({worst, std::fabs(q.p[k] - c.p[k]), std::fabs(q.p[k] - d.p[k])});
  }
  return {worst < 1e-9, "max residual against coagulation and direct routes " + num(worst)};
}

Verdict enumeration() {
  double worst_sum = 0, worst_add = 0;
  std::string where;
  for (const auto& c : cases::roster()) {
    for (int n = 1; n <= c.n_max; ++n) {
      double e = std::fabs(cases::enumeration_total(c.log_eppf, n) - 1);
      if (e > worst_sum) {
        worst_sum = e;
        where = c.name;
      }
    }
    worst_add = std::max(worst_add, cases::addition_residual(c.log_eppf, 7));
  }
  return {worst_sum < 1e-8 && worst_add < 1e-10, std::to_string(cases::roster().size()) + " EPPFs, max |sum - 1| " +
                                                     num(worst_sum) + " (" + where + "), max addition residual " +
                                                     num(worst_add)};
}

Verdict special_functions() {
  double e1 = 0, e2 = 0, e3 = 0;
  for (double l = 0; l <= 5 + 1e-12; l += 0.05) e1 = std::max(e1, std::fabs(prabhakar_ml(0.5, 1, 1, l) - oracle::erfcx(l)));
  for (double l = 0; l <= 6 + 1e-12; l += 0.05) {
    double phi = std::exp(-0.5 * l * l) / std::sqrt(2 * M_PI);
    e2 = std::max(e2, std::fabs(hermite_h(0.5, l) * phi - 0.5 * std::erfc(l / std::sqrt(2.0))));
  }
  for (double a : {0.3, 0.5, 0.7})
    for (double th : {0.0, 0.8})
      for (double l : {0.5, 2.0})
        for (int n = 1; n <= 10; ++n) {
          auto p = blocks_pmf(a, th, n);
          double lhs = 0;
          for (int k = 1; k <= n; ++k) lhs += p.p[k] * gen_ml(a, th + k * a, n - k * a, l);
          e3 = std::max(e3, std::fabs(lhs - gen_ml(a, th + a, 1 - a, l)));
        }
  return {e1 < 1e-10 && e2 < 1e-10 && e3 < 1e-8,
          "Mittag-Leffler vs erfcx " + num(e1) + ", Mills ratio vs normal tail " + num(e2) + ", decomposition " + num(e3)};
}

Verdict stable_checks() {
  double lap = 0, abel = 0;
  for (double a : {0.3, 0.5, 0.7})
    for (double l : {0.5, 1.0, 2.0}) {
      double v = integrate_half_line([&](double t) { return std::exp(-l * t) * stable_pdf(a, t); });
      lap = std::max(lap, std::fabs(v - std::exp(-std::pow(l, a))));
    }
  for (double a : {0.3, 0.5, 0.7})
    for (double t : {0.05, 0.1, 0.2, 0.4, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0, 10.0, 20.0})
      abel = std::max(abel, std::fabs(a * frac_integral(a, 1 - a, t) - t * stable_pdf(a, t)));
  return {lap < 1e-6 && abel < 1e-6, "Laplace max error " + num(lap) + ", Abel identity max error " + num(abel)};
}

Verdict dual_route() {
  double worst = 0;
  for (double s : {0.5, 1.0, 2.0}) {
    double t = 1 / (2 * s * s);
    for (int n = 1; n <= 6; ++n)
      for (int k = 1; k <= n; ++k) {
        double q = gibbs_weight(0.5, n, k, t, {}, WeightRoute::quadrature);
        double h = gibbs_weight(0.5, n, k, t, {}, WeightRoute::hermite);
        worst = std::max(worst, std::fabs(q / h - 1));
      }
  }
  return {worst < 1e-6, "max relative gap between Hermite and quadrature routes " + num(worst)};
}

// chi-square of two-stage partitions of [n] against the fragmentation EPPF over all set partitions
Verdict frag_chi_square(double alpha, double delta, const GibbsWeightTable& base, int n, std::size_t draws,
                        std::uint64_t seed) {
  const auto& all = oracle::set_partitions(n);
  std::map<std::vector<int>, std::size_t> index;
  std::vector<double> probs;
  for (const auto& p : all) {
    index[p] = probs.size();
    probs.push_back(std::exp(eppf_frag(alpha, delta, base, BlockSizes(oracle::sizes_of(p)))));
  }
  double total = 0;
  for (double p : probs) total += p;
  std::vector<double> counts(probs.size(), 0.0);
  RngStream rng(seed, 0);
  for (std::size_t i = 0; i < draws; ++i) {
    auto p = two_stage_partition(gibbs_crp(base, n, rng), alpha, delta, rng);
    counts[index.at(p.block_of)] += 1;
  }
  auto r = chi_square_test(counts, probs);
  return {r.statistic <= r.threshold && std::fabs(total - 1) < 1e-8,
          "chi2 " + num(r.statistic) + " <= " + num(r.threshold) + " (df " + std::to_string(r.df) + ")"};
}

Verdict fragmentation() {
  QuadratureControl tight;
  tight.rel_tol = 1e-12;
  tight.abs_tol = 1e-300;
  // alpha = delta = 1/2 over the conditional PD(1/4 | t) base
  auto cond = conditional_weight_table(0.25, 1.1, 6, tight);
  auto a = frag_chi_square(0.5, 0.5, cond, 5, 100000, 8);
  // Hermite base (index 1/2) with alpha = 2/3, delta = 3/4
  auto herm = hermite_weight_table(0.9, 6);
  auto b = frag_chi_square(2.0 / 3, 0.75, herm, 5, 100000, 9);
  return {a.pass && b.pass, "conditional base at 1/4: " + a.detail + "; Hermite base at 1/2: " + b.detail};
}

Verdict suite() {
  auto reports = run_suite("", 100000, 0, 1, false);
  std::size_t passed = 0;
  std::string failed;
  for (const auto& r : reports)
    if (r.pass) {
      ++passed;
    } else {
      failed += " " + r.id;
    }
  auto controls = run_suite("", 100000, 0, 1, true);
  std::size_t caught = 0;
  std::string missed;
  for (const auto& r : controls)
    if (!r.pass && r.error.empty()) {
      ++caught;
    } else {
      missed += " " + r.id;
    }
  bool ok = reports.size() >= 20 && passed == reports.size() && caught == controls.size();
  std::string d = std::to_string(passed) + "/" + std::to_string(reports.size()) + " identities pass, " +
                  std::to_string(caught) + "/" + std::to_string(controls.size()) + " negative controls fail";
  if (!failed.empty()) d += "; failing:" + failed;
  if (!missed.empty()) d += "; controls not rejected:" + missed;
  return {ok, d};
}

Verdict diversity_limit() {
  const int n = 4096;
  const std::size_t reps = 10000;
  bool ok = true;
  std::string d;
  std::uint64_t stream = 0;
  for (auto [a, th] : std::vector<std::pair<double, double>>{{0.5, 0.0}, {0.5, 0.5}, {1.0 / 3, 0.4}}) {
    RngStream rng(10, stream++);
    std::vector<double> x(reps), y(reps);
    const double scale = std::pow(static_cast<double>(n), -a);
    for (auto& v : x) v = scale * crp_block_count(a, th, n, rng);
    for (auto& v : y) v = sample_ml(a, th, rng);
    double stat = ks_two_sample(x, y), thr = ks_threshold_two(reps, reps);
    ok = ok && stat <= thr;
    d += (d.empty() ? "" : ", ") + std::string("(") + num(a) + "," + num(th) + "): KS " + num(stat) +
         (stat <= thr ? " <= " : " > ") + num(thr);
  }
  return {ok, d};
}

}  // namespace

int main() {
  bool ok = true;
  ok &= report(1, 1, half_closed_form);
  ok &= report(2, 1, stirling_composition);
  ok &= report(3, 0, quarter);
  ok &= report(4, 30, enumeration);
  ok &= report(5, 0, special_functions);
  ok &= report(6, 0, stable_checks);
  ok &= report(7, 0, dual_route);
  ok &= report(8, 120, fragmentation);
  ok &= report(9, 600, suite);
  ok &= report(10, 0, diversity_limit);
  return ok ? 0 : 1;
}

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "gibbs/gibbs.hpp"

using namespace gibbs;

TEST(Stats, ChiSquareExactCountsGiveZero) {
  auto r = chi_square_test({25, 50, 25}, {0.25, 0.5, 0.25});
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.df, 2);
  // chi-square(2) upper 0.001 point is -2 log(0.001)
  EXPECT_NEAR(r.threshold, -2 * std::log(1e-3), 1e-9);
}

TEST(Stats, ChiSquareMergesSparseCells) {
  // expected counts 2, 2, 96: the first two cells merge with each other and then into the third
  auto r = chi_square_test({2, 2, 96}, {0.02, 0.02, 0.96});
  EXPECT_EQ(r.bins, 1);
  EXPECT_EQ(r.statistic, 0.0);
}

TEST(Stats, ChiSquareRejectsShapeMismatch) {
  EXPECT_THROW(chi_square_test({1, 2}, {1.0}), domain_error);
  EXPECT_THROW(chi_square_test({1, -2}, {0.5, 0.5}), domain_error);
}

TEST(Stats, KsOneSampleSmallCase) {
  // one point at 1/2 against the uniform law: D = 1/2
  EXPECT_DOUBLE_EQ(ks_one_sample({0.5}, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5);
  // points 0.1, 0.2 against uniform: D = max(0.5-0.1, 1-0.2) = 0.8
  EXPECT_DOUBLE_EQ(ks_one_sample({0.2, 0.1}, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.8);
}

TEST(Stats, KsTwoSampleSmallCase) {
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 2}, {3, 4}), 1.0);
  EXPECT_DOUBLE_EQ(ks_two_sample({1, 3}, {2, 4}), 0.5);
}

TEST(Stats, KolmogorovCritical) {
  // P(K > x) = 2 sum (-1)^{j-1} exp(-2 j^2 x^2); the leading term dominates at small levels
  double x = kolmogorov_critical(1e-3);
  EXPECT_NEAR(2 * std::exp(-2 * x * x), 1e-3, 1e-9);
  EXPECT_NEAR(ks_threshold_one(10000), x / 100, 1e-3 * x);
  EXPECT_NEAR(ks_threshold_two(10000, 10000), x * std::sqrt(2.0 / 10000), 1e-3 * x);
}

TEST(Stats, ZCritical) {
  EXPECT_NEAR(z_critical(1e-3), 3.2905267314919, 1e-9);
  EXPECT_NEAR(z_critical(0.05), 1.9599639845401, 1e-9);
}

TEST(Stats, RunningMoments) {
  RunningMoments m;
  for (double x : {1.0, 2.0, 3.0, 4.0}) m.add(x);
  EXPECT_EQ(m.count(), 4u);
  EXPECT_DOUBLE_EQ(m.mean(), 2.5);
  EXPECT_DOUBLE_EQ(m.variance(), 5.0 / 3);
  EXPECT_NEAR(m.z(2.0), 0.5 / std::sqrt(5.0 / 12), 1e-12);
  RunningMoments flat;
  flat.add(1);
  flat.add(1);
  EXPECT_THROW(flat.z(1), domain_error);
}

TEST(Catalog, HasRequiredIdentities) {
  const auto& cat = list_identities();
  EXPECT_GE(cat.size(), 20u);
  std::set<std::string> ids;
  for (const auto& s : cat) {
    EXPECT_TRUE(ids.insert(s.id).second) << "duplicate id " << s.id;
    EXPECT_FALSE(s.formula.empty()) << s.id;
    EXPECT_TRUE(static_cast<bool>(s.run)) << s.id;
    if (s.test != TestKind::residual) EXPECT_NE(s.control_perturb, 0.0) << s.id;
  }
  for (const char* id :
       {"jamesid", "jamesid2", "betaKid", "beta-half", "beta-third", "beta-quarter", "stable-compose", "coag-local",
        "skn", "size-biased-n1", "tilde-s-laplace", "frag-duality-Kn", "cond-skn-frag", "mlmc-marginals",
        "ml-projection", "localtime-frag-beta", "lfr-mixture", "kn-limit", "poisson-switching", "structural-moments"})
    EXPECT_EQ(ids.count(id), 1u) << id;
}

TEST(Catalog, FindIdentity) {
  EXPECT_EQ(find_identity("betaKid").id, "betaKid");
  EXPECT_THROW(find_identity("no-such-identity"), domain_error);
}

TEST(RunIdentity, RejectsBadArguments) {
  EXPECT_THROW(run_identity("no-such-identity", 1000, 0), domain_error);
  EXPECT_THROW(run_identity("betaKid", 999, 0), domain_error);
}

TEST(RunIdentity, Reproducible) {
  for (const char* id : {"betaKid", "tilde-s-laplace", "frag-duality-Kn", "stirling-composition"}) {
    auto a = run_identity(id, 2000, 11);
    auto b = run_identity(id, 2000, 11);
    EXPECT_EQ(a.statistic, b.statistic) << id;
    EXPECT_EQ(a.threshold, b.threshold) << id;
    EXPECT_EQ(a.n_samples, b.n_samples) << id;
    EXPECT_EQ(a.pass, b.pass) << id;
  }
  auto a = run_identity("betaKid", 2000, 11), c = run_identity("betaKid", 2000, 12);
  EXPECT_NE(a.statistic, c.statistic);
}

TEST(RunIdentity, BetaKidPassesAndControlFails) {
  auto r = run_identity("betaKid", 100000, 7);
  EXPECT_TRUE(r.pass) << r.statistic << " > " << r.threshold;
  EXPECT_EQ(r.test, "two-sample-KS");
  EXPECT_EQ(r.n_samples, 100000u);
  auto ctl = run_identity("betaKid", 100000, 7, find_identity("betaKid").control_perturb);
  EXPECT_FALSE(ctl.pass) << ctl.statistic << " <= " << ctl.threshold;
}

TEST(RunIdentity, TildeSLaplace) {
  auto r = run_identity("tilde-s-laplace", 100000, 1);
  EXPECT_TRUE(r.pass) << r.statistic;
  EXPECT_NEAR(r.threshold, z_critical(), 1e-12);
}

TEST(RunIdentity, ResidualEntriesAreExact) {
  for (const char* id : {"stirling-composition", "pitman-moments", "mittag-decomposition", "mittag-hermite"}) {
    auto r = run_identity(id, 1000, 0);
    EXPECT_TRUE(r.pass) << id << ' ' << r.statistic;
    EXPECT_EQ(r.threshold, kResidualTolerance);
    auto ctl = run_identity(id, 1000, 0, 0.1);
    EXPECT_FALSE(ctl.pass) << id;
  }
}

TEST(RunSuite, FilterAndOrder) {
  auto r = run_suite("mittag", 1000, 0);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].id, "mittag-decomposition");
  EXPECT_EQ(r[1].id, "mittag-hermite");
  EXPECT_TRUE(run_suite("no-such-identity", 1000, 0).empty());
}

TEST(RunSuite, ParallelMatchesSerial) {
  auto serial = run_suite("beta", 2000, 3, 1);
  auto parallel = run_suite("beta", 2000, 3, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  ASSERT_GE(serial.size(), 4u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].id, parallel[i].id);
    EXPECT_EQ(serial[i].statistic, parallel[i].statistic) << serial[i].id;
  }
}

TEST(RunSuite, NegativeControlsFail) {
  auto r = run_suite("beta-", 20000, 0, 1, true);
  ASSERT_EQ(r.size(), 3u);
  for (const auto& x : r) {
    EXPECT_FALSE(x.pass) << x.id;
    EXPECT_TRUE(x.error.empty()) << x.id << ": " << x.error;
    EXPECT_NE(x.perturb, 0.0);
  }
}

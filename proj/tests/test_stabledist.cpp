#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <gtest/gtest.h>

#include "gibbs/gibbs.hpp"
#include "oracle.hpp"

using namespace gibbs;

namespace {

// int_0^inf g(t) dt by exp-sinh
template <class G>
double integrate_half_line(G g) {
  auto h = [&](double t) {
    double v = t > 0 && std::isfinite(t) ? g(t) : 0.0;
    return std::isfinite(v) ? v : 0.0;
  };
  boost::math::quadrature::exp_sinh<double> es;
  return es.integrate(h, 1e-11);
}

}  // namespace

TEST(StablePdf, HalfClosedForm) {
  EXPECT_NEAR(stable_pdf(0.5, 1), std::exp(-0.25) / (2 * std::sqrt(M_PI)), 1e-15);
  EXPECT_NEAR(stable_pdf(0.5, 1), 0.219696, 1e-6);
  for (double t : {0.01, 0.3, 7.0, 1e4}) EXPECT_NEAR(stable_pdf(0.5, t) / oracle::half_stable_pdf(t), 1.0, 1e-13);
}

TEST(StablePdf, RejectsBadArguments) {
  EXPECT_THROW(stable_pdf(0.5, 0), gibbs::domain_error);
  EXPECT_THROW(stable_pdf(0.5, -1), gibbs::domain_error);
  EXPECT_THROW(stable_pdf(1.0, 1), gibbs::domain_error);
}

TEST(StablePdf, LaplaceTransform) {
  for (double a : {0.3, 0.5, 0.7})
    for (double l : {0.5, 1.0, 2.0}) {
      double v = integrate_half_line([&](double t) { return std::exp(-l * t) * stable_pdf(a, t); });
      EXPECT_NEAR(v, std::exp(-std::pow(l, a)), 1e-6) << a << ' ' << l;
    }
}

TEST(StablePdf, SeriesAndIntegralAgreeAtSwitch) {
  // the implementation switches to the series once t^{-alpha} <= 1/4
  for (double a : {0.3, 0.7}) {
    double t0 = std::pow(0.25, -1 / a);
    double lo = stable_pdf(a, t0 * (1 - 1e-9)), hi = stable_pdf(a, t0 * (1 + 1e-9));
    EXPECT_NEAR(lo / hi, 1.0, 1e-7);
  }
}

TEST(StablePdf, AbelIdentity) {
  for (double a : {0.3, 0.5, 0.7})
    for (double t : {0.05, 0.4, 1.0, 3.0, 20.0}) {
      double lhs = a * frac_integral(a, 1 - a, t), rhs = t * stable_pdf(a, t);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-6) << a << ' ' << t;
    }
  EXPECT_NEAR(frac_integral(0.5, 0.5, 1), 2 * stable_pdf(0.5, 1), 1e-9);
  EXPECT_NEAR(frac_integral(0.5, 0.5, 1), 0.439392, 1e-6);
}

TEST(FracIntegral, LaplaceTransform) {
  for (double nu : {0.4, 1.5})
    for (double l : {0.7, 2.0}) {
      double a = 0.6;
      double v = integrate_half_line([&](double t) { return std::exp(-l * t) * frac_integral(a, nu, t); });
      EXPECT_NEAR(v, std::pow(l, -nu) * std::exp(-std::pow(l, a)), 1e-5) << nu << ' ' << l;
    }
}

TEST(TiltedPdf, Values) {
  EXPECT_NEAR(tilted_pdf(0.4, 0, 1.3), stable_pdf(0.4, 1.3), 1e-15);
  EXPECT_NEAR(tilted_pdf(0.5, 1, 1), 0.219696 / 2, 1e-6);
  for (double th : {-0.2, 0.8}) {
    double v = integrate_half_line([&](double t) { return tilted_pdf(0.35, th, t); });
    EXPECT_NEAR(v, 1.0, 1e-6);
  }
}

TEST(MlPdf, Values) {
  EXPECT_NEAR(ml_pdf(0.5, 0, 1e-8), 1 / std::sqrt(M_PI), 1e-7);
  for (double z : {0.1, 1.0, 3.0}) EXPECT_NEAR(ml_pdf(0.5, 0, z), std::exp(-z * z / 4) / std::sqrt(M_PI), 1e-13);
  double v = integrate_half_line([&](double z) { return ml_pdf(0.7, 0.4, z); });
  EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(LampertiPdf, Values) {
  EXPECT_NEAR(lamperti_pdf(0.5, 1), 1 / (2 * M_PI), 1e-15);
  double v = integrate_half_line([&](double y) { return lamperti_pdf(0.3, y); });
  EXPECT_NEAR(v, 1.0, 1e-8);
}

TEST(CondDensity, ReducesToStable) {
  for (double a : {0.4, 0.5})
    for (double t : {0.3, 1.0, 4.0}) EXPECT_NEAR(cond_density(a, 1 - a, a, t) / stable_pdf(a, t), 1.0, 1e-7);
}

TEST(CondDensity, IsDensityOfRatio) {
  // density of S_{alpha,omega} / beta_{omega,nu}
  double a = 0.6, w = 0.8, nu = 1.2;
  double mass = integrate_half_line([&](double t) { return cond_density(a, nu, w, t); });
  EXPECT_NEAR(mass, 1.0, 1e-6);
}

TEST(GibbsWeight, FirstEntryIsOne) {
  for (double t : {0.2, 1.0, 9.0}) EXPECT_EQ(gibbs_weight(0.3, 1, 1, t), 1.0);
}

TEST(GibbsWeight, BackwardRecursion) {
  // V_{n,k} = (n - k alpha) V_{n+1,k} + V_{n+1,k+1}
  auto table = conditional_weight_table(0.4, 1.3, 7);
  EXPECT_LT(table.backward_residual(), 1e-7);
}

TEST(GibbsWeight, HermiteRouteMatchesQuadrature) {
  for (double s : {0.5, 1.0, 2.0}) {
    double t = 1 / (2 * s * s);
    for (int n = 1; n <= 6; ++n)
      for (int k = 1; k <= n; ++k) {
        double q = gibbs_weight(0.5, n, k, t, {}, WeightRoute::quadrature);
        double h = gibbs_weight(0.5, n, k, t, {}, WeightRoute::hermite);
        EXPECT_NEAR(q / h, 1.0, 1e-6) << s << ' ' << n << ' ' << k;
      }
  }
}

TEST(GibbsWeight, HermiteRouteNeedsHalf) {
  EXPECT_THROW(gibbs_weight(0.4, 3, 2, 1.0, {}, WeightRoute::hermite), gibbs::domain_error);
}

TEST(SizeBiasedGenGamma, Normalised) {
  for (int j : {0, 1, 3}) {
    double v = integrate_half_line([&](double t) { return sizebiased_gengamma_pdf(0.45, j, 1.3, t); });
    EXPECT_NEAR(v, 1.0, 1e-6) << j;
  }
  EXPECT_NEAR(sizebiased_gengamma_pdf(0.45, 0, 1.3, 0.8),
              std::exp(std::pow(1.3, 0.45) - 1.3 * 0.8) * stable_pdf(0.45, 0.8), 1e-14);
}

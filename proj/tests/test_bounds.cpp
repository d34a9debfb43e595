#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "gevrey/bounds.hpp"
#include "gevrey/comparison_ode.hpp"

using namespace gevrey;

TEST(Persistence, Regimes) {
  const BoundResult small = persistence_time_basic(1.0, 0.4);
  EXPECT_TRUE(small.global());
  EXPECT_EQ(small.regime, "small-data-global");
  const BoundResult low = persistence_time_basic(1.0, 2.0);
  EXPECT_EQ(low.regime, "low-s");
  EXPECT_DOUBLE_EQ(low.value, 1.0 / 16.0);  // c / norm^{4/(2s-1)}
  const BoundResult high = persistence_time_basic(2.0, 2.0, ImpliedConstant(3.0));
  EXPECT_EQ(high.regime, "high-s");
  EXPECT_DOUBLE_EQ(high.value, 0.75);
  // threshold 1/(2c) = 1/6 with c = 3
  EXPECT_FALSE(persistence_time_basic(2.0, 0.2, ImpliedConstant(3.0)).global());
  EXPECT_TRUE(persistence_time_basic(2.0, 0.2, ImpliedConstant(3.0), 0.25).global());
  EXPECT_THROW(persistence_time_basic(1.5, 1.0), DomainError);
  EXPECT_THROW(persistence_time_basic(0.5, 1.0), DomainError);
  EXPECT_THROW(persistence_time_basic(1.0, 0.0), DomainError);
  EXPECT_THROW(ImpliedConstant(0.0), DomainError);
}

TEST(Persistence, BlowUpRates) {
  EXPECT_DOUBLE_EQ(blowup_rate_basic(1.0, 2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(blowup_rate_basic(1.0, 1.0, 0.75), std::pow(0.25, -0.25));
  EXPECT_DOUBLE_EQ(blowup_rate_basic(3.0, 1.0, 0.75), 2.0);
  EXPECT_THROW(blowup_rate_basic(1.0, 1.0, 1.0), DomainError);
  EXPECT_DOUBLE_EQ(sobolev_blowup_rate(2.0, 1.0, 0.0, ImpliedConstant(2.0)), 2.0);
  EXPECT_DOUBLE_EQ(sobolev_existence_time(1.0, 2.0), 1.0 / 16.0);
}

TEST(Envelope, SolvesItsMajorantOde) {
  for (double s : {0.75, 1.0, 1.25}) {
    const double beta = 0.3, norm0 = 1.5, c = 0.7;
    const double ts = t_star(s, beta, norm0, ImpliedConstant(c));
    ComparisonOptions o;
    for (double f : {0.2, 0.5, 0.8}) o.sample_times.push_back(f * ts);
    const auto sol = integrate_comparison(ComparisonODE::analyticity(s, beta, c), norm0, 0.8 * ts, o);
    ASSERT_EQ(sol.sample_t.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i)
      EXPECT_NEAR(sol.sample_y[i] / gevrey_growth_envelope(s, beta, norm0, ImpliedConstant(c), sol.sample_t[i]), 1.0,
                  1e-8);
    const auto to_blowup = integrate_comparison(ComparisonODE::analyticity(s, beta, c), norm0, 2.0 * ts);
    ASSERT_TRUE(to_blowup.blowup_time);
    EXPECT_NEAR(*to_blowup.blowup_time / ts, 1.0, 1e-4);
    EXPECT_THROW(gevrey_growth_envelope(s, beta, norm0, ImpliedConstant(c), ts), DomainError);
  }
}

TEST(Sigma, RootOfOptimalityEquation) {
  const double sigma = sigma_root();
  EXPECT_GT(sigma, 1.0);
  EXPECT_LT(sigma, 2.5);
  EXPECT_LT(std::abs(sigma_equation(sigma)), 1e-12);
}

TEST(OptimalRadius, MaximizesRadiusBound) {
  for (double s : {0.75, 1.0, 1.3})
    for (double norm0 : {0.5, 2.0}) {
      const OptimalRadius opt = optimal_beta_and_radius(s, norm0, 0.1);
      EXPECT_NEAR(opt.lambda, radius_bound(s, norm0, 0.1, opt.beta), 1e-15);
      double best = 0.0, best_beta = 0.0;
      for (int i = 1; i <= 20000; ++i) {
        const double beta = opt.beta * 3.0 * i / 20000.0;
        const double r = radius_bound(s, norm0, 0.1, beta);
        if (r > best) best = r, best_beta = beta;
      }
      EXPECT_LE(best, opt.lambda * (1.0 + 1e-12));
      EXPECT_NEAR(best_beta / opt.beta, 1.0, 1e-3);
    }
}

TEST(Zeta, BranchesAndDomain) {
  EXPECT_THROW(zeta_time_bound(2.5, 1.0, 1.0, 0.2), DomainError);
  EXPECT_THROW(zeta_time_bound(3.0, 1.0, 1.0, 0.0), DomainError);
  const double s = 3.0, l2 = 1.0, beta = 0.2;
  const double threshold = std::pow(beta, -4.0 * s / 5.0);
  const BoundResult large = zeta_time_bound(s, 1.01 * threshold, l2, beta);
  EXPECT_EQ(large.regime, "large-data");
  EXPECT_NEAR(large.value, std::pow(1.01 * threshold, -5.0 / (2.0 * s)), 1e-15);
  const BoundResult moderate = zeta_time_bound(s, 2.0, l2, beta);
  EXPECT_EQ(moderate.regime, "moderate-data");
  const double z = std::pow(2.0, -5.0 / 6.0);
  EXPECT_DOUBLE_EQ(moderate.value, std::min(z, std::pow(z, 0.4)));
}

TEST(Vorticity, BranchesAndCubeLawLabel) {
  const BoundResult mid = X_time_bound(1.5, 2.0, 0.25);
  EXPECT_NE(mid.regime.find("cube-law-interpretation"), std::string::npos);
  const BoundResult large = X_time_bound(2.0, 100.0, 0.25);
  EXPECT_EQ(large.regime, "large-data");
  EXPECT_DOUBLE_EQ(large.value, std::pow(100.0, -4.0 / 3.0));
  const BoundResult moderate = X_time_bound(2.0, 0.5, 0.25);
  EXPECT_EQ(moderate.regime, "moderate-data");
  EXPECT_THROW(X_time_bound(2.5, 1.0, 0.25), DomainError);
  EXPECT_EQ(persistence_time_mid(2.0, 0.5, 0.25).value, moderate.value);
}

TEST(Crossing, ResidualsAndDegenerateCases) {
  const CrossingVariant all[] = {CrossingVariant::Quadratic, CrossingVariant::FiveHalves, CrossingVariant::QuadraticBeta,
                                 CrossingVariant::CubeLaw};
  for (CrossingVariant v : all)
    for (double a : {0.0, 0.3, 5.0})
      for (double b : {0.0, 0.7, 9.0}) {
        if (a == 0.0 && b == 0.0) continue;
        const double t = crossing_time(v, a, b, 2.0);
        const double p = v == CrossingVariant::FiveHalves ? 2.5 : 2.0;
        EXPECT_GT(t, 0.0);
        EXPECT_LT(std::abs(a * std::pow(t, p) + b * t - 2.0), 1e-12);
      }
  EXPECT_THROW(crossing_time(CrossingVariant::Quadratic, 0.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(crossing_time(CrossingVariant::Quadratic, 1.0, 1.0, 0.0), DomainError);
}

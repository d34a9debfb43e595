#include <cmath>

#include <gtest/gtest.h>

#include "gevrey/comparison_ode.hpp"

using namespace gevrey;

TEST(ComparisonOde, PowerLawMatchesClosedForm) {
  const double p = 0.8, c = 1.3, y0 = 2.0;
  const double tsing = std::pow(y0, -p) / (c * p);
  ComparisonOptions o;
  for (double f : {0.1, 0.5, 0.9, 0.99}) o.sample_times.push_back(f * tsing);
  const auto sol = integrate_comparison(ComparisonODE::power_law(p, c), y0, 2.0 * tsing, o);
  ASSERT_EQ(sol.sample_t.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const double exact = std::pow(std::pow(y0, -p) - c * p * sol.sample_t[i], -1.0 / p);
    EXPECT_NEAR(sol.sample_y[i] / exact, 1.0, 1e-8);
  }
  ASSERT_TRUE(sol.blowup_time);
  ASSERT_TRUE(sol.threshold_crossing);
  EXPECT_LE(*sol.threshold_crossing, *sol.blowup_time);
  EXPECT_NEAR(*sol.blowup_time / tsing, 1.0, 1e-6);
  for (std::size_t i = 1; i < sol.y.size(); ++i) EXPECT_GE(sol.y[i], sol.y[i - 1]);
}

TEST(ComparisonOde, ZeroCoefficientsGiveConstantSolution) {
  ComparisonODE ode = ComparisonODE::zeta(3.0, 1.0, 0.2, 0.0);
  ComparisonOptions o;
  o.sample_times = {0.5, 1.0};
  const auto sol = integrate_comparison(ode, 3.0, 1.0, o);
  EXPECT_FALSE(sol.blowup_time);
  ASSERT_EQ(sol.sample_y.size(), 2u);
  EXPECT_EQ(sol.sample_y[0], 3.0);
  EXPECT_EQ(sol.y.back(), 3.0);
}

TEST(ComparisonOde, ClosedFormSpotValues) {
  EXPECT_NEAR(closed_form_phi(5.0, 1.0, 1.0, 0.5), 4.0, 1e-14);
  EXPECT_EQ(closed_form_phi(PhiFamily::CubeLaw, 0.0, 2.0, 3.0, 0.0), 3.0);
  // cube law: (y0^-2 - c t)^{-1/2}
  EXPECT_NEAR(closed_form_phi(PhiFamily::CubeLaw, 0.0, 1.0, 1.0, 0.75), 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(phi_exponent(PhiFamily::Vorticity, 0.5), 2.0);
  EXPECT_THROW(closed_form_phi(5.0, 1.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(closed_form_phi(5.0, 1.0, 0.0, 0.1), DomainError);
}

TEST(ComparisonOde, ClosedFormSolvesItsOde) {
  // phi' = (coeff / p) phi^{1+p}
  const double s = 3.5, coeff = 0.8, y0 = 1.7;
  const double p = phi_exponent(PhiFamily::Zeta, s);
  const double t = 0.4 * std::pow(y0, -p) / coeff, h = 1e-6;
  const double deriv = (closed_form_phi(s, coeff, y0, t + h) - closed_form_phi(s, coeff, y0, t - h)) / (2.0 * h);
  EXPECT_NEAR(deriv / (coeff / p * std::pow(closed_form_phi(s, coeff, y0, t), 1.0 + p)), 1.0, 1e-8);
}

TEST(ComparisonOde, FactoryDomains) {
  EXPECT_THROW(ComparisonODE::zeta(2.5, 1.0, 0.2), DomainError);
  EXPECT_THROW(ComparisonODE::vorticity(1.5, 0.2), DomainError);
  EXPECT_THROW(ComparisonODE::power_law(0.0), DomainError);
  EXPECT_THROW(ComparisonODE::analyticity(1.5, 0.2), DomainError);
  EXPECT_THROW(integrate_comparison(ComparisonODE::power_law(1.0), -1.0, 1.0), DomainError);
  EXPECT_DOUBLE_EQ(ComparisonODE::low_s(1.0).power, 4.0);
  EXPECT_NEAR(ComparisonODE::zeta_from_l2(5.0, 4.0, 0.1).gamma, 2.0, 1e-15);
}

TEST(ComparisonOde, ZetaRhsTerms) {
  ComparisonODE ode = ComparisonODE::zeta(3.0, 2.0, 0.5, 1.0);
  ode.coeffs = {1.0, 0.0, 0.0, 0.0};
  EXPECT_NEAR(ode.rhs(1.0, 4.0), 2.0 * std::pow(4.0, 1.0 + 5.0 / 6.0), 1e-12);
  ode.coeffs = {0.0, 1.0, 0.0, 0.0};
  EXPECT_NEAR(ode.rhs(2.0, 3.0), 9.0, 1e-12);  // (beta t)^{1/2} y^2 with beta t = 1
  ode.coeffs = {0.0, 0.0, 0.0, 1.0};
  EXPECT_NEAR(ode.rhs(4.0, 2.0), 8.0 * 8.0, 1e-12);  // (beta t)^3 y^3 with beta t = 2
  const ComparisonODE v = ComparisonODE::vorticity(1.0, 0.5);
  EXPECT_NEAR(v.rhs(0.0, 2.0), std::pow(2.0, 1.0 + 4.0 / 3.0), 1e-12);
}

TEST(ComparisonOde, StalledRunsAreReported) {
  ComparisonOptions o;
  o.max_steps = 3;
  const auto sol = integrate_comparison(ComparisonODE::power_law(1.0, 1.0), 1.0, 0.9, o);
  EXPECT_TRUE(sol.stalled);
  EXPECT_FALSE(sol.blowup_time);
}

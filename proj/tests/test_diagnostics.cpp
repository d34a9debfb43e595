#include <cmath>

#include <gtest/gtest.h>

#include "gevrey/diagnostics.hpp"
#include "gevrey/initial_data.hpp"
#include "gevrey/solver.hpp"
#include "oracles.hpp"

using namespace gevrey;

TEST(Track, ZeroRadiusEqualsSobolevNorm) {
  const WavevectorGrid g(6);
  IntegratorSpec spec;
  spec.dt = 0.01;
  const Trajectory tr = run(random_band(g, 1, 3, 3, 2.0), 0.1, spec, 2);
  const GevreyTrack track = track_gevrey(tr.snapshots, TimeVaryingWeight(1.5, 0.0, 0.0));
  ASSERT_EQ(track.norm.size(), tr.snapshots.size());
  for (std::size_t i = 0; i < track.norm.size(); ++i) EXPECT_EQ(track.norm[i], sobolev_norm(tr.snapshots[i].u, 1.5));
  EXPECT_FALSE(track.truncated);
}

TEST(Track, StopsAtOverflow) {
  const WavevectorGrid g(8);
  SpectralField u(g);
  u.set_mode({8, 8, 8}, {Complex(1), Complex(-1), Complex(0)});
  std::vector<SolverState> series{{0.0, u}, {1000.0, u}};
  const GevreyTrack track = track_gevrey(series, TimeVaryingWeight(0.0, 0.0, 0.5));
  EXPECT_EQ(track.norm.size(), 1u);
  EXPECT_TRUE(track.truncated);
  EXPECT_EQ(track.truncated_at, 1000.0);
}

TEST(Radius, RecoversExponentialDecay) {
  for (int n : {8, 16})
    for (double lambda : {0.1, 0.3, 0.6, 1.0}) {
      const SpectralField u = shaped_field(WavevectorGrid(n), [lambda](double k) { return std::exp(-lambda * k); });
      const RadiusEstimate est = estimate_radius(u);
      EXPECT_NEAR(est.lambda, lambda, 0.1 * lambda) << "N=" << n;
      EXPECT_EQ(est.flag, DecayShape::Exponential);
      EXPECT_GT(est.fit_quality, 0.999);
    }
}

TEST(Radius, FlagsOtherShapes) {
  const WavevectorGrid g(16);
  EXPECT_EQ(estimate_radius(shaped_field(g, [](double k) { return std::exp(-0.2 * k * k); })).flag,
            DecayShape::SuperExponential);
  EXPECT_EQ(estimate_radius(shaped_field(g, [](double k) { return std::pow(k, -3.0); })).flag,
            DecayShape::SubExponential);
  EXPECT_EQ(estimate_radius(shear_flow(g)).flag, DecayShape::InsufficientData);
  EXPECT_THROW(estimate_radius(SpectralField(g)), DomainError);
}

TEST(Orthogonality, HoldsForSolenoidalFields) {
  const WavevectorGrid g(5);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const SpectralField u = random_decaying(g, 0.5, seed);
    EXPECT_LT(orthogonality_residual(u, 1.0, 0.1, Backend::Direct), 1e-13);
    EXPECT_LT(orthogonality_residual(u, 1.5, 0.2, Backend::Fast), 1e-13);
  }
}

TEST(Orthogonality, FailsWithoutIncompressibility) {
  const WavevectorGrid g(4);
  EXPECT_GT(orthogonality_residual(random_compressible(g, 0.5, 4), 0.0, 0.0, Backend::Direct), 1e-4);
}

TEST(Trilinear, ReportsAreConsistent) {
  const WavevectorGrid g(4);
  const SpectralField u = random_decaying(g, 0.5, 2);
  const TrilinearReport r = velocity_commutator_f0(u, 1.0, 0.1);
  EXPECT_NEAR(r.implied_constant * r.rhs_sum(), r.lhs, 1e-14 * r.lhs);
  EXPECT_NEAR(r.lhs, std::abs(trilinear_velocity_lhs(u, 1.0, 0.1, Backend::Fast)), 1e-12 * r.lhs);
  const SecondVelocityReports ii = velocity_commutator_f1(u, 1.5, 0.2);
  EXPECT_EQ(ii.two_term.rhs_terms.size(), 2u);
  EXPECT_EQ(ii.young_closed.rhs_terms.size(), 3u);
  const VorticityReports vr = vorticity_commutator_bounds(curl(u), u, 0.5, 0.1);
  EXPECT_GT(vr.stretching.implied_constant, 0.0);
  EXPECT_THROW(velocity_commutator_f0(u, 0.0, 0.1), DomainError);
  EXPECT_THROW(velocity_commutator_f1(u, 0.5, 0.1), DomainError);
  EXPECT_THROW(vorticity_commutator_bounds(curl(u), u, 1.5, 0.1), DomainError);
  EXPECT_THROW(vorticity_commutator_bounds(u, u, 0.5, 0.1), ConsistencyError);
}

TEST(Inequalities, ExponentialMomentAndInterpolation) {
  const WavevectorGrid g(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpectralField u = random_decaying(g, 0.1 * double(seed % 5), seed);
    const NormInequality e = exponential_moment_check(u, 0.5 + 0.1 * double(seed), 0.05 * double(seed));
    EXPECT_LE(e.lhs, e.rhs);
    const NormInequality i = interpolation_check(u, 0.0, 1.0, 2.0);
    EXPECT_NEAR(i.lhs, oracle::wiener_norm(u, 0.0), 1e-13 * i.lhs);
    EXPECT_GT(i.ratio, 0.0);
  }
  EXPECT_THROW(interpolation_check(random_decaying(g, 0.2, 1), 0.0, 1.5, 2.0), DomainError);
  EXPECT_THROW(exponential_moment_check(random_decaying(g, 0.2, 1), 0.0, 0.1), DomainError);
}

namespace {

/// Second-order one-sided difference of f along the Galerkin flow from u0.
template <class Norm>
double flow_derivative(const SpectralField& u0, double h, Norm&& norm) {
  IntegratorSpec spec;
  spec.dt = h;
  GalerkinSolver solver(u0.grid(), spec);
  const SolverState s0{0.0, u0};
  const SolverState s1 = solver.step(s0);
  const SolverState s2 = solver.step(s1);
  return (-3.0 * norm(s0) + 4.0 * norm(s1) - norm(s2)) / (2.0 * h);
}

}  // namespace

TEST(NormRate, VelocityMatchesFiniteDifference) {
  const WavevectorGrid g(6);
  const SpectralField u = random_band(g, 1, 3, 9, 6.0);
  for (double beta : {0.0, 0.25}) {
    const NormRate r = velocity_norm_rate(u, 1.0, 0.1, beta, 0.0);
    const double fd = flow_derivative(u, 1e-5, [&](const SolverState& st) {
      return gevrey_norm(st.u, GevreyWeight(1.0, 0.1 + beta * st.t));
    });
    EXPECT_NEAR(r.norm, gevrey_norm(u, GevreyWeight(1.0, 0.1)), 1e-14 * r.norm);
    EXPECT_NEAR(r.rate, fd, 1e-6 * std::abs(fd));
  }
}

TEST(NormRate, VorticityMatchesFiniteDifference) {
  const WavevectorGrid g(6);
  const SpectralField u = random_band(g, 1, 3, 10, 6.0);
  const NormRate r = vorticity_norm_rate(u, 1.0, 0.25, 0.0);
  const double fd = flow_derivative(u, 1e-5, [](const SolverState& st) {
    return gevrey_norm(curl(st.u), GevreyWeight(1.0, 0.25 * st.t));
  });
  EXPECT_NEAR(r.rate, fd, 1e-6 * std::abs(fd));
}

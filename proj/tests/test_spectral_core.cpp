#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "gevrey/field_io.hpp"
#include "gevrey/initial_data.hpp"
#include "gevrey/spectral_ops.hpp"
#include "oracles.hpp"

using namespace gevrey;

TEST(Grid, IndexRoundTripAndNegation) {
  const WavevectorGrid g(3);
  EXPECT_EQ(g.slots(), 343u);
  EXPECT_EQ(g.mode_count(), 342u);
  oracle::for_each_k(3, [&](const Wavevector& k) {
    const std::size_t i = g.index(k);
    EXPECT_EQ(g.wavevector(i), k);
    EXPECT_EQ(g.wavevector(g.negated(i)), negate(k));
    EXPECT_DOUBLE_EQ(g.magnitude(i) * g.magnitude(i), squared_length(k));
  });
  EXPECT_FALSE(g.contains({0, 0, 0}));
  EXPECT_FALSE(g.contains({4, 0, 0}));
}

TEST(Grid, RejectsBadCutoff) {
  EXPECT_THROW(WavevectorGrid(0), DomainError);
  EXPECT_THROW(WavevectorGrid(WavevectorGrid::kMaxCutoff + 1), DomainError);
}

TEST(Field, SetModeKeepsHermitianPartner) {
  SpectralField u{WavevectorGrid(2)};
  u.set_mode({1, -2, 0}, {Complex(1, 2), Complex(0, -1), Complex(3, 0)});
  const Vec3c& m = u.at({-1, 2, 0});
  EXPECT_EQ(m[0], Complex(1, -2));
  EXPECT_EQ(m[1], Complex(0, 1));
  EXPECT_EQ(u.reality_defect(), 0.0);
  EXPECT_THROW(u.set_mode({0, 0, 0}, {}), DomainError);
  EXPECT_THROW(u.at({3, 0, 0}), DomainError);
}

TEST(Field, ArithmeticRequiresMatchingGrids) {
  SpectralField a{WavevectorGrid(2)}, b{WavevectorGrid(3)};
  EXPECT_THROW(a += b, GridMismatch);
  EXPECT_THROW(inner_product(a, b), GridMismatch);
}

TEST(Leray, IdempotentAndSolenoidal) {
  const WavevectorGrid g(5);
  const SpectralField raw = random_compressible(g, 0.3, 11);
  EXPECT_GT(raw.divergence_defect(), 1e-3);
  const SpectralField p = project_leray(raw);
  EXPECT_LT(p.divergence_defect(), 1e-14 * p.max_amplitude());
  const SpectralField pp = project_leray(p);
  EXPECT_LT(l2_norm(pp - p), 1e-15 * l2_norm(p));
  // orthogonal projection: <raw - p, p> = 0
  EXPECT_NEAR(inner_product(raw - p, p), 0.0, 1e-13 * l2_norm(raw) * l2_norm(p));
}

TEST(Norms, ExactFlowValues) {
  const WavevectorGrid g(4);
  const SpectralField shear = shear_flow(g, 2.0);
  // (0, 2 cos x, 0): two modes of amplitude 1
  EXPECT_DOUBLE_EQ(l2_norm(shear), std::sqrt(2.0));
  EXPECT_NEAR(gevrey_norm(shear, GevreyWeight(3.0, 0.5)), std::sqrt(2.0) * std::exp(0.5), 1e-14);
  const SpectralField tg = taylor_green(g);
  EXPECT_LT(tg.divergence_defect(), 1e-16);
  // |k|^2 = 2 on every mode
  for (double s : {0.5, 1.0, 2.5})
    EXPECT_NEAR(sobolev_norm(tg, s), l2_norm(tg) * std::pow(2.0, s / 2.0), 1e-14);
}

TEST(Norms, MatchDirectSums) {
  const WavevectorGrid g(5);
  const SpectralField u = oracle::random_solenoidal(g, 0.4, 3);
  const SpectralField v = oracle::random_solenoidal(g, 0.2, 4);
  for (double s : {0.0, 1.0, 2.5})
    for (double a : {0.0, 0.3})
      for (double th : {0.5, 1.0})
        EXPECT_NEAR(gevrey_norm(u, GevreyWeight(s, a, th)), oracle::gevrey_norm(u, s, a, th),
                    1e-13 * oracle::gevrey_norm(u, s, a, th));
  EXPECT_NEAR(wiener_norm(u, 1.0, 0.2), oracle::wiener_norm(u, 1.0, 0.2), 1e-13 * oracle::wiener_norm(u, 1.0, 0.2));
  EXPECT_NEAR(inner_product(u, v), oracle::inner_product(u, v), 1e-13 * l2_norm(u) * l2_norm(v));
  EXPECT_NEAR(inner_product(u, u), l2_norm(u) * l2_norm(u), 1e-13 * inner_product(u, u));
}

TEST(Norms, LogSpacePathAndOverflow) {
  const WavevectorGrid g(8);
  SpectralField u(g);
  u.set_mode({1, 0, 0}, {Complex(0), Complex(1), Complex(0)});
  // worst-case log weight exceeds the direct-path guard, but the norm is representable
  EXPECT_NEAR(gevrey_norm(u, GevreyWeight(0.0, 25.0)) / (std::sqrt(2.0) * std::exp(25.0)), 1.0, 1e-14);
  SpectralField high(g);
  high.set_mode({8, 8, 8}, {Complex(1), Complex(-1), Complex(0)});
  EXPECT_THROW(gevrey_norm(high, GevreyWeight(0.0, 60.0)), OverflowError);
}

TEST(Weights, Validation) {
  EXPECT_THROW(GevreyWeight(1.0, -0.1), DomainError);
  EXPECT_THROW(GevreyWeight(1.0, 0.1, 0.0), DomainError);
  EXPECT_THROW(GevreyWeight(1.0, 0.1, 1.5), DomainError);
  EXPECT_THROW(TimeVaryingWeight(1.0, 0.0, 0.6), DomainError);
  EXPECT_THROW(wiener_norm(SpectralField{WavevectorGrid(2)}, 0.0, -1.0), DomainError);
}

TEST(Curl, TaylorGreenVorticity) {
  const WavevectorGrid g(3);
  const SpectralField u = taylor_green(g);
  const SpectralField w = curl(u);
  // w = (0, 0, -2 cos x1 cos x2): four modes of z-amplitude -1/2
  EXPECT_NEAR(l2_norm(w), 1.0, 1e-15);
  EXPECT_NEAR(w.at({1, 1, 0})[2].real(), -0.5, 1e-15);
  EXPECT_LT(w.divergence_defect(), 1e-15);
  // ||curl u|| = ||u||_1 for solenoidal u
  const SpectralField r = oracle::random_solenoidal(g, 0.5, 9);
  EXPECT_NEAR(l2_norm(curl(r)), sobolev_norm(r, 1.0), 1e-13 * sobolev_norm(r, 1.0));
}

TEST(Restrict, TruncatesAndExtends) {
  const SpectralField u = oracle::random_solenoidal(WavevectorGrid(6), 0.3, 5);
  const SpectralField lo = restrict_to(u, WavevectorGrid(3));
  const SpectralField back = restrict_to(lo, WavevectorGrid(6));
  oracle::for_each_k(6, [&](const Wavevector& k) {
    const bool inside = std::abs(k[0]) <= 3 && std::abs(k[1]) <= 3 && std::abs(k[2]) <= 3;
    EXPECT_EQ(back.at(k), inside ? u.at(k) : Vec3c{});
  });
}

TEST(FieldIo, RoundTripIsExact) {
  const SpectralField u = random_band(WavevectorGrid(4), 1, 3, 7, 2.0);
  const SpectralField v = field_from_json(field_to_json(u));
  EXPECT_EQ(l2_norm(u - v), 0.0);
  const auto path = std::filesystem::temp_directory_path() / "gevrey_field_roundtrip.json";
  save_field(u, path.string());
  const SpectralField w = load_field(path.string());
  EXPECT_EQ(l2_norm(u - w), 0.0);
  std::filesystem::remove(path);
}

TEST(FieldIo, RejectsMalformedInput) {
  using nlohmann::json;
  auto mode = [](json k, json re, json im) { return json{{"k", k}, {"re", re}, {"im", im}}; };
  EXPECT_THROW(field_from_json(json{{"modes", json::array()}}), ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 1.5}, {"modes", json::array()}}), ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 2}, {"modes", {mode({3, 0, 0}, {0, 1, 0}, {0, 0, 0})}}}), ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 2}, {"modes", {mode({0, 0, 0}, {0, 1, 0}, {0, 0, 0})}}}), ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 2},
                                    {"modes", {mode({1, 0, 0}, {0, 1, 0}, {0, 0, 0}), mode({-1, 0, 0}, {0, 1, 0}, {0, 0, 0})}}}),
               ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 2}, {"solenoidal", true}, {"modes", {mode({1, 0, 0}, {1, 0, 0}, {0, 0, 0})}}}),
               ConfigError);
  EXPECT_THROW(field_from_json(json{{"N", 2}, {"modes", {mode({1, 0}, {1, 0, 0}, {0, 0, 0})}}}), ConfigError);
  EXPECT_NO_THROW(field_from_json(json{{"N", 2}, {"solenoidal", false}, {"modes", {mode({1, 0, 0}, {1, 0, 0}, {0, 0, 0})}}}));

  const auto path = std::filesystem::temp_directory_path() / "gevrey_field_bad.json";
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load_field(path.string()), ConfigError);
  std::filesystem::remove(path);
  EXPECT_THROW(load_field("/nonexistent/field.json"), ConfigError);
}

TEST(InitialData, SeededAndNormalized) {
  const WavevectorGrid g(6);
  const SpectralField a = random_band(g, 2, 4, 42, 3.0);
  const SpectralField b = random_band(g, 2, 4, 42, 3.0);
  EXPECT_EQ(l2_norm(a - b), 0.0);
  EXPECT_NEAR(l2_norm(a), 3.0, 1e-14);
  EXPECT_TRUE(is_solenoidal(a));
  oracle::for_each_k(6, [&](const Wavevector& k) {
    const double m = std::sqrt(squared_length(k));
    if (m < 2 || m > 4) {
      EXPECT_EQ(oracle::amp_sq(a, k), 0.0L);
    }
  });
  EXPECT_GT(l2_norm(a - random_band(g, 2, 4, 43, 3.0)), 0.1);
  EXPECT_THROW(random_band(g, 0.5, 2, 1), DomainError);
}

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "gevrey/errors.hpp"
#include "gevrey/field.hpp"
#include "gevrey/spectral_ops.hpp"

// Canonical generator set for test flows. None of these is privileged by the
// theory; they are fixed so runs are reproducible from (recipe, seed).

namespace gevrey {

/// u = amplitude * (0, cos x1, 0): an exact steady solution of the inviscid
/// advection, so the Galerkin flow is pure heat decay.
inline SpectralField shear_flow(const WavevectorGrid& g, double amplitude = 1.0) {
  SpectralField u(g);
  u.set_mode({1, 0, 0}, {Complex(0.0), Complex(0.5 * amplitude), Complex(0.0)});
  return u;
}

/// u = amplitude * (cos x1 sin x2, -sin x1 cos x2, 0).
inline SpectralField taylor_green(const WavevectorGrid& g, double amplitude = 1.0) {
  SpectralField u(g);
  const Complex q(0.0, 0.25 * amplitude);
  // u1 coefficient is -i/4 sgn(k2), u2 coefficient is +i/4 sgn(k1); k1 = -1 by conjugation
  for (int b : {-1, 1}) u.set_mode({1, b, 0}, {-q * double(b), q, Complex(0.0)});
  return u;
}

namespace detail {

/// Fills modes with iid complex Gaussians times envelope(|k|), then projects.
template <class Envelope>
SpectralField gaussian_field(const WavevectorGrid& g, std::uint64_t seed, Envelope&& envelope) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField u(g);
  auto c = u.unchecked_coefficients();
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    if (!g.is_canonical(idx)) return;
    const double e = envelope(g.magnitude(idx));
    Vec3c v;
    for (int i = 0; i < 3; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      v[i] = e * Complex(re, im);
    }
    c[idx] = v;
    c[g.negated(idx)] = conj(v);
  });
  return project_leray(u);
}

inline SpectralField normalized(SpectralField u, double l2) {
  const double n = l2_norm(u);
  if (n == 0.0) throw DomainError("generated field is identically zero");
  u *= l2 / n;
  return u;
}

}  // namespace detail

/// Seeded solenoidal field with Gaussian coefficients supported on n1 <= |k| <= n2,
/// scaled to the given L2 norm.
inline SpectralField random_band(const WavevectorGrid& g, double n1, double n2, std::uint64_t seed,
                                 double l2 = 1.0) {
  if (!(n1 >= 1.0 && n2 >= n1)) throw DomainError("band must satisfy 1 <= n1 <= n2");
  if (!(l2 >= 0.0)) throw DomainError("amplitude must be >= 0");
  auto u = detail::gaussian_field(g, seed, [&](double kmag) { return (kmag >= n1 && kmag <= n2) ? 1.0 : 0.0; });
  if (l2 == 0.0) return SpectralField(g);
  return detail::normalized(std::move(u), l2);
}

/// Seeded solenoidal field with Gaussian coefficients of envelope exp(-decay |k|),
/// scaled to the given L2 norm. Used for ensembles that must compare across N.
inline SpectralField random_decaying(const WavevectorGrid& g, double decay, std::uint64_t seed,
                                     double l2 = 1.0) {
  if (!(decay >= 0.0)) throw DomainError("decay rate must be >= 0");
  auto u = detail::gaussian_field(g, seed, [&](double kmag) { return std::exp(-decay * kmag); });
  return detail::normalized(std::move(u), l2);
}

/// Unprojected Gaussian field (generic nonzero divergence) for negative controls.
inline SpectralField random_compressible(const WavevectorGrid& g, double decay, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField u(g);
  auto c = u.unchecked_coefficients();
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    if (!g.is_canonical(idx)) return;
    const double e = std::exp(-decay * g.magnitude(idx));
    Vec3c v;
    for (int i = 0; i < 3; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      v[i] = e * Complex(re, im);
    }
    c[idx] = v;
    c[g.negated(idx)] = conj(v);
  });
  return u;
}

/// Deterministic solenoidal field with |u_hat(k)| proportional to profile(|k|) on
/// every mode: a fixed transverse direction per k, phase-free.
template <class Profile>
SpectralField shaped_field(const WavevectorGrid& g, Profile&& profile) {
  SpectralField u(g);
  auto c = u.unchecked_coefficients();
  g.for_each_mode([&](std::size_t idx, const Wavevector& k) {
    if (!g.is_canonical(idx)) return;
    // e x k for the coordinate axis e least aligned with k, normalized
    int axis = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(k[i]) < std::abs(k[axis])) axis = i;
    double d[3] = {0, 0, 0};
    d[axis] = 1.0;
    double t[3] = {d[1] * k[2] - d[2] * k[1], d[2] * k[0] - d[0] * k[2], d[0] * k[1] - d[1] * k[0]};
    const double tn = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
    const double a = profile(g.magnitude(idx)) / tn;
    Vec3c v{Complex(a * t[0]), Complex(a * t[1]), Complex(a * t[2])};
    c[idx] = v;
    c[g.negated(idx)] = conj(v);
  });
  return u;
}

}  // namespace gevrey

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "gevrey/field.hpp"

// Direct-sum reference implementations used only by the tests. They walk the
// integer lattice explicitly in long double and share no code with the library
// norms beyond coefficient access.

namespace oracle {

using gevrey::SpectralField;
using gevrey::Wavevector;

template <class F>
void for_each_k(int n, F&& f) {
  for (int a = -n; a <= n; ++a)
    for (int b = -n; b <= n; ++b)
      for (int c = -n; c <= n; ++c)
        if (a != 0 || b != 0 || c != 0) f(Wavevector{a, b, c});
}

inline long double kmag(const Wavevector& k) {
  return std::sqrt((long double)k[0] * k[0] + (long double)k[1] * k[1] + (long double)k[2] * k[2]);
}

inline long double amp_sq(const SpectralField& u, const Wavevector& k) {
  long double s = 0;
  for (const auto& z : u.at(k)) s += (long double)z.real() * z.real() + (long double)z.imag() * z.imag();
  return s;
}

/// (sum |k|^{2s} e^{2 alpha |k|^theta} |u_k|^2)^{1/2}
inline double gevrey_norm(const SpectralField& u, double s, double alpha, double theta = 1.0) {
  long double acc = 0;
  for_each_k(u.grid().cutoff(), [&](const Wavevector& k) {
    const long double m = kmag(k);
    acc += std::pow(m, 2.0L * s) * std::exp(2.0L * alpha * std::pow(m, (long double)theta)) * amp_sq(u, k);
  });
  return double(std::sqrt(acc));
}

inline double wiener_norm(const SpectralField& u, double r, double alpha = 0.0) {
  long double acc = 0;
  for_each_k(u.grid().cutoff(), [&](const Wavevector& k) {
    const long double m = kmag(k);
    acc += std::pow(m, (long double)r) * std::exp((long double)alpha * m) * std::sqrt(amp_sq(u, k));
  });
  return double(acc);
}

inline double inner_product(const SpectralField& u, const SpectralField& v) {
  long double acc = 0;
  for_each_k(u.grid().cutoff(), [&](const Wavevector& k) {
    const auto& a = u.at(k);
    const auto& b = v.at(k);
    for (int c = 0; c < 3; ++c)
      acc += (long double)a[c].real() * b[c].real() + (long double)a[c].imag() * b[c].imag();
  });
  return double(acc);
}

/// Solenoidal field with uniform random amplitudes times exp(-decay |k|), built
/// mode by mode with an explicit transverse projection.
inline SpectralField random_solenoidal(const gevrey::WavevectorGrid& g, double decay, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  SpectralField u(g);
  for_each_k(g.cutoff(), [&](const Wavevector& k) {
    // one representative per {k, -k}: first nonzero component positive
    const int lead = k[0] != 0 ? k[0] : (k[1] != 0 ? k[1] : k[2]);
    if (lead < 0) return;
    gevrey::Vec3c v;
    for (auto& z : v) z = {uni(rng), uni(rng)};
    const double k2 = double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
    const std::complex<double> d = (double(k[0]) * v[0] + double(k[1]) * v[1] + double(k[2]) * v[2]) / k2;
    const double e = std::exp(-decay * std::sqrt(k2));
    for (int i = 0; i < 3; ++i) v[i] = e * (v[i] - double(k[i]) * d);
    u.set_mode(k, v);
  });
  return u;
}

}  // namespace oracle

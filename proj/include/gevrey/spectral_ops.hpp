#pragma once

#include <cfloat>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "gevrey/errors.hpp"
#include "gevrey/field.hpp"
#include "gevrey/summation.hpp"
#include "gevrey/weights.hpp"

// Inner products drop the (2 pi)^3 volume factor throughout:
//   <u, v> = Re sum_k u_hat(k) . conj v_hat(k),  ||u||^2 = sum_k |u_hat(k)|^2.

namespace gevrey {

/// Removes the longitudinal part: u_hat - k (k . u_hat)/|k|^2.
inline SpectralField project_leray(const SpectralField& u) {
  SpectralField out = u;
  auto c = out.unchecked_coefficients();
  const WavevectorGrid& g = u.grid();
  g.for_each_mode([&](std::size_t idx, const Wavevector& k) {
    const double k2 = g.magnitude(idx) * g.magnitude(idx);
    const Complex p = dot(k, c[idx]) / k2;
    for (int i = 0; i < 3; ++i) c[idx][i] -= double(k[i]) * p;
  });
  out.enforce_reality();
  return out;
}

/// Scales each coefficient by m(|k|). m must be finite on every shell.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& u, Multiplier&& m) {
  SpectralField out = u;
  auto c = out.unchecked_coefficients();
  const WavevectorGrid& g = u.grid();
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    const double f = m(g.magnitude(idx));
    if (!std::isfinite(f))
      throw OverflowError("multiplier is not finite at |k| = " + std::to_string(g.magnitude(idx)));
    for (Complex& z : c[idx]) z *= f;
  });
  out.enforce_reality();
  return out;
}

/// A^p acts as |k|^{2p}.
inline auto stokes_power(double p) {
  return [p](double kmag) { return std::pow(kmag, 2.0 * p); };
}

/// exp(alpha A^{theta/2}) acts as exp(alpha |k|^theta).
inline auto gevrey_exponential(double alpha, double theta = 1.0) {
  return [alpha, theta](double kmag) { return std::exp(alpha * std::pow(kmag, theta)); };
}

/// |k|^s exp(alpha |k|^theta), i.e. A^{s/2} e^{alpha A^{theta/2}}.
inline auto gevrey_multiplier(const GevreyWeight& w) {
  return [w](double kmag) { return std::exp(0.5 * w.log_weight_sq(kmag)); };
}

namespace detail {

/// Bound below which the direct weight product cannot overflow.
inline constexpr double kSafeLogWeight = 600.0;

}  // namespace detail

/// (sum_k |k|^{2s} e^{2 alpha |k|^theta} |u_hat(k)|^2)^{1/2}; throws OverflowError if unrepresentable.
inline double gevrey_norm(const SpectralField& u, const GevreyWeight& w) {
  const WavevectorGrid& g = u.grid();
  const double kmax = std::sqrt(3.0) * g.cutoff();
  const double worst_log = std::max(w.log_weight_sq(1.0), w.log_weight_sq(kmax));
  if (worst_log < detail::kSafeLogWeight) {
    CompensatedSum acc;
    g.for_each_mode([&](std::size_t idx, const Wavevector&) {
      const double a2 = norm_sq(u[idx]);
      if (a2 != 0.0) acc += std::exp(w.log_weight_sq(g.magnitude(idx))) * a2;
    });
    return std::sqrt(acc.value());
  }
  // Log-space path: factor out the largest term.
  std::vector<double> logs;
  logs.reserve(g.mode_count());
  double top = -std::numeric_limits<double>::infinity();
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    const double a2 = norm_sq(u[idx]);
    if (a2 == 0.0) return;
    const double l = w.log_weight_sq(g.magnitude(idx)) + std::log(a2);
    logs.push_back(l);
    top = std::max(top, l);
  });
  if (logs.empty()) return 0.0;
  CompensatedSum acc;
  for (double l : logs) acc += std::exp(l - top);
  const double log_norm = 0.5 * (top + std::log(acc.value()));
  if (log_norm >= std::log(DBL_MAX))
    throw OverflowError("Gevrey norm exceeds double range (log norm " + std::to_string(log_norm) + ")");
  return std::exp(log_norm);
}

/// Homogeneous Sobolev norm ||A^{s/2} u||.
inline double sobolev_norm(const SpectralField& u, double s) { return gevrey_norm(u, GevreyWeight(s, 0.0)); }

inline double l2_norm(const SpectralField& u) { return gevrey_norm(u, GevreyWeight(0.0, 0.0)); }

/// sum_k |k|^r e^{alpha |k|} |u_hat(k)|, the weighted Wiener norm of e^{alpha A^{1/2}} u.
inline double wiener_norm(const SpectralField& u, double r, double alpha = 0.0) {
  if (!(alpha >= 0.0)) throw DomainError("Wiener weight radius must be >= 0");
  const WavevectorGrid& g = u.grid();
  CompensatedSum acc;
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    const double a2 = norm_sq(u[idx]);
    if (a2 == 0.0) return;
    const double kmag = g.magnitude(idx);
    acc += std::pow(kmag, r) * std::exp(alpha * kmag) * std::sqrt(a2);
  });
  const double v = acc.value();
  if (!std::isfinite(v)) throw OverflowError("Wiener norm exceeds double range");
  return v;
}

/// Re sum_k u_hat(k) . conj v_hat(k).
inline double inner_product(const SpectralField& u, const SpectralField& v) {
  u.check_grid(v);
  CompensatedSum acc;
  u.grid().for_each_mode([&](std::size_t idx, const Wavevector&) {
    const Vec3c& a = u[idx];
    const Vec3c& b = v[idx];
    for (int c = 0; c < 3; ++c) acc += a[c].real() * b[c].real() + a[c].imag() * b[c].imag();
  });
  return acc.value();
}

/// omega_hat = i k x u_hat.
inline SpectralField curl(const SpectralField& u) {
  SpectralField out(u.grid());
  auto c = out.unchecked_coefficients();
  const Complex I(0.0, 1.0);
  u.grid().for_each_mode([&](std::size_t idx, const Wavevector& k) {
    const Vec3c& a = u[idx];
    c[idx] = {I * (double(k[1]) * a[2] - double(k[2]) * a[1]), I * (double(k[2]) * a[0] - double(k[0]) * a[2]),
              I * (double(k[0]) * a[1] - double(k[1]) * a[0])};
  });
  return out;
}

/// True when every longitudinal amplitude is below tol times the largest amplitude.
inline bool is_solenoidal(const SpectralField& u, double tol = 1e-12) {
  return u.divergence_defect() <= tol * std::max(u.max_amplitude(), DBL_MIN);
}

/// Galerkin truncation (or zero extension) of u onto another cutoff.
inline SpectralField restrict_to(const SpectralField& u, const WavevectorGrid& target) {
  SpectralField out(target);
  auto c = out.unchecked_coefficients();
  target.for_each_mode([&](std::size_t idx, const Wavevector& k) {
    if (u.grid().contains(k)) c[idx] = u[u.grid().index(k)];
  });
  return out;
}

}  // namespace gevrey

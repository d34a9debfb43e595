#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "gevrey/errors.hpp"
#include "gevrey/grid.hpp"

namespace gevrey {

using Complex = std::complex<double>;
using Vec3c = std::array<Complex, 3>;

inline Vec3c conj(const Vec3c& v) { return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}; }

inline double norm_sq(const Vec3c& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }

/// k . v for a real wavevector and complex amplitude.
inline Complex dot(const Wavevector& k, const Vec3c& v) {
  return double(k[0]) * v[0] + double(k[1]) * v[1] + double(k[2]) * v[2];
}

/// Truncated Fourier coefficients of a real, mean-free vector field on [0, 2pi]^3.
///
/// u(x) = sum_k u_hat(k) exp(i k.x); the origin slot is held at zero and
/// u_hat(-k) == conj(u_hat(k)) is restored after every mutation.
class SpectralField {
 public:
  explicit SpectralField(WavevectorGrid grid) : grid_(std::move(grid)), coeff_(grid_.slots()) {}

  const WavevectorGrid& grid() const { return grid_; }

  const Vec3c& operator[](std::size_t idx) const { return coeff_[idx]; }

  const Vec3c& at(const Wavevector& k) const {
    check_mode(k);
    return coeff_[grid_.index(k)];
  }

  /// Sets u_hat(k) and its conjugate partner at -k.
  void set_mode(const Wavevector& k, const Vec3c& v) {
    check_mode(k);
    const std::size_t idx = grid_.index(k);
    coeff_[idx] = v;
    coeff_[grid_.negated(idx)] = conj(v);
  }

  std::span<const Vec3c> coefficients() const { return coeff_; }

  /// Raw access for kernels; callers must leave the field Hermitian or call enforce_reality().
  std::span<Vec3c> unchecked_coefficients() { return coeff_; }

  /// Applies f(idx, value&) to every slot, then restores the invariants.
  template <class F>
  void transform(F&& f) {
    for (std::size_t i = 0; i < coeff_.size(); ++i) f(i, coeff_[i]);
    enforce_reality();
  }

  /// Replaces each pair by its Hermitian average and zeroes the mean.
  void enforce_reality() {
    const std::size_t n = coeff_.size();
    for (std::size_t i = grid_.origin() + 1; i < n; ++i) {
      Vec3c& a = coeff_[i];
      Vec3c& b = coeff_[grid_.negated(i)];
      for (int c = 0; c < 3; ++c) {
        const Complex avg = 0.5 * (a[c] + std::conj(b[c]));
        a[c] = avg;
        b[c] = std::conj(avg);
      }
    }
    coeff_[grid_.origin()] = Vec3c{};
  }

  /// max_k |u_hat(k) - conj u_hat(-k)|.
  double reality_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
      const Vec3c& a = coeff_[i];
      const Vec3c& b = coeff_[grid_.negated(i)];
      for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(a[c] - std::conj(b[c])));
    }
    return worst;
  }

  /// max_k |k . u_hat(k)| / |k|, i.e. the largest longitudinal amplitude.
  double divergence_defect() const {
    double worst = 0.0;
    grid_.for_each_mode([&](std::size_t idx, const Wavevector& k) {
      worst = std::max(worst, std::abs(dot(k, coeff_[idx])) / grid_.magnitude(idx));
    });
    return worst;
  }

  double max_amplitude() const {
    double worst = 0.0;
    for (const Vec3c& v : coeff_) worst = std::max(worst, std::sqrt(norm_sq(v)));
    return worst;
  }

  bool all_finite() const {
    for (const Vec3c& v : coeff_)
      for (const Complex& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  SpectralField& operator+=(const SpectralField& o) {
    check_grid(o);
    for (std::size_t i = 0; i < coeff_.size(); ++i)
      for (int c = 0; c < 3; ++c) coeff_[i][c] += o.coeff_[i][c];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    check_grid(o);
    for (std::size_t i = 0; i < coeff_.size(); ++i)
      for (int c = 0; c < 3; ++c) coeff_[i][c] -= o.coeff_[i][c];
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (Vec3c& v : coeff_)
      for (Complex& z : v) z *= a;
    return *this;
  }
  /// this += a * x
  SpectralField& axpy(double a, const SpectralField& x) {
    check_grid(x);
    for (std::size_t i = 0; i < coeff_.size(); ++i)
      for (int c = 0; c < 3; ++c) coeff_[i][c] += a * x.coeff_[i][c];
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  void check_grid(const SpectralField& o) const {
    if (!(grid_ == o.grid_))
      throw GridMismatch("fields live on grids with cutoffs " + std::to_string(grid_.cutoff()) +
                         " and " + std::to_string(o.grid_.cutoff()));
  }

 private:
  void check_mode(const Wavevector& k) const {
    if (!grid_.contains(k))
      throw DomainError("wavevector (" + std::to_string(k[0]) + "," + std::to_string(k[1]) + "," +
                        std::to_string(k[2]) + ") is not a mode of the grid");
  }

  WavevectorGrid grid_;
  std::vector<Vec3c> coeff_;
};

}  // namespace gevrey

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include <fftw3.h>

#include "gevrey/field.hpp"
#include "gevrey/spectral_ops.hpp"

namespace gevrey {

/// Smallest n >= m whose prime factors are all in {2, 3, 5}.
inline int fft_friendly_size(int m) {
  for (int n = std::max(m, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

/// Transform-based evaluation of B(u, v) = P[div(u (x) v)].
///
/// With dealiasing the physical grid has M >= 3N + 1 points per direction, so a
/// quadratic product of modes with |k_i| <= N cannot alias back onto the grid
/// and the result equals the direct convolution to rounding. Without
/// dealiasing M = 2N + 1 and wrapped products contaminate the retained modes.
///
/// Holds FFTW plans and scratch buffers; one instance per thread.
class PseudoSpectral {
 public:
  PseudoSpectral(const WavevectorGrid& grid, bool dealias)
      : grid_(grid), dealias_(dealias), m_(dealias ? fft_friendly_size(3 * grid.cutoff() + 1) : 2 * grid.cutoff() + 1) {
    const std::size_t real_size = std::size_t(m_) * m_ * m_;
    const std::size_t half = std::size_t(m_) * m_ * (m_ / 2 + 1);
    for (auto& b : left_) b = alloc_real(real_size);
    for (auto& b : right_) b = alloc_real(real_size);
    work_ = alloc_real(real_size);
    spec_.reset(fftw_alloc_complex(half));
    spec_len_ = half;
    to_physical_ = fftw_plan_dft_c2r_3d(m_, m_, m_, spec_.get(), work_.get(), FFTW_ESTIMATE);
    to_spectral_ = fftw_plan_dft_r2c_3d(m_, m_, m_, work_.get(), spec_.get(), FFTW_ESTIMATE);
    build_mode_table();
  }
  ~PseudoSpectral() {
    if (to_physical_) fftw_destroy_plan(to_physical_);
    if (to_spectral_) fftw_destroy_plan(to_spectral_);
  }
  PseudoSpectral(const PseudoSpectral&) = delete;
  PseudoSpectral& operator=(const PseudoSpectral&) = delete;

  int transform_size() const { return m_; }
  bool dealiased() const { return dealias_; }
  const WavevectorGrid& grid() const { return grid_; }

  /// B(u, u) via the symmetric tensor u (x) u (three inverse, six forward transforms).
  SpectralField nonlinear(const SpectralField& u) {
    check(u);
    for (int c = 0; c < 3; ++c) to_physical(u, c, left_[c].get());
    std::vector<Vec3c> acc(table_.size());
    for (int m = 0; m < 3; ++m)
      for (int i = m; i < 3; ++i) {
        multiply(left_[m].get(), left_[i].get());
        fftw_execute_dft_r2c(to_spectral_, work_.get(), spec_.get());
        accumulate_divergence(acc, m, i);
        if (m != i) accumulate_divergence(acc, i, m);
      }
    return finish(acc);
  }

  /// B(u, v) for solenoidal u via the tensor u (x) v.
  SpectralField bilinear(const SpectralField& u, const SpectralField& v) {
    check(u);
    check(v);
    for (int c = 0; c < 3; ++c) {
      to_physical(u, c, left_[c].get());
      to_physical(v, c, right_[c].get());
    }
    std::vector<Vec3c> acc(table_.size());
    for (int m = 0; m < 3; ++m)
      for (int i = 0; i < 3; ++i) {
        multiply(left_[m].get(), right_[i].get());
        fftw_execute_dft_r2c(to_spectral_, work_.get(), spec_.get());
        accumulate_divergence(acc, m, i);
      }
    return finish(acc);
  }

 private:
  struct FftwDeleter {
    void operator()(void* p) const { fftw_free(p); }
  };
  using RealBuffer = std::unique_ptr<double[], FftwDeleter>;
  using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

  struct ModeSlot {
    std::size_t grid_index;
    std::size_t spec_index;
    bool conjugate;  // k3 < 0: read conj of the stored -k entry
    Wavevector k;
  };

  static RealBuffer alloc_real(std::size_t n) { return RealBuffer(fftw_alloc_real(n)); }

  void check(const SpectralField& u) const {
    if (!(u.grid() == grid_)) throw GridMismatch("field grid does not match the transform grid");
  }

  std::size_t spec_offset(const Wavevector& k) const {
    const int a = (k[0] + m_) % m_;
    const int b = (k[1] + m_) % m_;
    return (std::size_t(a) * m_ + std::size_t(b)) * std::size_t(m_ / 2 + 1) + std::size_t(k[2]);
  }

  void build_mode_table() {
    grid_.for_each_mode([&](std::size_t idx, const Wavevector& k) {
      if (k[2] >= 0) load_.push_back({idx, spec_offset(k), false, k});
      if (!grid_.is_canonical(idx)) return;
      if (k[2] >= 0)
        table_.push_back({idx, spec_offset(k), false, k});
      else
        table_.push_back({idx, spec_offset(negate(k)), true, k});
    });
  }

  void to_physical(const SpectralField& u, int comp, double* out) {
    fftw_complex* s = spec_.get();
    std::fill_n(&s[0][0], 2 * spec_len_, 0.0);
    for (const ModeSlot& m : load_) {
      const Complex z = u[m.grid_index][comp];
      s[m.spec_index][0] = z.real();
      s[m.spec_index][1] = z.imag();
    }
    fftw_execute_dft_c2r(to_physical_, s, out);
  }

  void multiply(const double* a, const double* b) {
    const std::size_t n = std::size_t(m_) * m_ * m_;
    double* w = work_.get();
    for (std::size_t i = 0; i < n; ++i) w[i] = a[i] * b[i];
  }

  /// acc_i += i k_m T_hat(k) where T = (tensor component m, i).
  void accumulate_divergence(std::vector<Vec3c>& acc, int m, int i) const {
    const fftw_complex* s = spec_.get();
    for (std::size_t q = 0; q < table_.size(); ++q) {
      const ModeSlot& slot = table_[q];
      Complex z(s[slot.spec_index][0], s[slot.spec_index][1]);
      if (slot.conjugate) z = std::conj(z);
      acc[q][i] += Complex(0.0, double(slot.k[m])) * z;
    }
  }

  SpectralField finish(const std::vector<Vec3c>& acc) const {
    const double scale = 1.0 / (double(m_) * m_ * m_);
    SpectralField out(grid_);
    auto c = out.unchecked_coefficients();
    for (std::size_t q = 0; q < table_.size(); ++q) {
      const ModeSlot& slot = table_[q];
      Vec3c v = acc[q];
      for (Complex& z : v) z *= scale;
      const double k2 = squared_length(slot.k);
      const Complex p = dot(slot.k, v) / k2;
      for (int i = 0; i < 3; ++i) v[i] -= double(slot.k[i]) * p;
      c[slot.grid_index] = v;
      c[grid_.negated(slot.grid_index)] = conj(v);
    }
    return out;
  }

  WavevectorGrid grid_;
  bool dealias_;
  int m_;
  std::array<RealBuffer, 3> left_;
  std::array<RealBuffer, 3> right_;
  RealBuffer work_;
  ComplexBuffer spec_;
  std::size_t spec_len_ = 0;
  fftw_plan to_physical_ = nullptr;
  fftw_plan to_spectral_ = nullptr;
  std::vector<ModeSlot> load_;   // every mode with k3 >= 0
  std::vector<ModeSlot> table_;  // canonical modes
};

/// B(u, u) by the transform method (plans built per call; reuse a PseudoSpectral in loops).
inline SpectralField nonlinear_term_fast(const SpectralField& u, bool dealias = true) {
  PseudoSpectral ps(u.grid(), dealias);
  return ps.nonlinear(u);
}

}  // namespace gevrey

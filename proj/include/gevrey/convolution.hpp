#pragma once

#include <algorithm>

#include "gevrey/field.hpp"
#include "gevrey/spectral_ops.hpp"

// Exact truncated convolution for the advection term. Cost grows like N^6, so
// this is the correctness oracle rather than the production path.

namespace gevrey {

/// (u . grad) v restricted to the grid: sum over j + l = k with j, l in the grid
/// of i (u_hat(j) . l) v_hat(l). Not projected.
inline SpectralField advect_direct(const SpectralField& u, const SpectralField& v) {
  u.check_grid(v);
  const WavevectorGrid& g = u.grid();
  const int n = g.cutoff();
  const std::ptrdiff_t s = g.side();
  const Vec3c* U = u.coefficients().data();
  const Vec3c* V = v.coefficients().data();
  SpectralField out(g);
  auto oc = out.unchecked_coefficients();
  const Complex I(0.0, 1.0);

  g.for_each_mode([&](std::size_t kidx, const Wavevector& k) {
    if (!g.is_canonical(kidx)) return;
    const int lo0 = std::max(-n, k[0] - n), hi0 = std::min(n, k[0] + n);
    const int lo1 = std::max(-n, k[1] - n), hi1 = std::min(n, k[1] + n);
    const int lo2 = std::max(-n, k[2] - n), hi2 = std::min(n, k[2] + n);
    Complex acc0 = 0.0, acc1 = 0.0, acc2 = 0.0;
    for (int j0 = lo0; j0 <= hi0; ++j0) {
      const int l0 = k[0] - j0;
      for (int j1 = lo1; j1 <= hi1; ++j1) {
        const int l1 = k[1] - j1;
        const std::ptrdiff_t jrow = ((j0 + n) * s + (j1 + n)) * s + n;
        const std::ptrdiff_t lrow = ((l0 + n) * s + (l1 + n)) * s + n;
        const double dl0 = l0, dl1 = l1;
        for (int j2 = lo2; j2 <= hi2; ++j2) {
          const int l2 = k[2] - j2;
          const Vec3c& a = U[jrow + j2];
          const Vec3c& b = V[lrow + l2];
          const Complex d = a[0] * dl0 + a[1] * dl1 + a[2] * double(l2);
          acc0 += d * b[0];
          acc1 += d * b[1];
          acc2 += d * b[2];
        }
      }
    }
    const Vec3c r{I * acc0, I * acc1, I * acc2};
    oc[kidx] = r;
    oc[g.negated(kidx)] = conj(r);
  });
  return out;
}

/// B(u, v) = Leray projection of the truncated (u . grad) v.
inline SpectralField bilinear_direct(const SpectralField& u, const SpectralField& v) {
  return project_leray(advect_direct(u, v));
}

/// B(u, u) by direct convolution.
inline SpectralField nonlinear_term_direct(const SpectralField& u) { return bilinear_direct(u, u); }

}  // namespace gevrey

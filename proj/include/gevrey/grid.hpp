#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "gevrey/errors.hpp"

namespace gevrey {

/// Integer wavevector on the unit-periodicity lattice.
using Wavevector = std::array<int, 3>;

inline double squared_length(const Wavevector& k) {
  return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2];
}

inline Wavevector negate(const Wavevector& k) { return {-k[0], -k[1], -k[2]}; }

/// Cube truncation {k : 0 < max_i |k_i| <= N} stored densely as a (2N+1)^3 box.
///
/// The origin slot exists in storage but is never a mode. Dense layout makes
/// negation an index reflection: index(-k) == slots() - 1 - index(k).
class WavevectorGrid {
 public:
  static constexpr int kMaxCutoff = 64;

  explicit WavevectorGrid(int cutoff) : n_(cutoff) {
    if (cutoff < 1 || cutoff > kMaxCutoff)
      throw DomainError("grid cutoff must lie in [1, " + std::to_string(kMaxCutoff) + "], got " +
                        std::to_string(cutoff));
    const int side = 2 * n_ + 1;
    auto mag = std::make_shared<std::vector<double>>(std::size_t(side) * side * side);
    std::size_t idx = 0;
    for (int a = -n_; a <= n_; ++a)
      for (int b = -n_; b <= n_; ++b)
        for (int c = -n_; c <= n_; ++c) (*mag)[idx++] = std::sqrt(double(a * a + b * b + c * c));
    magnitude_ = std::move(mag);
  }

  int cutoff() const { return n_; }
  int side() const { return 2 * n_ + 1; }
  /// Storage slots including the unused origin.
  std::size_t slots() const { return magnitude_->size(); }
  std::size_t mode_count() const { return slots() - 1; }
  std::size_t origin() const { return slots() / 2; }

  bool contains(const Wavevector& k) const {
    return std::abs(k[0]) <= n_ && std::abs(k[1]) <= n_ && std::abs(k[2]) <= n_ &&
           (k[0] != 0 || k[1] != 0 || k[2] != 0);
  }

  std::size_t index(const Wavevector& k) const {
    const std::size_t s = std::size_t(side());
    return (std::size_t(k[0] + n_) * s + std::size_t(k[1] + n_)) * s + std::size_t(k[2] + n_);
  }

  Wavevector wavevector(std::size_t idx) const {
    const std::size_t s = std::size_t(side());
    const int c = int(idx % s) - n_;
    idx /= s;
    const int b = int(idx % s) - n_;
    const int a = int(idx / s) - n_;
    return {a, b, c};
  }

  std::size_t negated(std::size_t idx) const { return slots() - 1 - idx; }

  /// Euclidean |k| of the slot.
  double magnitude(std::size_t idx) const { return (*magnitude_)[idx]; }
  const std::vector<double>& magnitudes() const { return *magnitude_; }

  /// One representative of each {k, -k} pair: the slots past the origin.
  bool is_canonical(std::size_t idx) const { return idx > origin(); }

  /// Calls f(idx, k) for every mode (origin skipped).
  template <class F>
  void for_each_mode(F&& f) const {
    std::size_t idx = 0;
    for (int a = -n_; a <= n_; ++a)
      for (int b = -n_; b <= n_; ++b)
        for (int c = -n_; c <= n_; ++c, ++idx)
          if (idx != origin()) f(idx, Wavevector{a, b, c});
  }

  friend bool operator==(const WavevectorGrid& x, const WavevectorGrid& y) { return x.n_ == y.n_; }

 private:
  int n_;
  std::shared_ptr<const std::vector<double>> magnitude_;
};

inline WavevectorGrid make_grid(int cutoff) { return WavevectorGrid(cutoff); }

}  // namespace gevrey

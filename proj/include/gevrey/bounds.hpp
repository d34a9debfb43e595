#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "gevrey/errors.hpp"

// Closed-form existence-time, blow-up-rate and radius bounds. Every bound is
// stated up to a dimensionless constant; constants default to 1 and proof-internal
// safety factors are folded into that single constant.

namespace gevrey {

struct ImpliedConstant {
  enum class Provenance { Assumed, Calibrated };

  double value = 1.0;
  Provenance provenance = Provenance::Assumed;

  ImpliedConstant() = default;
  ImpliedConstant(double v, Provenance p = Provenance::Assumed) : value(v), provenance(p) {  // NOLINT
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("implied constant must be positive and finite");
  }
};

inline const char* to_string(ImpliedConstant::Provenance p) {
  return p == ImpliedConstant::Provenance::Assumed ? "assumed" : "calibrated-from-sweep";
}

struct BoundResult {
  double value = 0.0;      ///< +inf marks global existence
  std::string regime;      ///< which case of the statement fired
  std::string formula_id;  ///< descriptive key of the formula used

  bool global() const { return std::isinf(value); }
};

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

inline void require_positive(double x, const char* name) {
  require(x > 0.0 && std::isfinite(x), std::string(name) + " must be positive and finite");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Analytic-Gevrey persistence with alpha(t) = beta0 + beta t

/// Existence-time lower bound for the time-varying Gevrey norm, s > 1/2, s != 3/2.
///
/// small_data_threshold defaults to 1 / (2c): at or below it the norm is non-increasing
/// and the result is the +inf sentinel.
inline BoundResult persistence_time_basic(double s, double norm0, ImpliedConstant c = {},
                                          std::optional<double> small_data_threshold = std::nullopt) {
  detail::require(s > 0.5, "persistence bound needs s > 1/2");
  detail::require(s != 1.5, "s = 3/2 is handled by the vorticity route (persistence_time_mid)");
  detail::require_positive(norm0, "initial norm");
  const double threshold = small_data_threshold.value_or(1.0 / (2.0 * c.value));
  if (norm0 <= threshold) return {std::numeric_limits<double>::infinity(), "small-data-global", "small-data-global"};
  if (s < 1.5) return {c.value / std::pow(norm0, 4.0 / (2.0 * s - 1.0)), "low-s", "persistence-low-s"};
  return {c.value / (norm0 * norm0), "high-s", "persistence-high-s"};
}

/// Lower bound on the Gevrey norm as t approaches a finite persistence time.
inline double blowup_rate_basic(double s, double t_star, double t, ImpliedConstant c = {}) {
  detail::require(s > 0.5 && s != 1.5, "blow-up rate needs s > 1/2, s != 3/2");
  detail::require(t >= 0.0 && t < t_star, "blow-up rate needs 0 <= t < T*");
  const double p = s < 1.5 ? (2.0 * s - 1.0) / 4.0 : 0.5;
  return c.value / std::pow(t_star - t, p);
}

/// Time at which the growth envelope below becomes singular.
inline double t_star(double s, double beta, double norm0, ImpliedConstant c = {}) {
  detail::require(s > 0.5 && s < 1.5, "growth envelope needs 1/2 < s < 3/2");
  detail::require_positive(beta, "beta");
  detail::require_positive(norm0, "initial norm");
  const double q = 4.0 / (2.0 * s - 1.0);
  return (2.0 * s - 1.0) / (2.0 * beta * beta) * std::log1p(beta * beta / (2.0 * c.value * std::pow(norm0, q)));
}

/// Solution of y' = c y^{1 + 4/(2s-1)} + (beta^2 / 2) y from norm0, bounding ||u||_{s, beta0 + beta t}.
inline double gevrey_growth_envelope(double s, double beta, double norm0, ImpliedConstant c, double t) {
  const double ts = t_star(s, beta, norm0, c);
  detail::require(t >= 0.0 && t < ts, "envelope is finite only for 0 <= t < t*");
  const double q = 4.0 / (2.0 * s - 1.0);
  const double b2 = beta * beta;
  const double denom = 1.0 - (2.0 * c.value / b2) * std::pow(norm0, q) * std::expm1(2.0 * b2 * t / (2.0 * s - 1.0));
  return std::exp(0.5 * b2 * t) * norm0 / std::pow(denom, (2.0 * s - 1.0) / 4.0);
}

/// f(x) = -log(1 + x^2) / (2 x^2) + 1 / (1 + x^2), whose positive root fixes the optimal beta.
inline double sigma_equation(double x) { return -std::log1p(x * x) / (2.0 * x * x) + 1.0 / (1.0 + x * x); }

/// Positive root of sigma_equation, bracketed in (1, 2.5), by bisection to full precision.
inline double sigma_root() {
  static const double root = [] {
    auto r = boost::math::tools::bisect(sigma_equation, 1.0, 2.5, boost::math::tools::eps_tolerance<double>(52));
    const double a = r.first, b = r.second;
    return std::abs(sigma_equation(a)) <= std::abs(sigma_equation(b)) ? a : b;
  }();
  return root;
}

/// Radius bound beta0 + beta t*/2 reached with growth rate beta.
inline double radius_bound(double s, double norm0, double beta0, double beta, ImpliedConstant c = {}) {
  detail::require(beta0 >= 0.0, "beta0 must be >= 0");
  return beta0 + 0.5 * beta * t_star(s, beta, norm0, c);
}

struct OptimalRadius {
  double beta = 0.0;    ///< growth rate maximizing the radius bound
  double lambda = 0.0;  ///< radius bound at t*/2 for that rate
  double t_star = 0.0;
};

/// beta = sqrt(2c) norm0^{2/(2s-1)} sigma and the radius bound it yields; 1/2 < s < 3/2.
inline OptimalRadius optimal_beta_and_radius(double s, double norm0, double beta0, ImpliedConstant c = {}) {
  detail::require(s > 0.5 && s < 1.5, "optimal radius needs 1/2 < s < 3/2");
  detail::require_positive(norm0, "initial norm");
  const double beta = std::sqrt(2.0 * c.value) * std::pow(norm0, 2.0 / (2.0 * s - 1.0)) * sigma_root();
  const double ts = t_star(s, beta, norm0, c);
  return {beta, beta0 + 0.5 * beta * ts, ts};
}

// ---------------------------------------------------------------------------
// Existence times for the analytic norm with alpha(t) = beta t

/// s > 5/2 bound from the four-term majorant. zeta0 = ||u0||_s, l2norm0 = ||u0||_{L2}.
inline BoundResult zeta_time_bound(double s, double zeta0, double l2norm0, double beta, ImpliedConstant c = {}) {
  detail::require(s > 2.5, "zeta bound needs s > 5/2 (s = 5/2 is open)");
  detail::require(beta > 0.0 && beta <= 0.5, "zeta bound needs 0 < beta <= 1/2");
  detail::require_positive(zeta0, "initial Sobolev norm");
  detail::require_positive(l2norm0, "initial L2 norm");
  const double ratio = zeta0 / l2norm0;
  const double z = c.value * std::min(1.0, 1.0 / l2norm0) * std::pow(ratio, -5.0 / (2.0 * s));
  const double threshold = c.value * std::pow(beta, -4.0 * s / 5.0) * std::min(1.0, std::pow(l2norm0, -2.0 * s / 5.0));
  if (ratio >= threshold) return {z, "large-data", "zeta-large-data"};
  return {std::min(z, std::pow(z, 0.4)), "moderate-data", "zeta-moderate-data"};
}

/// 3/2 <= s < 5/2 bound from the vorticity majorant with s~ = s - 1.
///
/// At s = 3/2 the same two-branch formulas are applied with s~ = 1/2, an
/// interpretation of the cube-law argument; the regime string says so.
inline BoundResult X_time_bound(double s, double hs_norm0, double beta, ImpliedConstant c = {}) {
  detail::require(s >= 1.5 && s < 2.5, "vorticity bound needs 3/2 <= s < 5/2");
  detail::require(beta > 0.0 && beta <= 0.5, "vorticity bound needs 0 < beta <= 1/2");
  detail::require_positive(hs_norm0, "initial Sobolev norm");
  const double n = c.value / std::pow(hs_norm0, 4.0 / (2.0 * s - 1.0));
  const double threshold = c.value / std::pow(beta, (2.0 * s - 1.0) / 2.0);
  const std::string suffix = s == 1.5 ? "-cube-law-interpretation" : "";
  if (hs_norm0 >= threshold) return {n, "large-data" + suffix, "vorticity-large-data"};
  return {std::min(n, std::sqrt(n)), "moderate-data" + suffix, "vorticity-moderate-data"};
}

/// Route for s = 3/2 and the rest of the mid range.
inline BoundResult persistence_time_mid(double s, double hs_norm0, double beta, ImpliedConstant c = {}) {
  return X_time_bound(s, hs_norm0, beta, c);
}

/// Sobolev blow-up rate c / (T - t)^{(2s-1)/4} for 1/2 < s < 5/2.
inline double sobolev_blowup_rate(double s, double t_dd, double t, ImpliedConstant c = {}) {
  detail::require(s > 0.5 && s < 2.5, "Sobolev blow-up rate needs 1/2 < s < 5/2");
  detail::require(t < t_dd, "Sobolev blow-up rate needs t < T");
  return c.value / std::pow(t_dd - t, (2.0 * s - 1.0) / 4.0);
}

/// Companion existence time c / ||u0||_s^{4/(2s-1)}.
inline double sobolev_existence_time(double s, double hs_norm0, ImpliedConstant c = {}) {
  detail::require(s > 0.5 && s < 2.5, "Sobolev existence time needs 1/2 < s < 5/2");
  detail::require_positive(hs_norm0, "initial Sobolev norm");
  return c.value / std::pow(hs_norm0, 4.0 / (2.0 * s - 1.0));
}

// ---------------------------------------------------------------------------
// Crossing-time equations a t^p + b t = rhs

enum class CrossingVariant { Quadratic, FiveHalves, QuadraticBeta, CubeLaw };

/// Unique positive root of a t^p + b t = rhs (p = 5/2 for FiveHalves, else 2).
///
/// QuadraticBeta takes a = c beta^2, CubeLaw takes a = c_breve^{-2}; both reduce to
/// the quadratic. FiveHalves is solved by bisection.
inline double crossing_time(CrossingVariant variant, double a, double b, double rhs) {
  detail::require(a >= 0.0 && b >= 0.0 && (a > 0.0 || b > 0.0), "crossing coefficients must be >= 0, not both 0");
  detail::require_positive(rhs, "crossing right side");
  if (variant != CrossingVariant::FiveHalves) {
    if (a == 0.0) return rhs / b;
    return 2.0 * rhs / (b + std::sqrt(b * b + 4.0 * a * rhs));
  }
  if (a == 0.0) return rhs / b;
  if (b == 0.0) return std::pow(rhs / a, 0.4);
  auto f = [&](double t) { return a * std::pow(t, 2.5) + b * t - rhs; };
  const double hi = std::min(rhs / b, std::pow(rhs / a, 0.4));
  // f(hi) >= 0 in exact arithmetic; a nonpositive rounded value means hi is the root
  if (f(hi) <= 0.0) return hi;
  auto r = boost::math::tools::bisect(f, 0.0, hi, boost::math::tools::eps_tolerance<double>(52));
  return std::abs(f(r.first)) <= std::abs(f(r.second)) ? r.first : r.second;
}

}  // namespace gevrey

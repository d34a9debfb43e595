#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

#include "gevrey/bounds.hpp"
#include "gevrey/errors.hpp"

// Scalar majorant ODEs y' = F(t, y) with F >= 0, increasing in y. Exponents are
// fixed by the Sobolev index; only the term coefficients are free.

namespace gevrey {

enum class OdeKind { Zeta, Vorticity, PowerLaw, Analyticity };

inline const char* to_string(OdeKind k) {
  switch (k) {
    case OdeKind::Zeta: return "zeta";
    case OdeKind::Vorticity: return "vorticity";
    case OdeKind::PowerLaw: return "power-law";
    case OdeKind::Analyticity: return "analyticity";
  }
  return "?";
}

struct ComparisonODE {
  OdeKind kind = OdeKind::PowerLaw;
  double s = 1.0;      ///< Sobolev index (s~ for the vorticity kind)
  double beta = 0.0;   ///< radius growth rate
  double gamma = 1.0;  ///< ||u0||_{L2}^{1 - 5/(2s)} for the zeta kind
  double power = 1.0;  ///< exponent p of y^{1+p} for the power-law kind
  std::vector<double> coeffs;  ///< one coefficient per term

  /// y' = c1 g y^{1+5/(2s)} + c2 (bt)^{s-5/2} y^2 + c3 (bt)^2 g^2 y^{1+5/s} + c4 (bt)^{2s-3} y^3, s > 5/2.
  static ComparisonODE zeta(double s, double gamma, double beta, double c = 1.0) {
    detail::require(s > 2.5, "zeta majorant needs s > 5/2");
    detail::require(gamma > 0.0, "zeta majorant needs gamma > 0");
    detail::require(beta >= 0.0 && beta <= 0.5, "zeta majorant needs 0 <= beta <= 1/2");
    return {OdeKind::Zeta, s, beta, gamma, 0.0, {c, c, c, c}};
  }
  /// Zeta majorant with gamma taken from the initial L2 norm.
  static ComparisonODE zeta_from_l2(double s, double l2norm0, double beta, double c = 1.0) {
    return zeta(s, std::pow(l2norm0, 1.0 - 5.0 / (2.0 * s)), beta, c);
  }
  /// y' = c1 y^{1+4/(1+2s~)} + c2 (bt)^{4/(2s~-1)} y^{1+4/(2s~-1)}, 1/2 < s~ < 3/2.
  static ComparisonODE vorticity(double s_tilde, double beta, double c = 1.0) {
    detail::require(s_tilde > 0.5 && s_tilde < 1.5, "vorticity majorant needs 1/2 < s~ < 3/2");
    detail::require(beta >= 0.0 && beta <= 0.5, "vorticity majorant needs 0 <= beta <= 1/2");
    return {OdeKind::Vorticity, s_tilde, beta, 1.0, 0.0, {c, c}};
  }
  /// y' = c y^{1+p}.
  static ComparisonODE power_law(double p, double c = 1.0) {
    detail::require(p > 0.0, "power-law exponent must be positive");
    return {OdeKind::PowerLaw, 0.0, 0.0, 1.0, p, {c}};
  }
  /// Majorant of the Gevrey norm for 1/2 < s < 3/2 without radius growth: y' = c y^{1+4/(2s-1)}.
  static ComparisonODE low_s(double s, double c = 1.0) {
    detail::require(s > 0.5 && s < 1.5, "low-s majorant needs 1/2 < s < 3/2");
    return power_law(4.0 / (2.0 * s - 1.0), c);
  }
  /// y' = c y^{1+4/(2s-1)} + (beta^2 / 2) y, 1/2 < s < 3/2.
  static ComparisonODE analyticity(double s, double beta, double c = 1.0) {
    detail::require(s > 0.5 && s < 1.5, "analyticity majorant needs 1/2 < s < 3/2");
    return {OdeKind::Analyticity, s, beta, 1.0, 4.0 / (2.0 * s - 1.0), {c}};
  }

  double rhs(double t, double y) const {
    const double bt = beta * t;
    switch (kind) {
      case OdeKind::Zeta:
        return coeffs[0] * gamma * std::pow(y, 1.0 + 5.0 / (2.0 * s)) +
               coeffs[1] * std::pow(bt, s - 2.5) * y * y +
               coeffs[2] * bt * bt * gamma * gamma * std::pow(y, 1.0 + 5.0 / s) +
               coeffs[3] * std::pow(bt, 2.0 * s - 3.0) * y * y * y;
      case OdeKind::Vorticity: {
        const double e = 4.0 / (2.0 * s - 1.0);
        return coeffs[0] * std::pow(y, 1.0 + 4.0 / (1.0 + 2.0 * s)) + coeffs[1] * std::pow(bt, e) * std::pow(y, 1.0 + e);
      }
      case OdeKind::PowerLaw: return coeffs[0] * std::pow(y, 1.0 + power);
      case OdeKind::Analyticity: return coeffs[0] * std::pow(y, 1.0 + power) + 0.5 * beta * beta * y;
    }
    return 0.0;
  }
};

struct ComparisonOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double blowup_threshold = 1e12;
  long max_steps = 2'000'000;
  /// Times (ascending) at which the dense solution is sampled.
  std::vector<double> sample_times;
};

struct ComparisonSolution {
  std::vector<double> t, y;  ///< accepted step end points, starting at (0, y0)
  std::vector<double> sample_t, sample_y;
  std::optional<double> threshold_crossing;  ///< first time y reaches the blow-up threshold
  std::optional<double> blowup_time;         ///< extrapolated singular time
  bool stalled = false;                      ///< step budget exhausted before tmax
};

/// Adaptive Dormand-Prince integration with error control and step rejection.
///
/// Blow-up is declared at the threshold; the singular time is extrapolated
/// (Aitken) from the crossings of threshold * 1e-4, * 1e-2 and * 1, which are
/// geometrically spaced so a power-law singularity gives a geometric sequence
/// of gaps.
inline ComparisonSolution integrate_comparison(const ComparisonODE& ode, double y0, double tmax,
                                               const ComparisonOptions& opt = {}) {
  using State = std::array<double, 1>;
  namespace odeint = boost::numeric::odeint;
  detail::require(y0 >= 0.0 && std::isfinite(y0), "initial value must be finite and >= 0");
  detail::require(tmax >= 0.0 && std::isfinite(tmax), "tmax must be finite and >= 0");

  ComparisonSolution sol;
  sol.t.push_back(0.0);
  sol.y.push_back(y0);
  std::size_t next_sample = 0;
  auto take_samples_upto = [&](double t_hi, auto&& value_at) {
    while (next_sample < opt.sample_times.size() && opt.sample_times[next_sample] <= t_hi) {
      const double ts = opt.sample_times[next_sample++];
      sol.sample_t.push_back(ts);
      sol.sample_y.push_back(value_at(ts));
    }
  };
  if (tmax == 0.0 || y0 == 0.0 || (ode.rhs(0.0, y0) == 0.0 && ode.rhs(tmax, y0) == 0.0)) {
    // constant solution (F(t, y0) = 0 and F increasing in y keeps y at y0)
    if (tmax > 0.0) {
      sol.t.push_back(tmax);
      sol.y.push_back(y0);
    }
    take_samples_upto(tmax, [&](double) { return y0; });
    return sol;
  }

  auto system = [&ode](const State& x, State& dxdt, double t) { dxdt[0] = ode.rhs(t, std::max(x[0], 0.0)); };
  auto stepper = odeint::make_dense_output(opt.abs_tol, opt.rel_tol, odeint::runge_kutta_dopri5<State>());
  const double h0 = std::min(1e-6, tmax * 1e-3);
  stepper.initialize(State{y0}, 0.0, h0);

  const double levels[3] = {opt.blowup_threshold * 1e-4, opt.blowup_threshold * 1e-2, opt.blowup_threshold};
  std::optional<double> crossing[3];
  auto value_at = [&](double t) {
    State x;
    stepper.calc_state(t, x);
    return x[0];
  };

  long steps = 0;
  while (true) {
    if (++steps > opt.max_steps) {
      sol.stalled = true;
      break;
    }
    const auto [t_lo, t_hi] = stepper.do_step(system);
    const double t_end = std::min(t_hi, tmax);
    const double y_end = t_hi <= tmax ? stepper.current_state()[0] : value_at(tmax);
    // threshold crossings within this step
    for (int i = 0; i < 3; ++i) {
      if (crossing[i] || y0 >= levels[i]) continue;
      if (!(y_end >= levels[i])) continue;
      auto g = [&](double t) { return value_at(t) - levels[i]; };
      if (!(t_end > t_lo)) {
        crossing[i] = t_end;
        continue;
      }
      auto r = boost::math::tools::bisect(g, t_lo, t_end, boost::math::tools::eps_tolerance<double>(50));
      crossing[i] = 0.5 * (r.first + r.second);
    }
    // Steep majorants can exhaust the resolution of t before y reaches the
    // threshold; the singular time is then known to rounding.
    if (!crossing[2] && t_hi - t_lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t_hi)) {
      for (auto& c : crossing)
        if (!c) c = t_hi;
      sol.t.push_back(t_hi);
      sol.y.push_back(stepper.current_state()[0]);
      break;
    }
    if (crossing[2]) {
      take_samples_upto(*crossing[2], value_at);
      sol.t.push_back(*crossing[2]);
      sol.y.push_back(levels[2]);
      break;
    }
    take_samples_upto(t_end, value_at);
    sol.t.push_back(t_end);
    sol.y.push_back(y_end);
    if (t_hi >= tmax) break;
  }

  if (crossing[2]) {
    sol.threshold_crossing = crossing[2];
    double blow = *crossing[2];
    if (crossing[0] && crossing[1]) {
      const double d1 = *crossing[1] - *crossing[0];
      const double d2 = *crossing[2] - *crossing[1];
      const double q = d1 > 0.0 ? d2 / d1 : 0.0;
      if (q > 0.0 && q < 1.0) blow += d2 * q / (1.0 - q);
    }
    sol.blowup_time = blow;
  }
  return sol;
}

/// Family of closed-form majorant solutions phi(t) = (y0^{-p} - coeff t)^{-1/p}.
enum class PhiFamily {
  Zeta,       ///< p = 5/(2s), index = s > 5/2
  Vorticity,  ///< p = 4/(1+2s~), index = s~
  CubeLaw     ///< p = 2, index unused (the s~ = 1/2 case)
};

inline double phi_exponent(PhiFamily family, double index) {
  switch (family) {
    case PhiFamily::Zeta: return 5.0 / (2.0 * index);
    case PhiFamily::Vorticity: return 4.0 / (1.0 + 2.0 * index);
    case PhiFamily::CubeLaw: return 2.0;
  }
  return 0.0;
}

/// phi(t) = (y0^{-p} - coeff t)^{-1/p}; solves phi' = (coeff / p) phi^{1+p}.
inline double closed_form_phi(PhiFamily family, double index, double coeff, double y0, double t) {
  detail::require_positive(y0, "initial value");
  detail::require(coeff >= 0.0, "coefficient must be >= 0");
  const double p = phi_exponent(family, index);
  detail::require(p > 0.0 && std::isfinite(p), "exponent family needs a positive index");
  const double base = std::pow(y0, -p) - coeff * t;
  if (!(base > 0.0)) throw DomainError("closed form evaluated at or past its singular time");
  return std::pow(base, -1.0 / p);
}

/// Zeta family shorthand: phi(t) = (y0^{-5/(2s)} - coeff t)^{-2s/5}.
inline double closed_form_phi(double s, double coeff, double y0, double t) {
  return closed_form_phi(PhiFamily::Zeta, s, coeff, y0, t);
}

}  // namespace gevrey

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "gevrey/convolution.hpp"
#include "gevrey/errors.hpp"
#include "gevrey/pseudo_spectral.hpp"
#include "gevrey/solver.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/weights.hpp"

namespace gevrey {

// ---------------------------------------------------------------------------
// Time-varying Gevrey norms along a trajectory

struct GevreyTrack {
  std::vector<double> t;
  std::vector<double> norm;
  bool truncated = false;  ///< a later sample overflowed and the series stops there
  double truncated_at = std::numeric_limits<double>::quiet_NaN();
};

/// ||u(t)||_{s, beta0 + beta t} per snapshot; stops at the first overflowing sample.
inline GevreyTrack track_gevrey(const std::vector<SolverState>& series, const TimeVaryingWeight& w) {
  GevreyTrack tr;
  for (const SolverState& st : series) {
    try {
      const double v = gevrey_norm(st.u, w.at(st.t));
      tr.t.push_back(st.t);
      tr.norm.push_back(v);
    } catch (const OverflowError&) {
      tr.truncated = true;
      tr.truncated_at = st.t;
      break;
    }
  }
  return tr;
}

// ---------------------------------------------------------------------------
// Analyticity radius from the decay of shell maxima

enum class DecayShape { Exponential, SuperExponential, SubExponential, InsufficientData };

inline const char* to_string(DecayShape f) {
  switch (f) {
    case DecayShape::Exponential: return "exponential";
    case DecayShape::SuperExponential: return "super-exponential";
    case DecayShape::SubExponential: return "sub-exponential";
    case DecayShape::InsufficientData: return "insufficient-data";
  }
  return "?";
}

struct RadiusEstimate {
  double lambda = 0.0;       ///< -slope of log max|u_hat| against shell index, clamped at 0
  double fit_quality = 0.0;  ///< R^2 of the linear fit
  int shells_used = 0;
  DecayShape flag = DecayShape::InsufficientData;
  double curvature = 0.0;    ///< quadratic coefficient of the companion fit, times span^2
};

/// Shell maxima M(n) = max_{n <= |k| < n+1} |u_hat(k)| for n = 1..N (shells past N are incomplete).
inline std::vector<double> shell_maxima(const SpectralField& u) {
  const WavevectorGrid& g = u.grid();
  std::vector<double> m(std::size_t(g.cutoff()) + 1, 0.0);
  g.for_each_mode([&](std::size_t idx, const Wavevector&) {
    const int n = int(std::floor(g.magnitude(idx) + 1e-12));
    if (n > g.cutoff()) return;
    m[std::size_t(n)] = std::max(m[std::size_t(n)], std::sqrt(norm_sq(u[idx])));
  });
  return m;
}

/// Fits log M(n) = a - lambda n over shells whose maximum exceeds
/// relative_floor times the largest shell maximum.
///
/// The shape flag compares a quadratic fit against the linear one: a concave
/// log-profile (e.g. Gaussian decay) reads super-exponential, a convex one
/// (algebraic decay) sub-exponential.
inline RadiusEstimate estimate_radius(const SpectralField& u, double relative_floor = 1e-14) {
  if (!(relative_floor > 0.0 && relative_floor < 1.0)) throw DomainError("radius floor must lie in (0, 1)");
  const std::vector<double> m = shell_maxima(u);
  const double top = *std::max_element(m.begin(), m.end());
  if (top == 0.0) throw DomainError("cannot estimate the radius of a zero field");
  std::vector<double> xs, ys;
  for (std::size_t n = 1; n < m.size(); ++n)
    if (m[n] > relative_floor * top) {
      xs.push_back(double(n));
      ys.push_back(std::log(m[n]));
    }
  RadiusEstimate est;
  est.shells_used = int(xs.size());
  if (xs.size() < 3) {
    est.flag = DecayShape::InsufficientData;
    return est;
  }
  const double n = double(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + slope * (xs[i] - mx));
    ss_res += r * r;
  }
  est.lambda = std::max(0.0, -slope);
  est.fit_quality = syy > 0 ? 1.0 - ss_res / syy : 1.0;

  // Quadratic term from the residual of the linear fit against the centred square.
  double szz = 0, szr = 0, zbar = 0;
  for (double x : xs) zbar += (x - mx) * (x - mx);
  zbar /= n;
  // orthogonalize z = (x - mx)^2 - zbar against (x - mx)
  double sxz = 0;
  for (double x : xs) sxz += (x - mx) * ((x - mx) * (x - mx) - zbar);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - mx;
    const double z = d * d - zbar - (sxz / sxx) * d;
    const double r = ys[i] - (my + slope * d);
    szz += z * z;
    szr += z * r;
  }
  const double quad = szz > 0 ? szr / szz : 0.0;
  const double span = xs.back() - xs.front();
  est.curvature = quad * span * span;
  const double scale = 0.15 * std::max(1.0, std::abs(slope) * span);
  if (est.curvature < -scale)
    est.flag = DecayShape::SuperExponential;
  else if (est.curvature > scale)
    est.flag = DecayShape::SubExponential;
  else
    est.flag = DecayShape::Exponential;
  return est;
}

// ---------------------------------------------------------------------------
// Measured-versus-bound reports for the trilinear estimates

struct TrilinearReport {
  std::string inequality;
  double lhs = 0.0;  ///< absolute value of the measured trilinear form
  std::vector<std::pair<std::string, double>> rhs_terms;
  double implied_constant = 0.0;  ///< lhs / sum(rhs_terms), constants set to 1

  double rhs_sum() const {
    double s = 0.0;
    for (const auto& t : rhs_terms) s += t.second;
    return s;
  }
};

namespace detail {

inline TrilinearReport make_report(std::string name, double lhs, std::vector<std::pair<std::string, double>> terms) {
  TrilinearReport r{std::move(name), std::abs(lhs), std::move(terms), 0.0};
  for (const auto& t : r.rhs_terms)
    if (!std::isfinite(t.second)) throw OverflowError("bound term " + t.first + " is not finite");
  if (!std::isfinite(r.lhs)) throw OverflowError("trilinear form is not finite");
  const double sum = r.rhs_sum();
  r.implied_constant = sum > 0.0 ? r.lhs / sum : 0.0;
  if (sum == 0.0 && r.lhs != 0.0) throw ConsistencyError(r.inequality + ": nonzero form with vanishing bound");
  return r;
}

inline SpectralField bilinear(const SpectralField& a, const SpectralField& b, Backend backend) {
  if (backend == Backend::Direct) return bilinear_direct(a, b);
  PseudoSpectral ps(a.grid(), true);
  return ps.bilinear(a, b);
}

/// A^p e^{2 alpha A^{1/2}} v
inline SpectralField weighted(const SpectralField& v, double p, double alpha) {
  return apply_multiplier(v, [p, alpha](double k) { return std::exp(2.0 * p * std::log(k) + 2.0 * alpha * k); });
}

inline double gv(const SpectralField& u, double s, double alpha) { return gevrey_norm(u, GevreyWeight(s, alpha)); }

}  // namespace detail

/// (B(u, u), A^s e^{2 alpha A^{1/2}} u), by direct convolution unless told otherwise.
inline double trilinear_velocity_lhs(const SpectralField& u, double s, double alpha,
                                     Backend backend = Backend::Direct) {
  if (!(alpha >= 0.0)) throw DomainError("radius must be >= 0");
  return inner_product(detail::bilinear(u, u, backend), detail::weighted(u, s, alpha));
}

/// |(B(u,u), A^s e^{2 alpha A^{1/2}} u)| <= c F0_alpha(u) ||u||_{s,alpha} ||u||_{s+1,alpha}
inline TrilinearReport velocity_commutator_f0(const SpectralField& u, double s, double alpha,
                                      Backend backend = Backend::Direct) {
  if (!(s > 0.0)) throw DomainError("first velocity commutator bound needs s > 0");
  const double lhs = trilinear_velocity_lhs(u, s, alpha, backend);
  const double term = wiener_norm(u, 0.0, alpha) * detail::gv(u, s, alpha) * detail::gv(u, s + 1.0, alpha);
  return detail::make_report("velocity-F0", lhs, {{"F0*Gv(s)*Gv(s+1)", term}});
}

struct SecondVelocityReports {
  TrilinearReport two_term;      ///< F1 Gv(s)^2 + alpha F1 Gv(s+1) Gv(s)
  TrilinearReport young_closed;  ///< F1 Gv(s)^2 + alpha^2 F1^2 Gv(s)^2 + Gv(s+1)^2 / 2
};

/// Commutator bound in terms of the weighted F1 norm, plus its Young-closed form.
inline SecondVelocityReports velocity_commutator_f1(const SpectralField& u, double s, double alpha,
                                             Backend backend = Backend::Direct) {
  if (!(s >= 1.0)) throw DomainError("second velocity commutator bound needs s >= 1");
  const double lhs = trilinear_velocity_lhs(u, s, alpha, backend);
  const double f1 = wiener_norm(u, 1.0, alpha);
  const double gs = detail::gv(u, s, alpha);
  const double gs1 = detail::gv(u, s + 1.0, alpha);
  return {detail::make_report("velocity-F1", lhs, {{"F1*Gv(s)^2", f1 * gs * gs}, {"alpha*F1*Gv(s+1)*Gv(s)", alpha * f1 * gs1 * gs}}),
          detail::make_report("velocity-F1-young", lhs,
                              {{"F1*Gv(s)^2", f1 * gs * gs},
                               {"alpha^2*F1^2*Gv(s)^2", alpha * alpha * f1 * f1 * gs * gs},
                               {"Gv(s+1)^2/2", 0.5 * gs1 * gs1}})};
}

struct VorticityReports {
  TrilinearReport stretching;  ///< (B(w, u), A^s~ e^{2 alpha A^{1/2}} w)
  TrilinearReport advection;   ///< (B(u, w), A^s~ e^{2 alpha A^{1/2}} w)
};

/// Both vorticity commutator bounds for -1/2 < s_tilde < 3/2 and w = curl u.
inline VorticityReports vorticity_commutator_bounds(const SpectralField& w, const SpectralField& u, double s_tilde,
                                               double alpha, Backend backend = Backend::Direct) {
  if (!(s_tilde > -0.5 && s_tilde < 1.5)) throw DomainError("vorticity bounds need -1/2 < s~ < 3/2");
  if (!(alpha >= 0.0)) throw DomainError("radius must be >= 0");
  u.check_grid(w);
  const SpectralField expected = curl(u);
  if (l2_norm(w - expected) > 1e-10 * l2_norm(expected) + 1e-300)
    throw ConsistencyError("vorticity is not the curl of the velocity");
  const SpectralField target = detail::weighted(w, s_tilde, alpha);
  const double lhs3 = inner_product(detail::bilinear(w, u, backend), target);
  const double lhs4 = inner_product(detail::bilinear(u, w, backend), target);
  const double a = detail::gv(w, s_tilde, alpha);
  const double b = detail::gv(w, s_tilde + 1.0, alpha);
  const double main = std::pow(a, s_tilde + 1.5) * std::pow(b, 1.5 - s_tilde);
  return {detail::make_report("vorticity-stretching", lhs3, {{"W(s~)^(s~+3/2)*W(s~+1)^(3/2-s~)", main}}),
          detail::make_report("vorticity-advection", lhs4,
                              {{"W(s~)^(s~+3/2)*W(s~+1)^(3/2-s~)", main},
                               {"alpha*W(s~)^(s~+1/2)*W(s~+1)^(5/2-s~)",
                                alpha * std::pow(a, s_tilde + 0.5) * std::pow(b, 2.5 - s_tilde)}})};
}

/// |(B(u, w), w)| / (||u||_{F1} ||w||^2) with w = A^{s/2} e^{alpha A^{1/2}} u.
inline double orthogonality_residual(const SpectralField& u, double s, double alpha,
                                     Backend backend = Backend::Direct) {
  const SpectralField w = apply_multiplier(u, [s, alpha](double k) { return std::exp(s * std::log(k) + alpha * k); });
  const double scale = wiener_norm(u, 1.0) * std::pow(l2_norm(w), 2);
  if (scale == 0.0) return 0.0;
  const SpectralField b = backend == Backend::Direct ? project_leray(advect_direct(u, w)) : detail::bilinear(u, w, backend);
  return std::abs(inner_product(b, w)) / scale;
}

// ---------------------------------------------------------------------------
// Scalar inequalities between norms

struct NormInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  ///< lhs / rhs (0 when both vanish)
};

/// ||e^{alpha A^{1/2}} u|| <= sqrt(e) ||u|| + (2 alpha)^s ||u||_{s,alpha}, s > 0.
inline NormInequality exponential_moment_check(const SpectralField& u, double s, double alpha) {
  if (!(s > 0.0)) throw DomainError("exponential moment bound needs s > 0");
  if (!(alpha >= 0.0)) throw DomainError("radius must be >= 0");
  const double lhs = gevrey_norm(u, GevreyWeight(0.0, alpha));
  const double rhs = std::sqrt(std::exp(1.0)) * l2_norm(u) + std::pow(2.0 * alpha, s) * detail::gv(u, s, alpha);
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

/// ||u||_{F^r} against ||u||_{s1}^{(s2-r-3/2)/(s2-s1)} ||u||_{s2}^{(3/2+r-s1)/(s2-s1)}, 0 <= s1 < 3/2 + r < s2.
inline NormInequality interpolation_check(const SpectralField& u, double r, double s1, double s2) {
  if (!(s1 >= 0.0 && s1 < 1.5 + r && 1.5 + r < s2)) throw DomainError("interpolation needs 0 <= s1 < 3/2 + r < s2");
  const double lhs = wiener_norm(u, r);
  const double w1 = (s2 - r - 1.5) / (s2 - s1);
  const double w2 = (1.5 + r - s1) / (s2 - s1);
  const double rhs = std::pow(sobolev_norm(u, s1), w1) * std::pow(sobolev_norm(u, s2), w2);
  return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0};
}

// ---------------------------------------------------------------------------
// Instantaneous growth of the time-varying norms along the Galerkin flow

/// Norm value and its exact time derivative at one instant.
struct NormRate {
  double norm = 0.0;
  double rate = 0.0;
};

namespace detail {

/// (d/dt)||v||_{index, alpha(t)} given dv/dt, with alpha' = beta.
inline NormRate weighted_rate(const SpectralField& v, const SpectralField& dvdt, double index, double alpha,
                              double beta) {
  const double n = gv(v, index, alpha);
  if (n == 0.0) return {0.0, 0.0};
  // 1/2 d/dt ||v||^2 = beta ||A^{1/4} v||^2_{index,alpha} + (dv/dt, A^index e^{2 alpha A^{1/2}} v)
  const double radial = beta * std::pow(gv(v, index + 0.5, alpha), 2);
  const double flow = inner_product(dvdt, weighted(v, index, alpha));
  return {n, (radial + flow) / n};
}

}  // namespace detail

/// d/dt ||u||_{s, beta0 + beta t} for du/dt = -A u - B(u, u).
inline NormRate velocity_norm_rate(const SpectralField& u, double s, double beta0, double beta, double t) {
  SpectralField dudt = nonlinear_term_fast(u);
  dudt += apply_multiplier(u, [](double k) { return k * k; });
  dudt *= -1.0;
  return detail::weighted_rate(u, dudt, s, beta0 + beta * t, beta);
}

/// d/dt ||w||_{s~, beta t} for w = curl u under the vorticity equation.
inline NormRate vorticity_norm_rate(const SpectralField& u, double s_tilde, double beta, double t) {
  const SpectralField w = curl(u);
  return detail::weighted_rate(w, vorticity_rhs(u, w), s_tilde, beta * t, beta);
}

// ---------------------------------------------------------------------------
// CSV emitters

/// One row per sample: t, norm, radius, flags.
inline void write_track_csv(std::ostream& os, const GevreyTrack& track, const std::vector<RadiusEstimate>& radii = {}) {
  os << "t,norm,radius,fit_quality,shape,truncated\n";
  for (std::size_t i = 0; i < track.t.size(); ++i) {
    os << track.t[i] << ',' << track.norm[i] << ',';
    if (i < radii.size())
      os << radii[i].lambda << ',' << radii[i].fit_quality << ',' << to_string(radii[i].flag);
    else
      os << ",,";
    os << ',' << 0 << '\n';
  }
  if (track.truncated) os << track.truncated_at << ",,,,," << 1 << '\n';
}

struct TrilinearSweepRow {
  int N = 0;
  double index = 0.0;  ///< s for velocity bounds, s~ for vorticity bounds
  double alpha = 0.0;
  TrilinearReport report;
};

/// Columns: inequality, N, index, alpha, lhs, rhs terms (label=value), implied_constant.
inline void write_trilinear_csv(std::ostream& os, const std::vector<TrilinearSweepRow>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.report.rhs_terms.size());
  os << "inequality,N,index,alpha,lhs";
  for (std::size_t i = 0; i < width; ++i) os << ",rhs" << i + 1 << "_label,rhs" << i + 1;
  os << ",implied_constant\n";
  for (const auto& r : rows) {
    os << r.report.inequality << ',' << r.N << ',' << r.index << ',' << r.alpha << ',' << r.report.lhs;
    for (std::size_t i = 0; i < width; ++i) {
      if (i < r.report.rhs_terms.size())
        os << ',' << r.report.rhs_terms[i].first << ',' << r.report.rhs_terms[i].second;
      else
        os << ",,";
    }
    os << ',' << r.report.implied_constant << '\n';
  }
}

}  // namespace gevrey

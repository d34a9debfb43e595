#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gevrey/convolution.hpp"
#include "gevrey/errors.hpp"
#include "gevrey/field.hpp"
#include "gevrey/pseudo_spectral.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/summation.hpp"
#include "gevrey/weights.hpp"

// Galerkin-truncated NSE on the 2 pi torus with unit viscosity:
//   du/dt + A u + B(u, u) = 0,  A = |k|^2,  B(u, v) = P[(u . grad) v].
//
// Time stepping budgets (the viscous part is exact in both schemes):
//   integrating-factor RK4: advective limit dt * max|u| * N <~ 2.8
//   IMEX Euler:             advective limit dt * max|u| * N <~ 1, first order

namespace gevrey {

enum class Scheme { IntegratingFactorRK4, ImexEuler };
enum class Backend { Fast, Direct };

struct IntegratorSpec {
  double dt = 0.0;  ///< 0 selects the viscous default 0.1 / N^2
  Scheme scheme = Scheme::IntegratingFactorRK4;
  bool dealias = true;
  Backend backend = Backend::Fast;
  /// Retry a run with dt / 2 when the energy ledger is violated by more than 1e-6.
  bool adapt_dt = true;
  int max_halvings = 4;
  /// Norm watched for numerical blow-up; the default is the L2 norm.
  TimeVaryingWeight blowup_weight{};
  double blowup_threshold = 1e12;

  double resolved_dt(const WavevectorGrid& g) const {
    if (dt < 0.0 || !std::isfinite(dt)) throw DomainError("time step must be positive");
    return dt > 0.0 ? dt : 0.1 / (double(g.cutoff()) * g.cutoff());
  }
};

struct SolverState {
  double t = 0.0;
  SpectralField u;
};

/// Raised when a step produces non-finite coefficients or the watched norm passes the threshold.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, SolverState last) : std::runtime_error(what), last_finite_(std::move(last)) {}
  const SolverState& last_finite() const { return last_finite_; }

 private:
  SolverState last_finite_;
};

/// Squared L2 norm and squared gradient norm of one snapshot.
struct EnergySample {
  double t = 0.0;
  double energy = 0.0;     ///< ||u||^2
  double enstrophy = 0.0;  ///< ||grad u||^2 = ||curl u||^2
};

struct Trajectory {
  std::vector<SolverState> snapshots;  ///< empty when snapshots are not kept
  std::vector<EnergySample> energy;
  /// max over snapshots of (||u||^2 + 2 int ||grad u||^2) / ||u0||^2 - 1
  double ledger_excess = 0.0;
  double dt = 0.0;
  int halvings = 0;
  bool blew_up = false;
  std::string blowup_reason;
};

struct RunOptions {
  int sample_every = 1;
  bool keep_snapshots = true;
  /// Called for every snapshot of the attempt in progress.
  std::function<void(const SolverState&)> observer;
  /// Called before a retry with a smaller step; observers should discard what they saw.
  std::function<void(double new_dt)> on_restart;
};

inline EnergySample energy_sample(const SolverState& s) {
  return {s.t, std::pow(l2_norm(s.u), 2), std::pow(sobolev_norm(s.u, 1.0), 2)};
}

class GalerkinSolver {
 public:
  GalerkinSolver(const WavevectorGrid& grid, IntegratorSpec spec) : grid_(grid), spec_(spec) {
    if (spec_.backend == Backend::Fast) fast_ = std::make_unique<PseudoSpectral>(grid_, spec_.dealias);
    set_dt(spec_.resolved_dt(grid_));
  }

  const IntegratorSpec& spec() const { return spec_; }
  double dt() const { return dt_; }

  void set_dt(double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
    dt_ = dt;
    full_.assign(grid_.slots(), 0.0);
    half_.assign(grid_.slots(), 0.0);
    implicit_.assign(grid_.slots(), 0.0);
    for (std::size_t i = 0; i < grid_.slots(); ++i) {
      const double k2 = grid_.magnitude(i) * grid_.magnitude(i);
      full_[i] = std::exp(-k2 * dt);
      half_[i] = std::exp(-0.5 * k2 * dt);
      implicit_[i] = 1.0 / (1.0 + dt * k2);
    }
  }

  SpectralField nonlinear(const SpectralField& u) {
    return fast_ ? fast_->nonlinear(u) : nonlinear_term_direct(u);
  }
  SpectralField bilinear(const SpectralField& u, const SpectralField& v) {
    return fast_ ? fast_->bilinear(u, v) : bilinear_direct(u, v);
  }

  /// -A u - B(u, u)
  SpectralField velocity_rhs(const SpectralField& u) {
    SpectralField r = nonlinear(u);
    r *= -1.0;
    return r.axpy(-1.0, apply_multiplier(u, stokes_power(1.0)));
  }

  /// Advances one step of size dt(); throws BlowUpError.
  SolverState step(const SolverState& st) {
    if (!(st.u.grid() == grid_)) throw GridMismatch("state grid does not match the solver grid");
    SpectralField next = spec_.scheme == Scheme::IntegratingFactorRK4 ? rk4(st.u) : imex(st.u);
    SolverState out{st.t + dt_, std::move(next)};
    check_finite(st, out);
    return out;
  }

  /// Integrates to tmax with snapshots every sample_every steps (and at tmax).
  Trajectory run(const SpectralField& u0, double tmax, const RunOptions& opt = {}) {
    if (!(tmax >= 0.0) || !std::isfinite(tmax)) throw DomainError("tmax must be finite and >= 0");
    if (opt.sample_every < 1) throw DomainError("sample stride must be >= 1");
    if (!is_solenoidal(u0, 1e-10)) throw DomainError("initial velocity is not divergence-free");
    const double base_dt = dt_;
    Trajectory tr;
    for (int attempt = 0;; ++attempt) {
      tr = attempt_run(u0, tmax, opt);
      tr.halvings = attempt;
      const bool violated = tr.ledger_excess > 1e-6;
      if (!violated || !spec_.adapt_dt || attempt >= spec_.max_halvings || tr.blew_up) break;
      set_dt(dt_ * 0.5);
      if (opt.on_restart) opt.on_restart(dt_);
    }
    set_dt(base_dt);
    return tr;
  }

 private:
  SpectralField rk4(const SpectralField& u) {
    const double h = dt_;
    SpectralField k1 = neg_nonlinear(u);
    SpectralField stage = combine(u, [&](std::size_t i, int c, const Vec3c& a) {
      return half_[i] * (a[c] + 0.5 * h * k1[i][c]);
    });
    SpectralField k2 = neg_nonlinear(stage);
    stage = combine(u, [&](std::size_t i, int c, const Vec3c& a) { return half_[i] * a[c] + 0.5 * h * k2[i][c]; });
    SpectralField k3 = neg_nonlinear(stage);
    stage = combine(u, [&](std::size_t i, int c, const Vec3c& a) {
      return full_[i] * a[c] + h * half_[i] * k3[i][c];
    });
    SpectralField k4 = neg_nonlinear(stage);
    return combine(u, [&](std::size_t i, int c, const Vec3c& a) {
      return full_[i] * a[c] +
             (h / 6.0) * (full_[i] * k1[i][c] + 2.0 * half_[i] * (k2[i][c] + k3[i][c]) + k4[i][c]);
    });
  }

  SpectralField imex(const SpectralField& u) {
    SpectralField n = neg_nonlinear(u);
    return combine(u, [&](std::size_t i, int c, const Vec3c& a) { return implicit_[i] * (a[c] + dt_ * n[i][c]); });
  }

  SpectralField neg_nonlinear(const SpectralField& u) {
    SpectralField r = nonlinear(u);
    r *= -1.0;
    return r;
  }

  /// Per-slot linear combination; the result is Hermitian because every factor is.
  template <class F>
  SpectralField combine(const SpectralField& u, F&& f) const {
    SpectralField out(grid_);
    auto c = out.unchecked_coefficients();
    for (std::size_t i = 0; i < grid_.slots(); ++i)
      for (int comp = 0; comp < 3; ++comp) c[i][comp] = f(i, comp, u[i]);
    c[grid_.origin()] = Vec3c{};
    return out;
  }

  void check_finite(const SolverState& prev, const SolverState& next) const {
    if (!next.u.all_finite())
      throw BlowUpError("non-finite coefficient at t = " + std::to_string(next.t), prev);
    double watched;
    try {
      watched = gevrey_norm(next.u, spec_.blowup_weight.at(next.t));
    } catch (const OverflowError&) {
      watched = INFINITY;
    }
    if (!(watched <= spec_.blowup_threshold))
      throw BlowUpError("watched norm exceeded " + std::to_string(spec_.blowup_threshold) + " at t = " +
                            std::to_string(next.t),
                        prev);
  }

  /// int |k|^2 |u_k|^2 over an interval, with each modal energy interpolated
  /// geometrically between the end points (exact for pure viscous decay).
  double dissipation_between(const std::vector<double>& a, const std::vector<double>& b, double h) const {
    CompensatedSum sum;
    const auto& mag = grid_.magnitudes();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double x = a[i], y = b[i];
      double mean = 0.5 * (x + y);
      if (x > 0.0 && y > 0.0) {
        const double r = std::log(y / x);
        if (std::abs(r) > 1e-8) mean = (y - x) / r;
      }
      sum += mag[i] * mag[i] * mean;
    }
    return h * sum.value();
  }

  Trajectory attempt_run(const SpectralField& u0, double tmax, const RunOptions& opt) {
    Trajectory tr;
    const double nominal = dt_;
    const long steps = tmax == 0.0 ? 0 : long(std::ceil(tmax / nominal - 1e-9));
    if (steps > 0) set_dt(tmax / double(steps));
    tr.dt = dt_;

    SolverState st{0.0, u0};
    const double e0 = std::pow(l2_norm(u0), 2);
    double dissipated = 0.0;  // int ||grad u||^2 over snapshots
    std::vector<double> prev_modes, modes(grid_.slots());
    auto record = [&](const SolverState& s) {
      const EnergySample e = energy_sample(s);
      for (std::size_t i = 0; i < modes.size(); ++i) modes[i] = norm_sq(s.u[i]);
      if (!tr.energy.empty()) dissipated += dissipation_between(prev_modes, modes, e.t - tr.energy.back().t);
      std::swap(prev_modes, modes);
      modes.resize(grid_.slots());
      tr.energy.push_back(e);
      if (e0 > 0.0) tr.ledger_excess = std::max(tr.ledger_excess, (e.energy + 2.0 * dissipated) / e0 - 1.0);
      if (opt.keep_snapshots) tr.snapshots.push_back(s);
      if (opt.observer) opt.observer(s);
    };
    record(st);
    for (long n = 1; n <= steps; ++n) {
      try {
        st = step(st);
      } catch (const BlowUpError& e) {
        tr.blew_up = true;
        tr.blowup_reason = e.what();
        if (tr.energy.back().t != e.last_finite().t) record(e.last_finite());
        break;
      }
      if (n == steps) st.t = tmax;  // remove accumulated rounding in t
      if (n % opt.sample_every == 0 || n == steps) record(st);
    }
    set_dt(nominal);
    return tr;
  }

  WavevectorGrid grid_;
  IntegratorSpec spec_;
  std::unique_ptr<PseudoSpectral> fast_;
  double dt_ = 0.0;
  std::vector<double> full_, half_, implicit_;
};

/// One step with a freshly built solver.
inline SolverState step(const SolverState& state, const IntegratorSpec& spec) {
  GalerkinSolver solver(state.u.grid(), spec);
  return solver.step(state);
}

inline Trajectory run(const SpectralField& u0, double tmax, const IntegratorSpec& spec, int sample_every = 1) {
  GalerkinSolver solver(u0.grid(), spec);
  RunOptions opt;
  opt.sample_every = sample_every;
  return solver.run(u0, tmax, opt);
}

/// Right side of the vorticity equation: -A w - B(u, w) + B(w, u).
///
/// Throws ConsistencyError unless w equals curl u to 1e-10 relative.
inline SpectralField vorticity_rhs(const SpectralField& u, const SpectralField& w, Backend backend = Backend::Fast) {
  u.check_grid(w);
  const SpectralField expected = curl(u);
  const double scale = l2_norm(expected);
  const double mismatch = l2_norm(w - expected);
  if (mismatch > 1e-10 * scale + 1e-300)
    throw ConsistencyError("vorticity differs from curl of velocity by " + std::to_string(mismatch));
  SpectralField stretch(u.grid()), advect(u.grid());
  if (backend == Backend::Fast) {
    PseudoSpectral ps(u.grid(), true);
    stretch = ps.bilinear(w, u);
    advect = ps.bilinear(u, w);
  } else {
    stretch = bilinear_direct(w, u);
    advect = bilinear_direct(u, w);
  }
  SpectralField r = apply_multiplier(w, stokes_power(1.0));
  r *= -1.0;
  r -= advect;
  r += stretch;
  return r;
}

/// Newline-delimited JSON records {t, energy, enstrophy[, field]}.
inline void write_energy_records(std::ostream& os, const Trajectory& tr,
                                 const std::function<std::string(std::size_t)>& field_ref = {}) {
  for (std::size_t i = 0; i < tr.energy.size(); ++i) {
    nlohmann::json j{{"t", tr.energy[i].t}, {"energy", tr.energy[i].energy}, {"enstrophy", tr.energy[i].enstrophy}};
    if (field_ref) {
      const std::string ref = field_ref(i);
      if (!ref.empty()) j["field"] = ref;
    }
    os << j.dump() << '\n';
  }
}

}  // namespace gevrey

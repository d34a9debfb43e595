#pragma once

#include <cmath>
#include <string>

#include "gevrey/errors.hpp"

namespace gevrey {

/// Weight |k|^s exp(alpha |k|^theta) defining the norm ||A^{s/2} e^{alpha A^{theta/2}} u||.
///
/// theta = 1 is the analytic class; alpha = 0 gives the homogeneous Sobolev norm.
struct GevreyWeight {
  double s = 0.0;
  double alpha = 0.0;
  double theta = 1.0;

  GevreyWeight() = default;
  GevreyWeight(double s_, double alpha_, double theta_ = 1.0) : s(s_), alpha(alpha_), theta(theta_) {
    if (!std::isfinite(s)) throw DomainError("Sobolev index must be finite");
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("Gevrey radius must be finite and >= 0");
    if (!(theta > 0.0 && theta <= 1.0)) throw DomainError("Gevrey exponent theta must lie in (0, 1]");
  }

  /// log of the squared weight at |k| = kmag.
  double log_weight_sq(double kmag) const {
    return 2.0 * s * std::log(kmag) + 2.0 * alpha * std::pow(kmag, theta);
  }
};

/// Analytic weight whose radius grows linearly: alpha(t) = beta0 + beta t.
struct TimeVaryingWeight {
  double s = 0.0;
  double beta0 = 0.0;
  double beta = 0.0;

  TimeVaryingWeight() = default;
  TimeVaryingWeight(double s_, double beta0_, double beta_) : s(s_), beta0(beta0_), beta(beta_) {
    if (!std::isfinite(s)) throw DomainError("Sobolev index must be finite");
    if (!(beta0 >= 0.0) || !std::isfinite(beta0)) throw DomainError("initial radius must be >= 0");
    if (!(beta >= 0.0 && beta <= 0.5)) throw DomainError("radius growth rate must lie in [0, 1/2]");
  }

  double alpha(double t) const { return beta0 + beta * t; }
  GevreyWeight at(double t) const { return GevreyWeight(s, alpha(t), 1.0); }
};

}  // namespace gevrey

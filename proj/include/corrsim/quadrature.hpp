#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace corrsim {

struct QuadratureOptions {
  double abs_tol = 1e-8;
  std::size_t max_panels = 4000;
};

struct QuadratureResult {
  double value;
  double error;  // estimated absolute error
  std::size_t panels;
  std::size_t evaluations;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration over [a, b].
/// The interval is pre-split at `breakpoints` (points outside (a,b) are
/// ignored), and the panel with the largest error estimate is bisected until
/// the summed estimate meets opts.abs_tol. Throws NumericalError with the
/// achieved error and the worst panel if the panel budget is exhausted.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    std::span<const double> breakpoints = {},
                                    const QuadratureOptions& opts = {});

/// Integral over the open unit interval of an integrand that may diverge
/// (integrably) at 0 and 1. Integrates adaptively on (eps, 1 - eps) and adds
/// first-order estimates eps*f(eps) and eps*f(1-eps) for the two tails.
QuadratureResult integrate_unit_interval(const std::function<double(double)>& f,
                                         std::span<const double> breakpoints = {},
                                         const QuadratureOptions& opts = {}, double eps = 1e-12);

}  // namespace corrsim

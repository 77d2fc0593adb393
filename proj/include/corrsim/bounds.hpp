#pragma once

#include <map>
#include <mutex>
#include <utility>

#include "corrsim/marginals.hpp"
#include "corrsim/quadrature.hpp"

namespace corrsim {

enum class ExtremesMethod { closed_form, quadrature };

const char* to_string(ExtremesMethod m) noexcept;

/// Frechet-Hoeffding correlation range of a pair of marginals: rho_minus is
/// the correlation of the antithetic coupling (F_i^{-1}(U), F_j^{-1}(1-U)),
/// rho_plus that of the comonotone coupling (F_i^{-1}(U), F_j^{-1}(U)).
struct CorrelationExtremes {
  double rho_minus;
  double rho_plus;
  ExtremesMethod method;

  static constexpr double degenerate_width = 1e-10;
  bool degenerate() const noexcept { return rho_plus - rho_minus < degenerate_width; }
};

/// Closed form for Bern(p) x Bern(q). Throws DomainError if p or q is not in (0,1).
CorrelationExtremes bernoulli_corr_extremes(double p, double q);

/// Correlation extremes by adaptive quadrature of the standardized quantile
/// products over (0,1), to absolute tolerance opts.abs_tol on each bound.
/// The pair is put in canonical order first, so swapping arguments gives an
/// identical result.
CorrelationExtremes corr_extremes_quadrature(const MarginalSpec& mi, const MarginalSpec& mj,
                                             const QuadratureOptions& opts = {});

/// Closed form for two Bernoulli marginals or two members of the same
/// uniform / normal / exponential family, quadrature otherwise.
CorrelationExtremes corr_extremes(const MarginalSpec& mi, const MarginalSpec& mj);

/// Memo table keyed by the canonically ordered pair. Thread-safe.
class ExtremesCache {
 public:
  CorrelationExtremes get(const MarginalSpec& mi, const MarginalSpec& mj);
  std::size_t size() const;
  std::size_t hits() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<MarginalSpec, MarginalSpec>, CorrelationExtremes> table_;
  std::size_t hits_ = 0;
};

}  // namespace corrsim

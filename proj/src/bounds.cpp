#include "corrsim/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "corrsim/error.hpp"

namespace corrsim {

const char* to_string(ExtremesMethod m) noexcept {
  return m == ExtremesMethod::closed_form ? "closed_form" : "quadrature";
}

CorrelationExtremes bernoulli_corr_extremes(double p, double q) {
  if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0)) {
    std::ostringstream os;
    os << "Bernoulli pair (" << p << ", " << q << ") has a degenerate marginal (zero variance)";
    throw DomainError(os.str());
  }
  const double scale = std::sqrt(p * q * (1.0 - p) * (1.0 - q));
  const double lower_joint = p + q > 1.0 ? p + q - 1.0 : 0.0;
  return {(lower_joint - p * q) / scale, (std::min(p, q) - p * q) / scale, ExtremesMethod::closed_form};
}

CorrelationExtremes corr_extremes_quadrature(const MarginalSpec& mi_in, const MarginalSpec& mj_in,
                                             const QuadratureOptions& opts) {
  const bool swap = mj_in < mi_in;
  const MarginalSpec& mi = swap ? mj_in : mi_in;
  const MarginalSpec& mj = swap ? mi_in : mj_in;

  const Moments a = mi.moments();
  const Moments b = mj.moments();
  auto zi = [&](double u) { return (mi.quantile(u) - a.mean) / a.sd; };
  auto zj = [&](double u) { return (mj.quantile(u) - b.mean) / b.sd; };

  std::vector<double> plus_breaks = mi.breakpoints();
  std::vector<double> minus_breaks = plus_breaks;
  for (double t : mj.breakpoints()) {
    plus_breaks.push_back(t);
    minus_breaks.push_back(1.0 - t);
  }

  const auto plus = integrate_unit_interval([&](double u) { return zi(u) * zj(u); }, plus_breaks, opts);
  const auto minus =
      integrate_unit_interval([&](double u) { return zi(u) * zj(1.0 - u); }, minus_breaks, opts);

  const double rho_plus = std::clamp(plus.value, -1.0, 1.0);
  const double rho_minus = std::clamp(minus.value, -1.0, rho_plus);
  return {rho_minus, rho_plus, ExtremesMethod::quadrature};
}

CorrelationExtremes corr_extremes(const MarginalSpec& mi, const MarginalSpec& mj) {
  if (mi.family() == Family::bernoulli && mj.family() == Family::bernoulli)
    return bernoulli_corr_extremes(mi.params()[0], mj.params()[0]);
  // Same location-scale family: comonotone pair is affine, antithetic one is
  // affine too for the symmetric laws.
  if (mi.family() == mj.family()) {
    constexpr double pi = std::numbers::pi;
    switch (mi.family()) {
      case Family::uniform:
      case Family::normal: return {-1.0, 1.0, ExtremesMethod::closed_form};
      case Family::exponential: return {1.0 - pi * pi / 6.0, 1.0, ExtremesMethod::closed_form};
      default: break;
    }
  }
  return corr_extremes_quadrature(mi, mj);
}

CorrelationExtremes ExtremesCache::get(const MarginalSpec& mi, const MarginalSpec& mj) {
  auto key = mj < mi ? std::make_pair(mj, mi) : std::make_pair(mi, mj);
  {
    std::lock_guard lock(mu_);
    if (auto it = table_.find(key); it != table_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const CorrelationExtremes ext = corr_extremes(key.first, key.second);
  std::lock_guard lock(mu_);
  table_.emplace(std::move(key), ext);
  return ext;
}

std::size_t ExtremesCache::size() const {
  std::lock_guard lock(mu_);
  return table_.size();
}

std::size_t ExtremesCache::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

}  // namespace corrsim

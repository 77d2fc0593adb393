#include "corrsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "corrsim/error.hpp"
#include "corrsim/kernels.hpp"

namespace corrsim {

namespace {

void require_nonempty(std::size_t n) {
  if (n < 2) throw DomainError("statistics need at least two observations");
}

ZCheck make(double target, double estimate, double se) {
  // Degenerate couplings (lambda 0 or 1 on matched laws) give se = 0 up to rounding.
  double z;
  if (se > 1e-12) z = (estimate - target) / se;
  else z = std::fabs(estimate - target) <= 1e-9 ? 0.0 : INFINITY;
  return {target, estimate, se, z};
}

}  // namespace

ZCheck mean_check(std::span<const double> x, const MarginalSpec& m) {
  require_nonempty(x.size());
  const Moments mo = m.moments();
  const auto s = kernels::central_sums(x, mo.mean);
  const double n = static_cast<double>(x.size());
  return make(mo.mean, mo.mean + s.s1 / n, mo.sd / std::sqrt(n));
}

ZCheck sd_check(std::span<const double> x, const MarginalSpec& m) {
  require_nonempty(x.size());
  const Moments mo = m.moments();
  const auto s = kernels::central_sums(x, mo.mean);
  const double n = static_cast<double>(x.size());
  const double var = s.s2 / n;
  const double var_se = std::sqrt(std::max(0.0, s.s4 / n - var * var) / n);
  const double target_var = mo.sd * mo.sd;
  const ZCheck zv = make(target_var, var, var_se);
  return {mo.sd, std::sqrt(var), var_se / (2.0 * mo.sd), zv.z};
}

ZCheck correlation_check(std::span<const double> x, std::span<const double> y, const Moments& mx,
                         const Moments& my, double target) {
  require_nonempty(x.size());
  const auto s = kernels::standardized_cross(x, y, mx.mean, mx.sd, my.mean, my.sd);
  const double n = static_cast<double>(x.size());
  const double mean = s.sum / n;
  const double var = std::max(0.0, s.sum_sq / n - mean * mean);
  return make(target, mean, std::sqrt(var * n / (n - 1.0) / n));
}

ZCheck concurrence_check(std::span<const double> x, std::span<const double> y, double target) {
  require_nonempty(x.size());
  if (x.size() != y.size()) throw DomainError("concurrence_check: columns differ in length");
  std::size_t same = 0;
  for (std::size_t k = 0; k < x.size(); ++k) same += x[k] == y[k];
  const double n = static_cast<double>(x.size());
  return make(target, static_cast<double>(same) / n, std::sqrt(target * (1.0 - target) / n));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  require_nonempty(x.size());
  if (x.size() != y.size()) throw DomainError("pearson: columns differ in length");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = x[k] - mx;
    const double dy = y[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return sxy / std::sqrt(sxx * syy);
}

double ks_statistic(std::span<const double> sample, const MarginalSpec& m) {
  require_nonempty(sample.size());
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t k = 0;
  while (k < s.size()) {
    std::size_t j = k;
    while (j < s.size() && s[j] == s[k]) ++j;
    // Empirical cdf just below and at s[k].
    const double below = static_cast<double>(k) / n;
    const double at = static_cast<double>(j) / n;
    d = std::max({d, std::fabs(at - m.cdf(s[k])), std::fabs(below - m.cdf_left(s[k]))});
    k = j;
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  return std::sqrt(-std::log(alpha / 2.0) / 2.0) / std::sqrt(static_cast<double>(n));
}

}  // namespace corrsim

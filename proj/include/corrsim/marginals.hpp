#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace corrsim {

enum class Family { uniform, exponential, normal, bernoulli, empirical };

const char* to_string(Family f) noexcept;

struct Moments {
  double mean;
  double sd;
};

/// A univariate marginal distribution described by its pseudo-inverse cdf
/// F^{-1}(u) = inf{x : F(x) >= u} and its exact first two moments.
///
/// Values are immutable once built; the factory functions validate the
/// family's parameter domain and reject zero-variance laws.
class MarginalSpec {
 public:
  static MarginalSpec uniform(double a, double b);
  static MarginalSpec exponential(double rate);
  static MarginalSpec normal(double mean, double sd);
  static MarginalSpec bernoulli(double p);
  /// Step distribution on `values` with probabilities `weights`. Values are
  /// sorted and ties merged by summing their weights.
  static MarginalSpec empirical(std::vector<double> values, std::vector<double> weights);

  Family family() const noexcept { return family_; }
  /// Family parameters: uniform (a, b), exponential (rate), normal (mean, sd),
  /// bernoulli (p). Empty for empirical.
  std::span<const double> params() const noexcept { return params_; }
  /// Empirical support (sorted, distinct) and matching weights.
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> weights() const noexcept { return weights_; }

  /// Throws DomainError unless u lies in the open interval (0, 1).
  double quantile(double u) const;
  Moments moments() const;

  /// P(X <= x) and P(X < x); they differ only at atoms.
  double cdf(double x) const;
  double cdf_left(double x) const;

  /// u-values in (0,1) at which quantile() jumps; empty for continuous families.
  std::vector<double> breakpoints() const;

  std::string describe() const;

  auto operator<=>(const MarginalSpec&) const = default;
  bool operator==(const MarginalSpec&) const = default;

 private:
  MarginalSpec(Family f, std::vector<double> params) : family_(f), params_(std::move(params)) {}

  Family family_ = Family::uniform;
  std::vector<double> params_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// Standard normal quantile (Wichura's AS 241 rational approximations,
/// about 1e-16 relative accuracy). p must be in (0,1).
double standard_normal_quantile(double p);

}  // namespace corrsim

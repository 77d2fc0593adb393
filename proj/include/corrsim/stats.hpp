#pragma once

#include <cstddef>
#include <span>

#include "corrsim/marginals.hpp"

namespace corrsim {

/// Estimate with its standard error and the z-score against a target.
struct ZCheck {
  double target;
  double estimate;
  double std_error;
  double z;
};

/// Sample mean against the exact mean; SE = sd / sqrt(N).
ZCheck mean_check(std::span<const double> x, const MarginalSpec& m);

/// Variance about the exact mean against sd^2; SE from the sample fourth
/// central moment. The returned estimate/target are standard deviations,
/// the z-score is the variance z-score.
ZCheck sd_check(std::span<const double> x, const MarginalSpec& m);

/// Correlation estimated as the mean of standardized products with the
/// exact moments of each marginal; SE is the sample sd of the products over
/// sqrt(N). Needs no distributional assumption beyond finite fourth moments.
ZCheck correlation_check(std::span<const double> x, std::span<const double> y, const Moments& mx,
                         const Moments& my, double target);

/// Fraction of rows with x == y against `target`; binomial SE.
ZCheck concurrence_check(std::span<const double> x, std::span<const double> y, double target);

/// Plain Pearson sample correlation.
double pearson(std::span<const double> x, std::span<const double> y);

/// Kolmogorov-Smirnov distance sup |F_N - F|, exact at atoms of F.
double ks_statistic(std::span<const double> sample, const MarginalSpec& m);

/// Asymptotic KS critical value sqrt(-ln(alpha/2) / 2) / sqrt(N).
double ks_critical_value(std::size_t n, double alpha);

}  // namespace corrsim

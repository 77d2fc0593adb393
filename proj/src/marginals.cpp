#include "corrsim/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "corrsim/error.hpp"

namespace corrsim {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

double poly(double r, std::initializer_list<double> c) {
  // Horner with coefficients given from highest degree down.
  double acc = 0.0;
  for (double v : c) acc = acc * r + v;
  return acc;
}

}  // namespace

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::exponential: return "exponential";
    case Family::normal: return "normal";
    case Family::bernoulli: return "bernoulli";
    case Family::empirical: return "empirical";
  }
  return "unknown";
}

double standard_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "normal quantile needs p in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           poly(r, {2509.0809287301226727, 33430.575583588128105, 67265.770927008700853,
                    45921.953931549871457, 13731.693765509461125, 1971.5909503065514427,
                    133.14166789178437745, 3.387132872796366608}) /
           poly(r, {5226.495278852854561, 28729.085735721942674, 39307.89580009271061,
                    21213.794301586595867, 5394.1960214247511077, 687.1870074920579083,
                    42.313330701600911252, 1.0});
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = poly(r, {7.7454501427834140764e-4, 0.0227238449892691845833, 0.24178072517745061177,
                   1.27045825245236838258, 3.64784832476320460504, 5.7694972214606914055,
                   4.6303378461565452959, 1.42343711074968357734}) /
          poly(r, {1.05075007164441684324e-9, 5.475938084995344946e-4, 0.0151986665636164571966,
                   0.14810397642748007459, 0.68976733498510000455, 1.6763848301838038494,
                   2.05319162663775882187, 1.0});
  } else {
    r -= 5.0;
    val = poly(r, {2.01033439929228813265e-7, 2.71155556874348757815e-5, 0.0012426609473880784386,
                   0.026532189526576123093, 0.29656057182850489123, 1.7848265399172913358,
                   5.4637849111641143699, 6.6579046435011037772}) /
          poly(r, {2.04426310338993978564e-15, 1.4215117583164458887e-7, 1.8463183175100546818e-5,
                   7.868691311456132591e-4, 0.0148753612908506148525, 0.13692988092273580531,
                   0.59983220655588793769, 1.0});
  }
  return q < 0.0 ? -val : val;
}

MarginalSpec MarginalSpec::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a < b, "uniform(a,b) needs finite a < b");
  return MarginalSpec(Family::uniform, {a, b});
}

MarginalSpec MarginalSpec::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential(rate) needs rate > 0");
  return MarginalSpec(Family::exponential, {rate});
}

MarginalSpec MarginalSpec::normal(double mean, double sd) {
  require(std::isfinite(mean) && std::isfinite(sd) && sd > 0.0, "normal(mean,sd) needs sd > 0");
  return MarginalSpec(Family::normal, {mean, sd});
}

MarginalSpec MarginalSpec::bernoulli(double p) {
  require(p >= 0.0 && p <= 1.0, "bernoulli(p) needs p in [0,1]");
  require(p > 0.0 && p < 1.0, "bernoulli(p) with p in {0,1} has zero variance");
  return MarginalSpec(Family::bernoulli, {p});
}

MarginalSpec MarginalSpec::empirical(std::vector<double> values, std::vector<double> weights) {
  require(!values.empty() && values.size() == weights.size(),
          "empirical needs matching non-empty values and weights");
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    require(std::isfinite(values[k]), "empirical values must be finite");
    require(weights[k] >= 0.0, "empirical weights must be non-negative");
    total += weights[k];
  }
  require(std::fabs(total - 1.0) <= 1e-12, "empirical weights must sum to 1 within 1e-12");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  MarginalSpec m(Family::empirical, {});
  for (std::size_t k : order) {
    if (weights[k] == 0.0) continue;
    if (!m.values_.empty() && m.values_.back() == values[k]) {
      m.weights_.back() += weights[k];
    } else {
      m.values_.push_back(values[k]);
      m.weights_.push_back(weights[k]);
    }
  }
  require(m.values_.size() >= 2, "empirical distribution needs two distinct values with positive weight");

  m.cumulative_.resize(m.weights_.size());
  std::partial_sum(m.weights_.begin(), m.weights_.end(), m.cumulative_.begin());
  m.cumulative_.back() = 1.0;
  return m;
}

double MarginalSpec::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) {
    std::ostringstream os;
    os << "quantile argument " << u << " outside (0,1)";
    throw DomainError(os.str());
  }
  switch (family_) {
    case Family::uniform: return params_[0] + (params_[1] - params_[0]) * u;
    case Family::exponential: return -std::log1p(-u) / params_[0];
    case Family::normal: return params_[0] + params_[1] * standard_normal_quantile(u);
    case Family::bernoulli: return u > 1.0 - params_[0] ? 1.0 : 0.0;
    case Family::empirical: {
      auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
      return values_[static_cast<std::size_t>(it - cumulative_.begin())];
    }
  }
  return 0.0;
}

Moments MarginalSpec::moments() const {
  switch (family_) {
    case Family::uniform:
      return {0.5 * (params_[0] + params_[1]), (params_[1] - params_[0]) / std::sqrt(12.0)};
    case Family::exponential: return {1.0 / params_[0], 1.0 / params_[0]};
    case Family::normal: return {params_[0], params_[1]};
    case Family::bernoulli: return {params_[0], std::sqrt(params_[0] * (1.0 - params_[0]))};
    case Family::empirical: {
      double mean = 0.0;
      for (std::size_t k = 0; k < values_.size(); ++k) mean += weights_[k] * values_[k];
      double var = 0.0;
      for (std::size_t k = 0; k < values_.size(); ++k)
        var += weights_[k] * (values_[k] - mean) * (values_[k] - mean);
      return {mean, std::sqrt(var)};
    }
  }
  return {0.0, 0.0};
}

double MarginalSpec::cdf(double x) const {
  switch (family_) {
    case Family::uniform: return std::clamp((x - params_[0]) / (params_[1] - params_[0]), 0.0, 1.0);
    case Family::exponential: return x <= 0.0 ? 0.0 : -std::expm1(-params_[0] * x);
    case Family::normal: return 0.5 * std::erfc(-(x - params_[0]) / (params_[1] * std::sqrt(2.0)));
    case Family::bernoulli: return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - params_[0] : 1.0);
    case Family::empirical: {
      auto it = std::upper_bound(values_.begin(), values_.end(), x);
      if (it == values_.begin()) return 0.0;
      return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
    }
  }
  return 0.0;
}

double MarginalSpec::cdf_left(double x) const {
  switch (family_) {
    case Family::bernoulli: return x <= 0.0 ? 0.0 : (x <= 1.0 ? 1.0 - params_[0] : 1.0);
    case Family::empirical: {
      auto it = std::lower_bound(values_.begin(), values_.end(), x);
      if (it == values_.begin()) return 0.0;
      return cumulative_[static_cast<std::size_t>(it - values_.begin()) - 1];
    }
    default: return cdf(x);
  }
}

std::vector<double> MarginalSpec::breakpoints() const {
  switch (family_) {
    case Family::bernoulli: return {1.0 - params_[0]};
    case Family::empirical: return {cumulative_.begin(), cumulative_.end() - 1};
    default: return {};
  }
}

std::string MarginalSpec::describe() const {
  std::ostringstream os;
  os << to_string(family_) << '(';
  if (family_ == Family::empirical) {
    os << values_.size() << " atoms";
  } else {
    for (std::size_t k = 0; k < params_.size(); ++k) os << (k ? "," : "") << params_[k];
  }
  os << ')';
  return os.str();
}

}  // namespace corrsim

#include "corrsim/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "corrsim/error.hpp"
#include "corrsim/kernels.hpp"
#include "corrsim/rng.hpp"

namespace corrsim {

namespace {

constexpr double kCorrSlack = 1e-9;

double choose_alpha(const AlphaInterval& iv, const AlphaPolicy& policy, const char* what) {
  if (policy.kind == AlphaPolicy::Kind::midpoint) return std::max(0.0, iv.midpoint());
  if (!iv.contains(policy.value)) {
    std::ostringstream os;
    os << "explicit alpha " << policy.value << " outside the feasible " << what << " interval [" << iv.lo << ", "
       << iv.hi << "]";
    throw InfeasibleError(os.str());
  }
  return policy.value;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Fills recipe/feasible/diagnostics from plan.lambda.
void select_recipe(SamplingPlan& plan, const PlanOptions& opts) {
  const ConvexityMatrix& l = plan.lambda;
  const std::size_t n = l.size();
  std::ostringstream diag;

  if (n == 2) {
    plan.recipe = BernoulliRecipe{RecipeKind::bivariate, std::nullopt, std::nullopt, bivariate_pmf(l(0, 1))};
    plan.feasible = true;
    diag << "bivariate recipe, lambda12 = " << l(0, 1);
  } else if (n == 3) {
    const double l12 = l(0, 1), l13 = l(0, 2), l23 = l(1, 2);
    const AlphaInterval iv = trivariate_alpha_interval(l12, l13, l23);
    if (!iv.feasible || !trivariate_feasible(l12, l13, l23)) {
      const double sum = l12 + l13 + l23;
      const double bound = 1.0 + 2.0 * std::min({l12, l13, l23});
      diag << "infeasible: ";
      if (sum < 1.0)
        diag << "concurrence sum lambda12+lambda13+lambda23 = " << fmt(sum) << " < 1";
      else
        diag << "concurrence sum lambda12+lambda13+lambda23 = " << fmt(sum) << " > 1 + 2 min = " << fmt(bound);
      plan.feasible = false;
    } else {
      const double alpha = choose_alpha(iv, opts.alpha, "trivariate alpha");
      if (opts.trivariate == TrivariateMethod::direct) {
        plan.recipe = BernoulliRecipe{RecipeKind::trivariate_direct, iv, std::nullopt,
                                      TrivariateDirectSampler(l12, l13, l23)};
        diag << "trivariate interval construction";
      } else {
        plan.recipe = BernoulliRecipe{RecipeKind::trivariate, iv, alpha, trivariate_pmf(l12, l13, l23, alpha)};
        diag << "trivariate recipe, alpha = " << alpha << " in [" << iv.lo << ", " << iv.hi << "]";
      }
      plan.feasible = true;
    }
  } else if (n == 4) {
    const AlphaInterval iv = quadrivariate_alpha_interval(l);
    if (!iv.feasible) {
      diag << "infeasible: alpha interval empty, need alpha >= " << iv.lo << " (atom " << iv.lo_atom
           << " >= 0) and alpha <= " << iv.hi << " (atom " << iv.hi_atom << " >= 0)";
      if (auto v = principal_submatrix_violation(l)) diag << "; " << *v;
      plan.feasible = false;
    } else {
      const double alpha = choose_alpha(iv, opts.alpha, "quadrivariate alpha");
      plan.recipe = BernoulliRecipe{RecipeKind::quadrivariate, iv, alpha, QuadrivariateSampler(l, alpha)};
      plan.feasible = true;
      diag << "quadrivariate recipe, alpha = " << alpha << " in [" << iv.lo << ", " << iv.hi << "]";
    }
  } else {
    if (auto v = principal_submatrix_violation(l)) {
      diag << "infeasible: " << *v;
      plan.feasible = false;
    } else {
      const std::vector<double> halves(n, 0.5);
      FeasibilityWitness w = lp_feasible(halves, l, opts.oracle);
      if (w.feasible) {
        plan.recipe = BernoulliRecipe{RecipeKind::oracle_pmf, std::nullopt, std::nullopt, std::move(*w.pmf)};
        plan.feasible = true;
        diag << "oracle pmf recipe over " << (std::size_t{1} << n) << " atoms ("
             << (w.exact ? "exact" : "floating") << " arithmetic, " << w.pivots << " pivots)";
      } else {
        diag << "infeasible: no fair-coin law with this concurrence matrix; " << w.certificate;
        plan.feasible = false;
      }
    }
  }
  plan.diagnostics = diag.str();
}

void check_dims(const std::vector<MarginalSpec>& marginals, std::size_t matrix_n) {
  const std::size_t n = marginals.size();
  if (n < 2) throw DomainError("a sampling plan needs at least two marginals");
  if (matrix_n != n) throw DomainError("matrix size does not match the number of marginals");
  if (n > max_plan_dim) {
    std::ostringstream os;
    os << "n = " << n << " exceeds the supported maximum of " << max_plan_dim
       << " coordinates; split the vector into independent blocks of at most " << max_plan_dim;
    throw CapacityError(os.str());
  }
}

std::vector<CorrelationExtremes> all_extremes(const std::vector<MarginalSpec>& m) {
  const std::size_t n = m.size();
  ExtremesCache cache;
  std::vector<CorrelationExtremes> out(n * n, CorrelationExtremes{-1.0, 1.0, ExtremesMethod::closed_form});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out[i * n + j] = out[j * n + i] = cache.get(m[i], m[j]);
  return out;
}

}  // namespace

const char* to_string(RecipeKind k) noexcept {
  switch (k) {
    case RecipeKind::bivariate: return "bivariate";
    case RecipeKind::trivariate: return "trivariate";
    case RecipeKind::trivariate_direct: return "trivariate_direct";
    case RecipeKind::quadrivariate: return "quadrivariate";
    case RecipeKind::oracle_pmf: return "oracle_pmf";
  }
  return "unknown";
}

Atom BernoulliRecipe::draw(Rng& rng) const {
  switch (engine.index()) {
    case 0: return std::get<0>(engine).sample(rng);
    case 1: return std::get<1>(engine).draw(rng);
    default: return std::get<2>(engine).draw(rng);
  }
}

double SamplingPlan::implied_correlation(std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  const CorrelationExtremes& e = extremes(i, j);
  const double l = lambda(i, j);
  return l * e.rho_plus + (1.0 - l) * e.rho_minus;
}

double convexity_from_correlation(double rho, const CorrelationExtremes& ext) {
  if (ext.degenerate()) {
    if (std::fabs(rho - ext.rho_plus) <= kCorrSlack) return 1.0;
    std::ostringstream os;
    os << "correlation " << rho << " unachievable: the pair's correlation is fixed at " << ext.rho_plus;
    throw UnachievableCorrelationError(os.str(), rho, ext.rho_minus, ext.rho_plus);
  }
  if (rho < ext.rho_minus - kCorrSlack || rho > ext.rho_plus + kCorrSlack) {
    std::ostringstream os;
    os.precision(9);
    os << "correlation " << rho << " unachievable: must lie in [" << ext.rho_minus << ", " << ext.rho_plus << "]";
    throw UnachievableCorrelationError(os.str(), rho, ext.rho_minus, ext.rho_plus);
  }
  return std::clamp((rho - ext.rho_minus) / (ext.rho_plus - ext.rho_minus), 0.0, 1.0);
}

SamplingPlan build_plan(std::vector<MarginalSpec> marginals, const CorrelationMatrix& target_corr,
                        const PlanOptions& opts) {
  check_dims(marginals, target_corr.size());
  SamplingPlan plan;
  const std::size_t n = marginals.size();
  plan.pair_extremes = all_extremes(marginals);
  plan.marginals = std::move(marginals);
  plan.target_corr = target_corr;
  plan.lambda = ConvexityMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        plan.lambda.set(i, j, convexity_from_correlation(target_corr(i, j), plan.extremes(i, j)));
      } catch (const UnachievableCorrelationError& e) {
        std::ostringstream os;
        os << "pair (" << i + 1 << "," << j + 1 << "): " << e.what();
        throw UnachievableCorrelationError(os.str(), e.rho(), e.lo(), e.hi());
      }
    }
  select_recipe(plan, opts);
  return plan;
}

SamplingPlan build_plan_from_convexity(std::vector<MarginalSpec> marginals, const ConvexityMatrix& lambda,
                                       const PlanOptions& opts) {
  check_dims(marginals, lambda.size());
  SamplingPlan plan;
  const std::size_t n = marginals.size();
  plan.pair_extremes = all_extremes(marginals);
  plan.marginals = std::move(marginals);
  plan.lambda = lambda;
  plan.target_corr = CorrelationMatrix(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      plan.target_corr.set(i, j, std::clamp(plan.implied_correlation(i, j), -1.0, 1.0));
  select_recipe(plan, opts);
  return plan;
}

void sample_vector(const SamplingPlan& plan, Rng& rng, std::span<double> out) {
  if (!plan.feasible) throw InfeasibleError("cannot sample from an infeasible plan: " + plan.diagnostics);
  const std::size_t n = plan.dim();
  const double u = rng.uniform_open();
  const Atom b = plan.recipe->draw(rng);
  for (std::size_t i = 0; i < n; ++i) out[i] = plan.marginals[i].quantile(atom_bit(b, n, i) ? u : 1.0 - u);
}

std::vector<double> sample_vector(const SamplingPlan& plan, Rng& rng) {
  std::vector<double> out(plan.dim());
  sample_vector(plan, rng, out);
  return out;
}

SampleBatch sample_batch(const SamplingPlan& plan, std::size_t count, std::uint64_t seed, std::uint64_t stream_id) {
  if (!plan.feasible) throw InfeasibleError("cannot sample from an infeasible plan: " + plan.diagnostics);
  if (count == 0) throw DomainError("sample_batch needs count >= 1");
  const std::size_t n = plan.dim();
  SampleBatch batch{count, n, std::vector<double>(count * n), seed, stream_id};

  Rng rng(seed, stream_id);
  std::vector<double> u(count);
  std::vector<std::uint8_t> bits(count * n);
  for (std::size_t r = 0; r < count; ++r) {
    u[r] = rng.uniform_open();
    const Atom b = plan.recipe->draw(rng);
    for (std::size_t i = 0; i < n; ++i) bits[i * count + r] = static_cast<std::uint8_t>(atom_bit(b, n, i));
  }

  for (std::size_t j = 0; j < n; ++j) {
    std::span<double> col{batch.values.data() + j * count, count};
    kernels::antithetic_mix(u, std::span<const std::uint8_t>{bits.data() + j * count, count}, col);
    const MarginalSpec& m = plan.marginals[j];
    if (m.family() == Family::uniform) {
      const auto p = m.params();
      kernels::affine(col, p[0], p[1] - p[0]);
    } else {
      for (double& x : col) x = m.quantile(x);
    }
  }
  return batch;
}

std::vector<SampleBatch> sample_parallel(const SamplingPlan& plan, std::size_t count, std::uint64_t seed,
                                         std::size_t streams) {
  if (streams == 0) throw DomainError("sample_parallel needs at least one stream");
  if (!plan.feasible) throw InfeasibleError("cannot sample from an infeasible plan: " + plan.diagnostics);
  streams = std::min(streams, count);
  std::vector<SampleBatch> out(streams);
  {
    std::vector<std::jthread> workers;
    for (std::size_t k = 0; k < streams; ++k) {
      const std::size_t rows = count / streams + (k < count % streams ? 1 : 0);
      workers.emplace_back([&, k, rows] { out[k] = sample_batch(plan, rows, seed, k); });
    }
  }
  return out;
}

}  // namespace corrsim

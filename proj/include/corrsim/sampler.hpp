#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "corrsim/bernoulli_joint.hpp"
#include "corrsim/bounds.hpp"
#include "corrsim/joint_pmf.hpp"
#include "corrsim/marginals.hpp"
#include "corrsim/matrix.hpp"
#include "corrsim/oracle.hpp"

namespace corrsim {

class Rng;

/// How the free alpha of the 3- and 4-coordinate constructions is chosen.
struct AlphaPolicy {
  enum class Kind { midpoint, explicit_value };
  Kind kind = Kind::midpoint;
  double value = 0.0;

  static AlphaPolicy midpoint() { return {}; }
  static AlphaPolicy explicit_value(double alpha) { return {Kind::explicit_value, alpha}; }
  bool operator==(const AlphaPolicy&) const = default;
};

enum class TrivariateMethod { pmf, direct };

struct PlanOptions {
  AlphaPolicy alpha;
  TrivariateMethod trivariate = TrivariateMethod::pmf;
  OracleOptions oracle;
};

enum class RecipeKind { bivariate, trivariate, trivariate_direct, quadrivariate, oracle_pmf };

const char* to_string(RecipeKind k) noexcept;

/// How the fair-coin vector B is drawn for a plan.
struct BernoulliRecipe {
  RecipeKind kind;
  std::optional<AlphaInterval> alpha_interval;
  std::optional<double> alpha;
  std::variant<JointPMF, TrivariateDirectSampler, QuadrivariateSampler> engine;

  /// Draws B as an atom over the plan's n coordinates.
  Atom draw(Rng& rng) const;
};

/// Compiled sampling job: pairwise extremes, convexity matrix and the
/// Bernoulli recipe. Immutable once built; share freely across threads.
struct SamplingPlan {
  std::vector<MarginalSpec> marginals;
  CorrelationMatrix target_corr;
  ConvexityMatrix lambda;
  std::optional<BernoulliRecipe> recipe;
  bool feasible = false;
  std::string diagnostics;

  std::size_t dim() const noexcept { return marginals.size(); }
  const CorrelationExtremes& extremes(std::size_t i, std::size_t j) const { return pair_extremes[i * dim() + j]; }
  /// lambda_ij rho+_ij + (1 - lambda_ij) rho-_ij.
  double implied_correlation(std::size_t i, std::size_t j) const;

  std::vector<CorrelationExtremes> pair_extremes;  // row-major n x n, diagonal unused
};

/// count x n variates plus the (seed, stream_id) that regenerates them.
/// Stored column by column.
struct SampleBatch {
  std::size_t count = 0;
  std::size_t n = 0;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  std::span<const double> column(std::size_t j) const { return {values.data() + j * count, count}; }
  double at(std::size_t row, std::size_t col) const { return values[col * count + row]; }
};

/// (rho - rho-) / (rho+ - rho-), clamped to [0,1] within 1e-9 slack.
/// Throws UnachievableCorrelationError when rho is outside [rho-, rho+], or
/// when the extremes are degenerate and rho differs from their common value.
double convexity_from_correlation(double rho, const CorrelationExtremes& ext);

inline constexpr std::size_t max_plan_dim = 12;

SamplingPlan build_plan(std::vector<MarginalSpec> marginals, const CorrelationMatrix& target_corr,
                        const PlanOptions& opts = {});

/// Same pipeline starting from a convexity (= concurrence) matrix.
SamplingPlan build_plan_from_convexity(std::vector<MarginalSpec> marginals, const ConvexityMatrix& lambda,
                                       const PlanOptions& opts = {});

/// One vector: a shared uniform U, one Bernoulli draw B, then
/// X_i = F_i^{-1}(U B_i + (1 - U)(1 - B_i)). `out` must hold dim() values.
void sample_vector(const SamplingPlan& plan, Rng& rng, std::span<double> out);
std::vector<double> sample_vector(const SamplingPlan& plan, Rng& rng);

/// Rows are identical to successive sample_vector calls on Rng(seed, stream_id).
SampleBatch sample_batch(const SamplingPlan& plan, std::size_t count, std::uint64_t seed, std::uint64_t stream_id);

/// Splits `count` rows into `streams` contiguous chunks, generates chunk k
/// from stream_id k on its own thread, and returns them in stream order.
std::vector<SampleBatch> sample_parallel(const SamplingPlan& plan, std::size_t count, std::uint64_t seed,
                                         std::size_t streams);

}  // namespace corrsim

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "corrsim/error.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/sampler.hpp"
#include "corrsim/stats.hpp"

using namespace corrsim;

namespace {

std::vector<MarginalSpec> repeat(const MarginalSpec& m, std::size_t n) { return std::vector<MarginalSpec>(n, m); }

const MarginalSpec U01 = MarginalSpec::uniform(0.0, 1.0);
const MarginalSpec EXP1 = MarginalSpec::exponential(1.0);
const MarginalSpec FAIR = MarginalSpec::bernoulli(0.5);

}  // namespace

TEST_CASE("convexity_from_correlation examples") {
  const CorrelationExtremes e{-0.6, 0.8, ExtremesMethod::quadrature};
  CHECK(convexity_from_correlation(0.8, e) == 1.0);
  CHECK(convexity_from_correlation(-0.6, e) == 0.0);
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  const CorrelationExtremes x{1.0 - pi2_6, 1.0, ExtremesMethod::closed_form};
  const double l = convexity_from_correlation(0.0, x);
  CHECK(l == doctest::Approx((pi2_6 - 1.0) / pi2_6).epsilon(1e-15));
  CHECK(l == doctest::Approx(0.39207289814597335).epsilon(1e-14));
  CHECK(std::fabs(l * x.rho_plus + (1 - l) * x.rho_minus) < 1e-15);
  CHECK_THROWS_AS(convexity_from_correlation(0.81, e), UnachievableCorrelationError);
  try {
    convexity_from_correlation(-0.7, e);
  } catch (const UnachievableCorrelationError& err) {
    CHECK(err.rho() == -0.7);
    CHECK(err.lo() == -0.6);
    CHECK(err.hi() == 0.8);
  }
}

TEST_CASE("degenerate extremes") {
  const CorrelationExtremes d{0.5, 0.5, ExtremesMethod::quadrature};
  CHECK(convexity_from_correlation(0.5, d) == 1.0);
  CHECK_THROWS_AS(convexity_from_correlation(0.4, d), UnachievableCorrelationError);
}

TEST_CASE("plan round trip: lambda -> correlation -> lambda") {
  Rng rng(9);
  const std::vector<MarginalSpec> ms = {U01, EXP1, MarginalSpec::normal(0, 1), MarginalSpec::bernoulli(0.3)};
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = 0; j < ms.size(); ++j) {
      const auto e = corr_extremes(ms[i], ms[j]);
      for (int t = 0; t < 20; ++t) {
        const double l = rng.uniform_open();
        const double rho = l * e.rho_plus + (1 - l) * e.rho_minus;
        CHECK(std::fabs(convexity_from_correlation(rho, e) - l) <= 1e-9);
      }
    }
}

TEST_CASE("build_plan examples") {
  SUBCASE("three fair coins at -0.4 are infeasible") {
    const auto plan = build_plan(repeat(FAIR, 3), CorrelationMatrix(3, -0.4));
    CHECK_FALSE(plan.feasible);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(plan.lambda(i, j) == doctest::Approx(0.3));
    CHECK(plan.diagnostics.find("0.9 < 1") != std::string::npos);
    Rng rng(1);
    CHECK_THROWS_AS(sample_vector(plan, rng), InfeasibleError);
  }
  SUBCASE("n = 2 at rho_plus") {
    const auto e = corr_extremes(U01, EXP1);
    CorrelationMatrix c(2);
    c.set(0, 1, e.rho_plus);
    const auto plan = build_plan({U01, EXP1}, c);
    CHECK(plan.feasible);
    CHECK(plan.recipe->kind == RecipeKind::bivariate);
    CHECK(plan.lambda(0, 1) == 1.0);
  }
  SUBCASE("three uniforms at zero correlation") {
    const auto plan = build_plan(repeat(U01, 3), CorrelationMatrix(3, 0.0));
    CHECK(plan.feasible);
    CHECK(plan.recipe->kind == RecipeKind::trivariate);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) CHECK(plan.lambda(i, j) == 0.5);
    CHECK(plan.recipe->alpha_interval->lo == 0.0);
    CHECK(plan.recipe->alpha_interval->hi == 0.25);
    CHECK(*plan.recipe->alpha == 0.125);
  }
  SUBCASE("unachievable correlation names the pair") {
    CorrelationMatrix c(3, 0.0);
    c.set(1, 2, 0.95);
    try {
      build_plan({U01, U01, EXP1}, c);
      FAIL("expected UnachievableCorrelationError");
    } catch (const UnachievableCorrelationError& e) {
      CHECK(std::string(e.what()).find("pair (2,3)") != std::string::npos);
    }
  }
  SUBCASE("size checks") {
    CHECK_THROWS_AS(build_plan(repeat(U01, 13), CorrelationMatrix(13, 0.0)), CapacityError);
    CHECK_THROWS_AS(build_plan(repeat(U01, 3), CorrelationMatrix(2, 0.0)), DomainError);
    CHECK_THROWS_AS(build_plan(repeat(U01, 1), CorrelationMatrix(1)), DomainError);
  }
}

TEST_CASE("implied correlation reproduces the target") {
  CorrelationMatrix c(4);
  c.set(0, 1, 0.3);
  c.set(0, 2, -0.2);
  c.set(0, 3, 0.1);
  c.set(1, 2, 0.25);
  c.set(1, 3, -0.1);
  c.set(2, 3, 0.05);
  const auto plan = build_plan({U01, EXP1, MarginalSpec::normal(0, 1), FAIR}, c);
  REQUIRE(plan.feasible);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) CHECK(std::fabs(plan.implied_correlation(i, j) - c(i, j)) <= 1e-9);
}

TEST_CASE("recipes by dimension") {
  CHECK(build_plan_from_convexity(repeat(U01, 4), ConvexityMatrix(4, 0.5)).recipe->kind ==
        RecipeKind::quadrivariate);
  const auto p5 = build_plan_from_convexity(repeat(U01, 6), ConvexityMatrix(6, 0.5));
  CHECK(p5.feasible);
  CHECK(p5.recipe->kind == RecipeKind::oracle_pmf);
  PlanOptions direct;
  direct.trivariate = TrivariateMethod::direct;
  CHECK(build_plan_from_convexity(repeat(U01, 3), ConvexityMatrix(3, 0.5), direct).recipe->kind ==
        RecipeKind::trivariate_direct);
  // n = 5 infeasible through a sub-triple, reported before the LP runs.
  ConvexityMatrix bad(5, 0.5);
  bad.set(0, 1, 0.3);
  bad.set(0, 2, 0.3);
  bad.set(1, 2, 0.3);
  const auto pb = build_plan_from_convexity(repeat(U01, 5), bad);
  CHECK_FALSE(pb.feasible);
  CHECK(pb.diagnostics.find("{1,2,3}") != std::string::npos);
}

TEST_CASE("explicit alpha policy") {
  PlanOptions o;
  o.alpha = AlphaPolicy::explicit_value(0.2);
  const auto plan = build_plan_from_convexity(repeat(U01, 3), ConvexityMatrix(3, 0.5), o);
  CHECK(*plan.recipe->alpha == 0.2);
  o.alpha = AlphaPolicy::explicit_value(0.3);
  CHECK_THROWS_AS(build_plan_from_convexity(repeat(U01, 3), ConvexityMatrix(3, 0.5), o), InfeasibleError);
  CHECK_THROWS_AS(build_plan_from_convexity(repeat(U01, 4), ConvexityMatrix(4, 0.5), o), InfeasibleError);
}

TEST_CASE("two uniforms at lambda 1 and 0") {
  Rng rng(5);
  const auto same = build_plan_from_convexity(repeat(U01, 2), ConvexityMatrix(2, 1.0));
  const auto anti = build_plan_from_convexity(repeat(U01, 2), ConvexityMatrix(2, 0.0));
  for (int k = 0; k < 10000; ++k) {
    const auto a = sample_vector(same, rng);
    CHECK(a[0] == a[1]);
    const auto b = sample_vector(anti, rng);
    CHECK(b[1] == 1.0 - b[0]);
  }
}

TEST_CASE("three exponentials at zero correlation") {
  const auto plan = build_plan(repeat(EXP1, 3), CorrelationMatrix(3, 0.0));
  REQUIRE(plan.feasible);
  const auto batch = sample_batch(plan, 1000000, 2718, 0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const auto c = correlation_check(batch.column(i), batch.column(j), EXP1.moments(), EXP1.moments(), 0.0);
      CHECK(std::fabs(c.z) <= 4.0);
    }
}

TEST_CASE("sample_batch equals successive sample_vector calls") {
  CorrelationMatrix c(4, 0.1);
  const auto plan = build_plan({U01, EXP1, MarginalSpec::normal(2, 3), MarginalSpec::bernoulli(0.4)}, c);
  REQUIRE(plan.feasible);
  const auto batch = sample_batch(plan, 5000, 123, 7);
  Rng rng(123, 7);
  for (std::size_t r = 0; r < 5000; ++r) {
    const auto v = sample_vector(plan, rng);
    for (std::size_t j = 0; j < 4; ++j) CHECK(batch.at(r, j) == v[j]);
  }
  for (auto method : {TrivariateMethod::pmf, TrivariateMethod::direct}) {
    PlanOptions o;
    o.trivariate = method;
    const auto p3 = build_plan_from_convexity(repeat(U01, 3), ConvexityMatrix(3, 0.6), o);
    const auto b3 = sample_batch(p3, 1000, 1, 2);
    Rng r3(1, 2);
    for (std::size_t r = 0; r < 1000; ++r) {
      const auto v = sample_vector(p3, r3);
      for (std::size_t j = 0; j < 3; ++j) CHECK(b3.at(r, j) == v[j]);
    }
  }
}

TEST_CASE("determinism and stream metadata") {
  const auto plan = build_plan_from_convexity(repeat(U01, 5), ConvexityMatrix(5, 0.7));
  const auto a = sample_batch(plan, 1000, 99, 3);
  const auto b = sample_batch(plan, 1000, 99, 3);
  CHECK(a.values == b.values);
  CHECK(a.seed == 99);
  CHECK(a.stream_id == 3);
  const auto c = sample_batch(plan, 1000, 99, 4);
  CHECK(a.values != c.values);
  const auto p1 = sample_parallel(plan, 1001, 99, 4);
  const auto p2 = sample_parallel(plan, 1001, 99, 4);
  REQUIRE(p1.size() == 4);
  std::size_t rows = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(p1[k].values == p2[k].values);
    CHECK(p1[k].stream_id == k);
    CHECK(p1[k].values == sample_batch(plan, p1[k].count, 99, k).values);
    rows += p1[k].count;
  }
  CHECK(rows == 1001);
}

TEST_CASE("streams are independent") {
  const auto plan = build_plan(repeat(U01, 2), CorrelationMatrix(2, 0.5));
  const auto a = sample_batch(plan, 1000000, 4242, 0);
  const auto b = sample_batch(plan, 1000000, 4242, 1);
  const auto c = correlation_check(a.column(0), b.column(0), U01.moments(), U01.moments(), 0.0);
  CHECK(std::fabs(c.z) <= 4.0);
}

TEST_CASE("marginals preserved regardless of lambda (KS 1e-3, N = 1e5)") {
  const std::vector<MarginalSpec> ms = {U01, EXP1, MarginalSpec::normal(0, 1),
                                        MarginalSpec::empirical({1, 2, 4}, {0.3, 0.3, 0.4})};
  const double crit = ks_critical_value(100000, 1e-3);
  for (double l : {0.0, 0.3, 0.5, 1.0}) {
    const auto plan = build_plan_from_convexity(ms, ConvexityMatrix(4, l));
    if (!plan.feasible) continue;
    const auto batch = sample_batch(plan, 100000, 17, 0);
    for (std::size_t j = 0; j < 4; ++j) {
      CAPTURE(l);
      CAPTURE(j);
      CHECK(ks_statistic(batch.column(j), ms[j]) < crit);
    }
  }
}

TEST_CASE("concurrence identity for fair coins") {
  ConvexityMatrix l(4, 0.5);
  l.set(0, 1, 0.8);
  l.set(2, 3, 0.3);
  const auto plan = build_plan_from_convexity(repeat(FAIR, 4), l);
  REQUIRE(plan.feasible);
  const auto batch = sample_batch(plan, 1000000, 8, 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(std::fabs(concurrence_check(batch.column(i), batch.column(j), l(i, j)).z) <= 4.0);
}

TEST_CASE("oracle recipe at n = 8 matches its concurrences") {
  const auto plan = build_plan_from_convexity(repeat(FAIR, 8), ConvexityMatrix(8, 0.75));
  REQUIRE(plan.feasible);
  CHECK(plan.recipe->kind == RecipeKind::oracle_pmf);
  const auto batch = sample_batch(plan, 400000, 3, 0);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j)
      CHECK(std::fabs(concurrence_check(batch.column(i), batch.column(j), 0.75).z) <= 4.5);
}

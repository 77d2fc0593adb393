#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "corrsim/bounds.hpp"
#include "corrsim/error.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/stats.hpp"

using namespace corrsim;

namespace {

constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;

// Extreme correlations of Bern(p) x Bern(q) by enumerating the vertices of
// the one-parameter family of 2x2 tables {p11, p - p11, q - p11, 1 - p - q + p11}.
std::pair<double, double> bernoulli_vertex_oracle(double p, double q) {
  const double sd = std::sqrt(p * (1 - p) * q * (1 - q));
  double lo = INFINITY, hi = -INFINITY;
  for (double p11 : {0.0, p, q, p + q - 1.0}) {
    const double atoms[] = {p11, p - p11, q - p11, 1.0 - p - q + p11};
    if (std::any_of(std::begin(atoms), std::end(atoms), [](double a) { return a < -1e-15; })) continue;
    const double r = (p11 - p * q) / sd;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

}  // namespace

TEST_CASE("closed-form examples") {
  auto e = bernoulli_corr_extremes(0.5, 0.5);
  CHECK(e.rho_minus == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(e.rho_plus == doctest::Approx(1.0).epsilon(1e-15));
  auto f = bernoulli_corr_extremes(0.3, 0.6);
  CHECK(f.rho_minus == doctest::Approx(-0.8017837257372732).epsilon(1e-14));
  CHECK(f.rho_plus == doctest::Approx(0.5345224838248488).epsilon(1e-14));
  CHECK(bernoulli_corr_extremes(0.37, 0.37).rho_plus == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(bernoulli_corr_extremes(0.0, 0.5), DomainError);
}

TEST_CASE("closed form matches the vertex oracle") {
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const double p = rng.uniform_open(), q = rng.uniform_open();
    const auto [lo, hi] = bernoulli_vertex_oracle(p, q);
    const auto e = bernoulli_corr_extremes(p, q);
    CHECK(e.rho_minus == doctest::Approx(lo).epsilon(1e-12));
    CHECK(e.rho_plus == doctest::Approx(hi).epsilon(1e-12));
  }
}

TEST_CASE("exponential pair by quadrature") {
  const auto m = MarginalSpec::exponential(1.0);
  auto e = corr_extremes_quadrature(m, m);
  CHECK(std::fabs(e.rho_minus - (1.0 - pi2_6)) < 1e-8);
  CHECK(std::fabs(e.rho_plus - 1.0) < 1e-8);
  // Rate does not matter.
  auto g = corr_extremes_quadrature(MarginalSpec::exponential(3.0), MarginalSpec::exponential(0.2));
  CHECK(std::fabs(g.rho_minus - (1.0 - pi2_6)) < 1e-8);
  auto c = corr_extremes(m, m);
  CHECK(c.method == ExtremesMethod::closed_form);
  CHECK(c.rho_minus == 1.0 - pi2_6);
}

TEST_CASE("uniform and normal pairs by quadrature") {
  const auto u = MarginalSpec::uniform(0.0, 1.0);
  auto e = corr_extremes_quadrature(u, MarginalSpec::uniform(-2.0, 5.0));
  CHECK(std::fabs(e.rho_minus + 1.0) < 1e-9);
  CHECK(std::fabs(e.rho_plus - 1.0) < 1e-9);
  const auto n = MarginalSpec::normal(0.0, 1.0);
  auto f = corr_extremes_quadrature(n, n);
  CHECK(std::fabs(f.rho_minus + 1.0) < 1e-7);
  CHECK(std::fabs(f.rho_plus - 1.0) < 1e-7);
}

TEST_CASE("normal pair against 1e7-draw Monte Carlo") {
  const auto n = MarginalSpec::normal(0.0, 1.0);
  const auto e = corr_extremes_quadrature(n, n);
  Rng rng(77);
  const std::size_t N = 10000000;
  std::vector<double> x(N), y(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double u = rng.uniform_open();
    x[k] = n.quantile(u);
    y[k] = n.quantile(1.0 - u);
  }
  CHECK(std::fabs(pearson(x, y) - e.rho_minus) < 1e-6);
}

TEST_CASE("uniform + exponential has rho_plus < 1, matching Monte Carlo of the comonotone pair") {
  const auto u = MarginalSpec::uniform(0.0, 1.0);
  const auto x = MarginalSpec::exponential(1.0);
  const auto e = corr_extremes(u, x);
  CHECK(e.method == ExtremesMethod::quadrature);
  // Corr(U, -log(1-U)) = sqrt(3)/2 and Corr(U, -log U) = -sqrt(3)/2.
  CHECK(e.rho_plus == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-8));
  CHECK(e.rho_minus == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-8));
  Rng rng(8);
  const std::size_t N = 10000000;
  std::vector<double> a(N), b(N), c(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double v = rng.uniform_open();
    a[k] = u.quantile(v);
    b[k] = x.quantile(v);
    c[k] = x.quantile(1.0 - v);
  }
  const auto plus = correlation_check(a, b, u.moments(), x.moments(), e.rho_plus);
  const auto minus = correlation_check(a, c, u.moments(), x.moments(), e.rho_minus);
  CHECK(std::fabs(plus.z) <= 4.0);
  CHECK(std::fabs(minus.z) <= 4.0);
}

TEST_CASE("quadrature agrees with the Bernoulli closed form on 20 random pairs") {
  Rng rng(31337);
  for (int k = 0; k < 20; ++k) {
    const double p = 0.02 + 0.96 * rng.uniform_open();
    const double q = 0.02 + 0.96 * rng.uniform_open();
    const auto a = corr_extremes_quadrature(MarginalSpec::bernoulli(p), MarginalSpec::bernoulli(q));
    const auto b = bernoulli_corr_extremes(p, q);
    CAPTURE(p);
    CAPTURE(q);
    CHECK(std::fabs(a.rho_minus - b.rho_minus) < 1e-7);
    CHECK(std::fabs(a.rho_plus - b.rho_plus) < 1e-7);
  }
}

TEST_CASE("identical marginals reach rho_plus = 1 for every family") {
  const std::vector<MarginalSpec> ms = {MarginalSpec::uniform(2.0, 3.0), MarginalSpec::exponential(0.5),
                                        MarginalSpec::normal(-1.0, 4.0), MarginalSpec::bernoulli(0.2),
                                        MarginalSpec::empirical({0.0, 1.0, 5.0}, {0.5, 0.3, 0.2})};
  for (const auto& m : ms) {
    CAPTURE(m.describe());
    CHECK(std::fabs(corr_extremes(m, m).rho_plus - 1.0) < 1e-6);
    CHECK(std::fabs(corr_extremes_quadrature(m, m).rho_plus - 1.0) < 1e-6);
  }
}

TEST_CASE("role swap gives identical results") {
  const std::vector<MarginalSpec> ms = {MarginalSpec::uniform(0.0, 1.0), MarginalSpec::exponential(1.0),
                                        MarginalSpec::normal(0.0, 1.0), MarginalSpec::bernoulli(0.3),
                                        MarginalSpec::empirical({-1.0, 4.0}, {0.9, 0.1})};
  for (const auto& a : ms)
    for (const auto& b : ms) {
      const auto x = corr_extremes(a, b), y = corr_extremes(b, a);
      CHECK(x.rho_minus == y.rho_minus);
      CHECK(x.rho_plus == y.rho_plus);
      CHECK(x.rho_minus <= x.rho_plus);
    }
}

TEST_CASE("antithetic Monte Carlo matches rho_minus for mixed pairs") {
  const auto a = MarginalSpec::exponential(1.0);
  const auto b = MarginalSpec::empirical({0.0, 1.0, 3.0}, {0.2, 0.5, 0.3});
  const auto e = corr_extremes(a, b);
  Rng rng(4);
  const std::size_t N = 1000000;
  std::vector<double> x(N), y(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double u = rng.uniform_open();
    x[k] = a.quantile(u);
    y[k] = b.quantile(1.0 - u);
  }
  CHECK(std::fabs(correlation_check(x, y, a.moments(), b.moments(), e.rho_minus).z) <= 4.0);
}

TEST_CASE("cache memoizes per canonical pair") {
  ExtremesCache cache;
  const auto a = MarginalSpec::exponential(1.0), b = MarginalSpec::uniform(0.0, 1.0);
  const auto x = cache.get(a, b);
  const auto y = cache.get(b, a);
  CHECK(cache.size() == 1);
  CHECK(cache.hits() == 1);
  CHECK(x.rho_minus == y.rho_minus);
}

TEST_CASE("degenerate flag") {
  CHECK_FALSE(bernoulli_corr_extremes(0.5, 0.5).degenerate());
  CorrelationExtremes d{0.3, 0.3 + 1e-12, ExtremesMethod::quadrature};
  CHECK(d.degenerate());
}

#include <doctest.h>

#include <cmath>
#include <vector>

#include "corrsim/error.hpp"
#include "corrsim/rng.hpp"
#include "corrsim/stats.hpp"

using namespace corrsim;

TEST_CASE("KS statistic on hand-computed cases") {
  const auto u = MarginalSpec::uniform(0.0, 1.0);
  const std::vector<double> xs = {0.1, 0.4, 0.7};
  // ECDF steps: at 0.1 -> 1/3 vs F=0.1 (0.2333), below 0.4: 1/3 vs 0.4 (0.0667), at 0.7: 1 vs 0.7 (0.3).
  CHECK(ks_statistic(xs, u) == doctest::Approx(0.3));
  // Discrete law sampled in exact proportions has D = 0.
  const auto b = MarginalSpec::bernoulli(0.25);
  const std::vector<double> bs = {0, 0, 0, 1};
  CHECK(ks_statistic(bs, b) == 0.0);
  CHECK(ks_critical_value(100, 0.05) == doctest::Approx(0.1358102).epsilon(1e-6));
}

TEST_CASE("Pearson and standardized correlation agree on large samples") {
  Rng rng(2);
  const std::size_t N = 200000;
  std::vector<double> x(N), y(N);
  for (std::size_t k = 0; k < N; ++k) {
    x[k] = rng.uniform_open();
    y[k] = 0.5 * x[k] + 0.5 * rng.uniform_open();
  }
  const Moments mx{0.5, std::sqrt(1.0 / 12.0)};
  const Moments my{0.5, std::sqrt(0.25 / 12.0 + 0.25 / 12.0)};
  const double target = 0.5 * mx.sd * mx.sd / (mx.sd * my.sd);
  const auto c = correlation_check(x, y, mx, my, target);
  CHECK(std::fabs(c.z) <= 4.0);
  CHECK(std::fabs(pearson(x, y) - target) < 0.01);
}

TEST_CASE("z-scores flag a wrong target") {
  Rng rng(3);
  const auto m = MarginalSpec::exponential(1.0);
  std::vector<double> x(100000);
  for (double& v : x) v = m.quantile(rng.uniform_open());
  CHECK(std::fabs(mean_check(x, m).z) <= 4.0);
  CHECK(std::fabs(mean_check(x, MarginalSpec::exponential(1.05)).z) > 4.0);
  CHECK(std::fabs(sd_check(x, MarginalSpec::exponential(1.05)).z) > 4.0);
}

TEST_CASE("degenerate standard errors") {
  // Fair coins copied exactly: every standardized product is 1.
  const std::vector<double> x = {0, 1, 1, 0, 1};
  const Moments m{0.5, 0.5};
  const auto c = correlation_check(x, x, m, m, 1.0);
  CHECK(c.std_error == 0.0);
  CHECK(c.z == 0.0);
  CHECK(std::isinf(correlation_check(x, x, m, m, 0.9).z));
  const std::vector<double> c0 = {0, 1, 0, 1}, c1 = {0, 1, 0, 1};
  const auto cc = concurrence_check(c0, c1, 1.0);
  CHECK(cc.z == 0.0);
  CHECK_THROWS_AS(mean_check(std::vector<double>{1.0}, MarginalSpec::uniform(0, 1)), DomainError);
}

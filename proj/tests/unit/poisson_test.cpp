#include <doctest.h>

#include <cmath>
#include <random>

#include "eventodist/poisson.hpp"
#include "oracle/oracle.hpp"
#include "support/generators.hpp"

using namespace eventodist;

namespace {

PoissonMvSpec desk_spec() {
  // lambda(x)=1.0, lambda(y)=0.5, lambda(xy)=0.25
  return PoissonMvSpec(PoissonIntensities(EventSet({"x", "y"}), {1.0, 0.5, 0.25}));
}

}  // namespace

TEST_SUITE("poisson") {

TEST_CASE("pmf special cases") {
  const auto spec = desk_spec();
  CHECK(pmf(spec, CountVector({0, 0})) == doctest::Approx(std::exp(-1.75)).epsilon(1e-15));
  CHECK(pmf(spec, CountVector({1, 1})) ==
        doctest::Approx(std::exp(-1.75) * 0.75).epsilon(1e-14));

  // one busy coordinate: e^-lambda lambda(x)^k / k!, any intensity profile
  for (std::int64_t k = 0; k <= 6; ++k) {
    const double expected =
        std::exp(-1.75) * std::pow(1.0, k) / std::tgamma(static_cast<double>(k) + 1.0);
    CHECK(pmf(spec, CountVector({k, 0})) == doctest::Approx(expected).epsilon(1e-13));
  }

  CHECK_THROWS_AS(pmf(spec, CountVector({1})), InvalidArgument);
  CHECK_THROWS_AS(pmf(spec, CountVector({-1, 0})), InvalidArgument);
}

TEST_CASE("pmf equals the independent-per-terrace convolution oracle") {
  std::mt19937_64 rng(401);
  for (int i = 0; i < 10; ++i) {
    const std::size_t n_events = 1 + i % 2;
    const PoissonMvSpec spec(testgen::random_intensities(rng, n_events));
    CountVector at(std::vector<std::int64_t>(n_events, 0));
    for (auto& v : at.n) v = std::uniform_int_distribution<std::int64_t>(0, 5)(rng);
    const double expected = oracle::brute_poisson_pmf(spec, at);
    if (expected == 0.0) {
      CHECK(pmf(spec, at) == 0.0);
    } else {
      CHECK(pmf(spec, at) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  // N=3 exercises the general lattice path
  const PoissonMvSpec spec3(testgen::random_intensities(rng, 3, 1.5, 0.0));
  for (std::int64_t a = 0; a <= 3; ++a) {
    for (std::int64_t b = 0; b <= 2; ++b) {
      const CountVector at({a, b, 1});
      CHECK(pmf(spec3, at) ==
            doctest::Approx(oracle::brute_poisson_pmf(spec3, at)).epsilon(1e-12));
    }
  }
}

TEST_CASE("bivariate fast path equals the lattice path") {
  std::mt19937_64 rng(402);
  for (int i = 0; i < 10; ++i) {
    const PoissonMvSpec spec(testgen::random_intensities(rng, 2));
    for (std::int64_t nx = 0; nx <= 4; ++nx) {
      for (std::int64_t ny = 0; ny <= 4; ++ny) {
        const CountVector at({nx, ny});
        const double general = pmf_lattice(spec, at);
        if (general == 0.0) {
          CHECK(pmf(spec, at) == 0.0);
        } else {
          CHECK(pmf(spec, at) == doctest::Approx(general).epsilon(1e-13));
        }
      }
    }
  }
}

TEST_CASE("marginal pmf") {
  const auto spec = desk_spec();
  const double lambda_x = 1.25;  // lambda(x) + lambda(xy)
  CHECK(marginal_pmf(spec, "x", 0) == doctest::Approx(std::exp(-lambda_x)).epsilon(1e-15));

  const PoissonMvSpec zero(PoissonIntensities(EventSet({"x"}), {0.0}));
  CHECK(marginal_pmf(zero, "x", 0) == 1.0);
  CHECK(marginal_pmf(zero, "x", 3) == 0.0);

  CHECK_THROWS_AS(marginal_pmf(spec, "z", 0), LabelNotFound);

  // truncated coordinate sums of the joint pmf reproduce the marginal law
  const auto box = truncation_box(spec.intensities, 1e-10);
  for (std::int64_t nx = 0; nx <= 4; ++nx) {
    KahanSum row;
    for (std::int64_t ny = 0; ny <= box[1]; ++ny) row.add(pmf(spec, CountVector({nx, ny})));
    CHECK(row.value() == doctest::Approx(marginal_pmf(spec, "x", nx)).epsilon(1e-9));
  }
}

TEST_CASE("truncated normalization approaches one") {
  const auto spec = desk_spec();
  const auto box = truncation_box(spec.intensities, 1e-12);
  KahanSum total;
  for (std::int64_t nx = 0; nx <= box[0]; ++nx) {
    for (std::int64_t ny = 0; ny <= box[1]; ++ny) {
      total.add(pmf(spec, CountVector({nx, ny})));
    }
  }
  CHECK(total.value() >= 1.0 - 1e-10);
  CHECK(total.value() <= 1.0 + 1e-12);
}

TEST_CASE("moments") {
  const auto spec = desk_spec();
  const auto mean = mean_vector(spec);
  CHECK(mean[0] == 1.25);
  CHECK(mean[1] == 0.75);

  const auto cov = covariance_matrix(spec);
  CHECK(cov.at(0, 0) == 1.25);
  CHECK(cov.at(1, 1) == 0.75);
  CHECK(cov.at(0, 1) == 0.25);  // N=2: lambda_xy = lambda(xy)
  CHECK(cov.at(1, 0) == 0.25);

  const PoissonMvSpec singles(PoissonIntensities(EventSet({"x", "y"}), {1.0, 2.0, 0.0}));
  CHECK(covariance_matrix(singles).at(0, 1) == 0.0);

  const PoissonMvSpec zero(PoissonIntensities(EventSet({"x", "y"}), {0.0, 0.0, 0.0}));
  CHECK(mean_vector(zero) == std::vector<double>{0.0, 0.0});

  // truncated-support moment sums
  const auto box = truncation_box(spec.intensities, 1e-13);
  KahanSum ex, ey, exx, exy;
  for (std::int64_t nx = 0; nx <= box[0]; ++nx) {
    for (std::int64_t ny = 0; ny <= box[1]; ++ny) {
      const double p = pmf(spec, CountVector({nx, ny}));
      ex.add(p * static_cast<double>(nx));
      ey.add(p * static_cast<double>(ny));
      exx.add(p * static_cast<double>(nx * nx));
      exy.add(p * static_cast<double>(nx * ny));
    }
  }
  CHECK(ex.value() == doctest::Approx(mean[0]).epsilon(1e-8));
  CHECK(ey.value() == doctest::Approx(mean[1]).epsilon(1e-8));
  CHECK(exx.value() - ex.value() * ex.value() == doctest::Approx(cov.at(0, 0)).epsilon(1e-8));
  CHECK(exy.value() - ex.value() * ey.value() == doctest::Approx(cov.at(0, 1)).epsilon(1e-8));
}

TEST_CASE("poisson approximation of the binomial") {
  // zero vector: single all-zero solution
  const BinomialMvSpec desk_binomial(
      EventologicalDistribution(EventSet({"x", "y"}), {0.4, 0.2, 0.3, 0.1}), 3);
  CHECK(approximate_binomial_pmf(desk_binomial, CountVector({0, 0})) ==
        doctest::Approx(std::exp(-3.0 * 0.6)).epsilon(1e-14));

  // when the cap is slack for every solution the approximation IS the
  // Poisson pmf with lambda(X) = n p(X)
  const std::int64_t n = 1000;
  std::vector<double> p = {1.0 - 1.75 / n, 1.0 / n, 0.5 / n, 0.25 / n};
  const BinomialMvSpec large(
      EventologicalDistribution(EventSet({"x", "y"}), std::move(p), true), n);
  const auto poisson_spec = desk_spec();
  for (std::int64_t nx = 0; nx <= 4; ++nx) {
    for (std::int64_t ny = 0; ny <= 4; ++ny) {
      const CountVector at({nx, ny});
      CHECK(approximate_binomial_pmf(large, at) ==
            doctest::Approx(pmf(poisson_spec, at)).epsilon(1e-12));
      // ... and close to the exact binomial pmf at large n
      CHECK(std::abs(approximate_binomial_pmf(large, at) - pmf(large, at)) < 1e-2);
    }
  }

  // the cap binds when counts approach n: compare against a capped hand sum
  const BinomialMvSpec tiny(
      EventologicalDistribution(EventSet({"x"}), {0.5, 0.5}), 2);
  // n_x = 2: only solution n({x}) = 2, term (n p)^2/2!, prefactor e^{-n p}
  CHECK(approximate_binomial_pmf(tiny, CountVector({2})) ==
        doctest::Approx(std::exp(-1.0) * 0.5).epsilon(1e-14));
  CHECK(approximate_binomial_pmf(tiny, CountVector({3})) == 0.0);
}

TEST_CASE("convergence report") {
  const auto li = desk_spec().intensities;

  SUBCASE("zero intensities give zero deviation") {
    const PoissonIntensities zero(EventSet({"x", "y"}), {0.0, 0.0, 0.0});
    const std::int64_t trials[] = {10, 100};
    for (const auto& row : convergence_report(zero, trials, 3)) {
      CHECK(row.sup_deviation == 0.0);
    }
  }

  SUBCASE("univariate classical bound") {
    const PoissonIntensities one(EventSet({"x"}), {1.0});
    const std::int64_t trials[] = {10000};
    const auto rows = convergence_report(one, trials, 10);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sup_deviation < 1e-3);
  }

  SUBCASE("desk case decreases strictly") {
    const std::int64_t trials[] = {10, 100, 1000};
    const auto rows = convergence_report(li, trials, 6);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].trials == 10);
    CHECK(rows[2].trials == 1000);
    CHECK(rows[1].sup_deviation < rows[0].sup_deviation);
    CHECK(rows[2].sup_deviation < rows[1].sup_deviation);
  }

  SUBCASE("rows come back sorted regardless of input order") {
    const std::int64_t trials[] = {100, 10};
    const auto rows = convergence_report(li, trials, 2);
    CHECK(rows[0].trials == 10);
    CHECK(rows[1].trials == 100);
  }

  SUBCASE("infeasible trial counts are reported") {
    const std::int64_t trials[] = {1};
    CHECK_THROWS_AS(convergence_report(li, trials, 2), InfeasibleTrialCountError);
    try {
      convergence_report(li, trials, 2);
    } catch (const InfeasibleTrialCountError& e) {
      CHECK(e.trials() == 1);
    }
  }
}

TEST_CASE("convolution oracle guard fails loudly") {
  CHECK_THROWS_AS(oracle::brute_poisson_pmf(desk_spec(), CountVector({9, 0})),
                  oracle::TooLargeError);
}

TEST_CASE("theorem property holds for randomized intensities") {
  // sup-box deviation at n=1000 sits below the deviation at n=10 whenever
  // the total intensity stays modest
  std::mt19937_64 rng(403);
  for (int i = 0; i < 8; ++i) {
    const std::size_t n_events = 1 + i % 2;
    auto li = testgen::random_intensities(rng, n_events, 0.6, 0.1);
    REQUIRE(li.total() <= 2.0);
    const std::int64_t trials[] = {10, 1000};
    const auto rows = convergence_report(li, trials, 4);
    if (rows[0].sup_deviation > 0.0) {
      CHECK(rows[1].sup_deviation < rows[0].sup_deviation);
    }
  }
}

TEST_CASE("truncation box sizes scale with the tail requirement") {
  const auto li = desk_spec().intensities;
  const auto tight = truncation_box(li, 1e-12);
  const auto loose = truncation_box(li, 1e-3);
  REQUIRE(tight.size() == 2);
  CHECK(tight[0] > loose[0]);
  CHECK(tight[0] >= 10);  // lambda_x = 1.25 needs a deep tail at 1e-12
  const PoissonIntensities zero(EventSet({"x"}), {0.0});
  CHECK(truncation_box(zero, 1e-12)[0] == 0);
}

}  // TEST_SUITE

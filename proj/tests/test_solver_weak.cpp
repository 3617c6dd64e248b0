#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "specshare/feasibility.hpp"
#include "specshare/solver_weak.hpp"

using namespace specshare;

TEST_CASE("optimal_powers_given_times examples") {
  const std::vector<double> th = {2, 3};
  CHECK(optimal_powers_given_times(th, std::vector<double>{1, 2}) == std::vector<double>{2, 5});
  CHECK(optimal_powers_given_times(th, std::vector<double>{0, 0}) == std::vector<double>{0, 0});
  CHECK(optimal_powers_given_times(std::vector<double>{1, 2, 4}, std::vector<double>{1, 1, 2}) ==
        std::vector<double>{1, 1, 5});
  CHECK_THROWS_AS(optimal_powers_given_times(th, std::vector<double>{2, 1}), InvalidInput);
}

TEST_CASE("complete information closed form") {
  for (Count n : {1u, 2u, 5u}) {
    const WeakScenario s{TypeSpace::with_counts({0.5, 1.0}, {3, n}), {0.0}, {}};
    const auto r = solve_complete(s);
    const double t = (std::numbers::e - 1.0) / n;
    CHECK(std::abs(r.contract[1].time - t) < 1e-9);
    CHECK(std::abs(r.contract[1].power - t) < 1e-9);
    CHECK(std::abs(r.pu_value - 0.5 / std::numbers::e) < 1e-12);
    CHECK(r.contract[0].is_null());
    CHECK(r.decision == Decision::relay);
  }
}

TEST_CASE("no relay region") {
  const WeakScenario s{TypeSpace::with_counts({1.0, 4.0}, {1, 1}), {10.0}, {}};
  const auto r = solve_complete(s);
  CHECK(r.decision == Decision::direct_only);
  CHECK(r.effective_value(s.pu) == 10.0);
}

TEST_CASE("doubling the top count halves its time and keeps the value") {
  const auto a = solve_complete({TypeSpace::with_counts({2.0, 6.0}, {1, 3}), {0.8}, {}});
  const auto b = solve_complete({TypeSpace::with_counts({2.0, 6.0}, {1, 6}), {0.8}, {}});
  CHECK(b.contract[1].time == doctest::Approx(a.contract[1].time / 2).epsilon(1e-12));
  CHECK(b.pu_value == a.pu_value);
}

TEST_CASE("only the top type is served and weak = complete") {
  const WeakScenario s{TypeSpace::with_counts({4.0, 10.0}, {1, 1}), {0.0}, {}};
  const auto w = solve_weak(s);
  CHECK(w.contract[0].is_null());
  CHECK(w.contract[1].time > 0.0);
  CHECK(std::abs(w.pu_value - solve_complete(s).pu_value) < 1e-9);
  CHECK(feasible_bruteforce(w.contract, s.types.thetas()).feasible);
}

TEST_CASE("weak solver properties on random scenarios") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> rd(0.0, 3.0);
  std::uniform_int_distribution<Count> cnt(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t k = 1 + trial % 4;
    const auto thetas = oracle::increasing_thetas(rng, k, 0.5, 25.0);
    std::vector<Count> counts(k);
    for (auto& c : counts) c = cnt(rng);
    const WeakScenario s{TypeSpace::with_counts(thetas, counts),
                         {rd(rng), 1.0, trial % 2 ? LogBase::base2 : LogBase::natural},
                         {}};
    const auto w = solve_weak(s);
    const auto c = solve_complete(s);
    CHECK(std::abs(w.pu_value - c.pu_value) < 1e-9);
    CHECK(feasible_bruteforce(w.contract, thetas).feasible);
    // Binding IR for the top type, zero items below it.
    CHECK(std::abs(su_payoff(thetas.back(), c.contract[k - 1])) < 1e-12);
    for (std::size_t j = 0; j + 1 < k; ++j) {
      CHECK(w.contract[j].is_null());
      CHECK(c.contract[j].is_null());
    }
    // Every type takes its own item, judged by content.
    for (std::size_t j = 0; j < k; ++j) {
      const auto pick = best_response(thetas[j], w.contract);
      const ContractItem got = pick ? w.contract[*pick] : ContractItem{};
      CHECK(got == w.contract[j]);
    }
  }
}

TEST_CASE("lowest powers dominate any feasible alternative") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = 2 + trial % 3;
    const auto thetas = oracle::increasing_thetas(rng, k, 0.5, 10.0);
    const auto t = oracle::monotone_times(rng, k);
    const auto best = optimal_powers_given_times(thetas, t);
    for (int s = 0; s < 200; ++s) {
      // Sample powers inside the adjacent bounds.
      std::vector<double> p(k);
      p[0] = thetas[0] * t[0] * u(rng);
      for (std::size_t j = 1; j < k; ++j) {
        const double lo = p[j - 1] + thetas[j - 1] * (t[j] - t[j - 1]);
        const double hi = p[j - 1] + thetas[j] * (t[j] - t[j - 1]);
        p[j] = lo + (hi - lo) * u(rng);
      }
      REQUIRE(oracle::feasible(p, t, thetas));
      for (std::size_t j = 0; j < k; ++j) CHECK(p[j] <= best[j] + 1e-12);
    }
  }
}

TEST_CASE("lowest powers are the unique maximizer of total power") {
  // Exhaustive search over a power grid for a small instance.
  const std::vector<double> th = {1.0, 2.0, 4.0};
  const std::vector<double> t = {0.5, 0.5, 1.5};
  const auto best = optimal_powers_given_times(th, t);
  const double step = 0.125;
  double top = -1.0;
  std::vector<double> arg;
  int ties = 0;
  for (double a = 0; a <= 8; a += step)
    for (double b = 0; b <= 8; b += step)
      for (double c = 0; c <= 8; c += step) {
        const std::vector<double> p = {a, b, c};
        if (!oracle::feasible(p, t, th, 1e-12)) continue;
        const double sum = a + 2 * b + 3 * c;
        if (sum > top + 1e-12) {
          top = sum;
          arg = p;
          ties = 1;
        } else if (std::abs(sum - top) <= 1e-12) {
          ++ties;
        }
      }
  CHECK(ties == 1);
  CHECK(arg == best);
}

TEST_CASE("weak scenario validation") {
  CHECK_THROWS_AS(solve_weak({TypeSpace::with_probs({1, 2}, {0.5, 0.5}, 2), {0.0}, {}}),
                  InvalidInput);
  CHECK_THROWS_AS(solve_weak({TypeSpace::with_counts({1, 2}, {1, 0}), {0.0}, {}}), InvalidInput);
}

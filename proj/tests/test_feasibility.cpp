#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "specshare/feasibility.hpp"

using namespace specshare;

namespace {

const std::vector<double> th23 = {2, 3};

bool has(const FeasibilityVerdict& v, ViolationKind kind, std::size_t k) {
  for (const auto& x : v.violations)
    if (x.kind == kind && x.k == k) return true;
  return false;
}

}  // namespace

TEST_CASE("check_ir") {
  CHECK(check_ir(Contract({{2, 1}}), std::vector<double>{2}).feasible);
  const auto v = check_ir(Contract({{3, 1}}), std::vector<double>{2});
  REQUIRE_FALSE(v.feasible);
  CHECK(v.violations[0].to_string() == "IR(1)");
  CHECK(v.violations[0].magnitude == doctest::Approx(1.0));
  CHECK(check_ir(Contract::null(2), std::vector<double>{1, 2}).feasible);
}

TEST_CASE("check_ic") {
  CHECK(check_ic(Contract({{2, 1}, {5, 2}}), th23).feasible);
  CHECK(check_ic(Contract({{2, 1}, {4, 2}}), th23).feasible);  // type 1 indifferent
  const auto v = check_ic(Contract({{2, 1}, {3, 2}}), th23);
  REQUIRE_FALSE(v.feasible);
  CHECK(v.violations[0].to_string() == "IC(1,2)");
  CHECK(check_ic(Contract({{7, 1}}), std::vector<double>{2}).feasible);
}

TEST_CASE("feasible_bruteforce") {
  CHECK(feasible_bruteforce(Contract({{2, 1}, {5, 2}}), th23).feasible);
  CHECK_THROWS_AS(feasible_bruteforce(Contract({{2, 1}, {5, 2}}), std::vector<double>{3, 2}),
                  InvalidInput);
  CHECK_THROWS_AS(feasible_bruteforce(Contract({{2, 1}}), th23), InvalidInput);
  CHECK(feasible_bruteforce(Contract::null(4), std::vector<double>{1, 2, 3, 4}).feasible);
}

TEST_CASE("feasible_by_conditions") {
  CHECK(feasible_by_conditions(Contract({{2, 1}, {5, 2}}), th23).feasible);
  const auto a = feasible_by_conditions(Contract({{2, 2}, {5, 1}}), th23);
  CHECK_FALSE(a.feasible);
  CHECK(has(a, ViolationKind::monotone, 1));
  const auto c = feasible_by_conditions(Contract({{2, 1}, {6, 2}}), th23);
  CHECK_FALSE(c.feasible);
  CHECK(has(c, ViolationKind::power_bounds, 1));
  const auto b = feasible_by_conditions(Contract({{3, 1}, {6, 2}}), th23);
  CHECK(has(b, ViolationKind::lowest_ir, 0));
}

TEST_CASE("check_necessary_props") {
  CHECK(check_necessary_props(Contract({{2, 1}, {5, 2}}), th23).empty());
  const auto flags = check_necessary_props(Contract({{5, 1}, {2, 2}}), th23);
  REQUIRE_FALSE(flags.empty());
  bool order_flag = false;
  for (const auto& f : flags) order_flag = order_flag || f.kind == NecessaryFlagKind::power_time_order;
  CHECK(order_flag);
  CHECK(check_necessary_props(Contract({{2, 1}, {2, 1}}), th23).empty());
}

TEST_CASE("the two checkers agree with each other and with the oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> kdist(1, 5);
  std::bernoulli_distribution boundary(0.5), nudge(0.3);
  int feasible_count = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t k = kdist(rng);
    const auto thetas = oracle::increasing_thetas(rng, k, 0.5, 10.0);
    std::vector<double> p(k), t(k);
    if (boundary(rng)) {
      t = oracle::monotone_times(rng, k, 3.0);
      p = oracle::lowest_powers(thetas, t);
      if (nudge(rng)) p[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)] += u(rng) * 0.2 - 0.1;
      for (auto& x : p) x = std::max(0.0, x);
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        p[i] = u(rng);
        t[i] = u(rng);
      }
    }
    const auto c = oracle::make_contract(p, t);
    const bool brute = feasible_bruteforce(c, thetas).feasible;
    CHECK(brute == feasible_by_conditions(c, thetas).feasible);
    CHECK(brute == oracle::feasible(p, t, thetas));
    if (brute) {
      ++feasible_count;
      CHECK(check_necessary_props(c, thetas).empty());
    }
  }
  CHECK(feasible_count > 300);
}

TEST_CASE("lowest-power construction is always feasible") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 1 + trial % 5;
    const auto thetas = oracle::increasing_thetas(rng, k);
    const auto t = oracle::monotone_times(rng, k);
    const auto c = oracle::make_contract(oracle::lowest_powers(thetas, t), t);
    CHECK(feasible_by_conditions(c, thetas).feasible);
    CHECK(feasible_bruteforce(c, thetas).feasible);
  }
}

TEST_CASE("null contract is feasible for any types") {
  std::mt19937_64 rng(1);
  for (std::size_t k = 1; k <= 6; ++k) {
    const auto thetas = oracle::increasing_thetas(rng, k);
    CHECK(feasible_by_conditions(Contract::null(k), thetas).feasible);
    CHECK(feasible_bruteforce(Contract::null(k), thetas).feasible);
  }
}

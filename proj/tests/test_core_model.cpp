#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "specshare/model.hpp"

using namespace specshare;

TEST_CASE("su_type_from_profile") {
  CHECK(su_type_from_profile({1.0, 2.0, 1.0, 1.0}) == doctest::Approx(2.0));
  CHECK(su_type_from_profile({0.5, 2.0, 0.0, 1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(su_type_from_profile({1.0, 1.0, 1.0, 1.0}), InvalidInput);
  CHECK_THROWS_AS(su_type_from_profile({0.0, 2.0, 1.0, 1.0}), InvalidInput);
}

TEST_CASE("relay_rate") {
  CHECK(relay_rate(0.0, {1.0}) == 0.5);
  CHECK(relay_rate(std::numbers::e - 1.0, {0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(relay_rate(3.0, {0.0}) == doctest::Approx(0.5 * std::log(4.0)));
  CHECK(relay_rate(3.0, {0.0, 1.0, LogBase::base2}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(relay_rate(-1.0, {0.0}), InvalidInput);
}

TEST_CASE("pu_utility examples") {
  const unsigned one[] = {1};
  CHECK(pu_utility(Contract({{3, 1}}), one, {0.0}) == doctest::Approx(std::log(4.0) / 4));
  const unsigned five[] = {5};
  CHECK(pu_utility(Contract({{0, 0}}), five, {1.0}) == 0.5);
  const unsigned ones[] = {1, 1};
  CHECK(pu_utility(Contract({{2, 1}, {5, 2}}), ones, {0.0}) ==
        doctest::Approx(0.5 * std::log(8.0) / 4));
  const unsigned zero[] = {0, 0};
  CHECK(pu_utility(Contract({{2, 1}, {5, 2}}), zero, {2.5}) == 1.25);
}

TEST_CASE("pu_utility is increasing in powers and decreasing in times") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ContractItem> items(3);
    for (auto& it : items) it = {u(rng), u(rng)};
    const unsigned counts[] = {1, 2, 3};
    const PUParams pu{u(rng)};
    const double base = pu_utility(Contract(items), counts, pu);
    for (std::size_t k = 0; k < 3; ++k) {
      auto more_power = items;
      more_power[k].power += 0.1;
      CHECK(pu_utility(Contract(more_power), counts, pu) > base);
      auto more_time = items;
      more_time[k].time += 0.1;
      CHECK(pu_utility(Contract(more_time), counts, pu) < base);
    }
  }
}

TEST_CASE("su payoffs") {
  const SUProfile a{1.0, 2.0, 1.0, 1.0};
  CHECK(su_payoff_raw(a, {2, 1}) == doctest::Approx(0.0));
  CHECK(su_payoff_raw(a, {0, 0}) == 0.0);
  CHECK(su_payoff_raw({1.0, 2.0, 0.0, 1.0}, {1, 1}) == doctest::Approx(1.5));
  CHECK(su_payoff(2.0, {2, 1}) == 0.0);
  CHECK(su_payoff(3.0, {5, 2}) == 1.0);
  CHECK(su_payoff(su_type_from_profile(a), {2, 1}) == doctest::Approx(2 * su_payoff_raw(a, {2, 1})));
}

TEST_CASE("normalized payoff is the raw payoff scaled by 2h/C") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    SUProfile p{u(rng), u(rng), 0.0, u(rng)};
    p.own_power = 0.18 * u(rng) * p.own_rate / p.power_cost;
    const ContractItem item{u(rng), u(rng)};
    const double lhs = su_payoff(su_type_from_profile(p), item);
    const double rhs = 2 * p.relay_gain / p.power_cost * su_payoff_raw(p, item);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("best_response examples") {
  const Contract c({{2, 1}, {5, 2}});
  CHECK(best_response(3.0, c) == std::optional<std::size_t>(1));
  CHECK(best_response(2.0, c) == std::optional<std::size_t>(0));
  CHECK(best_response(1.0, c) == std::nullopt);
}

TEST_CASE("best_response on raw payoffs agrees with the normalized route") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    SUProfile p{u(rng), u(rng), 0.0, u(rng)};
    p.own_power = 0.3 * u(rng) * p.own_rate / p.power_cost;
    const double theta = su_type_from_profile(p);
    std::vector<ContractItem> items(3);
    for (auto& it : items) it = {u(rng) * theta, u(rng)};
    const Contract c(items);
    CHECK(best_response_raw(p, c) == best_response(theta, c));
  }
}

TEST_CASE("best_response is invariant under joint scaling") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double theta = u(rng) + 0.1;
    std::vector<ContractItem> items(4), scaled(4);
    for (std::size_t k = 0; k < 4; ++k) {
      items[k] = {u(rng), u(rng)};
      scaled[k] = {items[k].power * 4.0, items[k].time};  // payoffs scale by 4
    }
    CHECK(best_response(theta, Contract(items)) == best_response(4.0 * theta, Contract(scaled)));
  }
}

TEST_CASE("type space and contract validation") {
  CHECK_THROWS_AS(TypeSpace::with_counts({2, 2}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(TypeSpace::with_counts({3, 2}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(TypeSpace::with_counts({1, 2}, {1}), InvalidInput);
  CHECK_THROWS_AS(TypeSpace::with_probs({1, 2}, {0.5, 0.6}, 3), InvalidInput);
  CHECK_THROWS_AS(TypeSpace::with_probs({1, 2}, {0.5, 0.5}, 0), InvalidInput);
  CHECK_THROWS_AS(TypeSpace::with_counts({0, 2}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(Contract({{-1, 0}}), InvalidInput);
  CHECK_THROWS_AS(Contract({{1, NAN}}), InvalidInput);
  CHECK(Contract::null(3).size() == 3);
  CHECK(PUParams::from_snr(3.0, 1.0, LogBase::base2).r_dir == doctest::Approx(2.0));
  CHECK(parse_log_base("base2") == LogBase::base2);
  CHECK_THROWS_AS(parse_log_base("ten"), InvalidInput);
}

#include "specshare/solver_strong.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "specshare/kernels.hpp"
#include "specshare/solver_weak.hpp"

namespace specshare {

void StrongScenario::validate() const {
  if (!types.has_probs()) throw InvalidInput("strong scenario needs type probabilities");
  if (types.population() < 1) throw InvalidInput("strong scenario needs N >= 1");
  pu.validate();
  grid.validate();
  if (exhaustive.points_per_dim < 2) throw InvalidInput("exhaustive grid needs >= 2 points");
}

std::uint64_t composition_count(Count population, std::size_t types) {
  if (types == 0) return 0;
  unsigned __int128 result = 1;
  for (std::size_t i = 1; i < types; ++i) {
    result = result * (population + i) / i;
    if (result > std::numeric_limits<std::uint64_t>::max())
      return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(result);
}

void for_each_composition(Count population, std::size_t types,
                          const std::function<void(const Composition&)>& visit) {
  if (types == 0) return;
  Composition counts(types, 0);
  auto recurse = [&](auto&& self, std::size_t k, Count remaining) -> void {
    if (k + 1 == types) {
      counts[k] = remaining;
      visit(counts);
      return;
    }
    for (Count n = 0; n <= remaining; ++n) {
      counts[k] = n;
      self(self, k + 1, remaining - n);
    }
  };
  recurse(recurse, 0, population);
}

namespace {

// Multinomial coefficient when it fits in 64 bits.
std::optional<std::uint64_t> exact_multinomial(std::span<const Count> counts) {
  unsigned __int128 coef = 1;
  std::uint64_t prefix = 0;
  for (Count n : counts) {
    // coef *= C(prefix + n, n), built incrementally so every step is exact.
    for (Count i = 1; i <= n; ++i) {
      coef = coef * (prefix + i) / i;
      if (coef > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
    }
    prefix += n;
  }
  return static_cast<std::uint64_t>(coef);
}

}  // namespace

double multinomial_pmf(std::span<const Count> composition, std::span<const double> probs) {
  if (composition.size() != probs.size())
    throw InvalidInput("composition and probabilities must have the same length");
  for (double q : probs)
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("probabilities must lie in [0, 1]");

  if (const auto coef = exact_multinomial(composition)) {
    double p = static_cast<double>(*coef);
    for (std::size_t k = 0; k < probs.size(); ++k) p *= std::pow(probs[k], composition[k]);
    return p;
  }
  double log_p = 0.0;
  Count total = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const Count n = composition[k];
    total += n;
    log_p -= std::lgamma(n + 1.0);
    if (n > 0) {
      if (probs[k] == 0.0) return 0.0;
      log_p += n * std::log(probs[k]);
    }
  }
  log_p += std::lgamma(total + 1.0);
  return std::exp(log_p);
}

double binomial_pmf(Count m, Count n, double q) {
  if (m > n) return 0.0;
  const Count parts[] = {m, n - m};
  const double probs[] = {q, 1.0 - q};
  return multinomial_pmf(parts, probs);
}

namespace {

void check_contract_size(const Contract& contract, const StrongScenario& scenario) {
  if (contract.size() != scenario.types.size())
    throw InvalidInput("contract must have one item per type");
}

void check_composition_cap(const StrongScenario& scenario) {
  const auto count = composition_count(scenario.types.population(), scenario.types.size());
  if (count > scenario.composition_cap)
    throw InvalidInput("scenario has " + std::to_string(count) +
                       " compositions, above the cap of " +
                       std::to_string(scenario.composition_cap));
}

struct WeightedComposition {
  Composition counts;
  double probability;
};

std::vector<WeightedComposition> weighted_compositions(const StrongScenario& scenario) {
  check_composition_cap(scenario);
  std::vector<WeightedComposition> out;
  for_each_composition(scenario.types.population(), scenario.types.size(),
                       [&](const Composition& c) {
                         out.push_back({c, multinomial_pmf(c, scenario.types.probs())});
                       });
  return out;
}

double tail_probability(std::span<const double> probs, std::size_t threshold) {
  if (threshold == 0) return 1.0;
  double tail = 0.0;
  for (std::size_t j = threshold; j < probs.size(); ++j) tail += probs[j];
  return std::min(tail, 1.0);
}

}  // namespace

double expected_utility(const Contract& contract, const StrongScenario& scenario) {
  scenario.validate();
  check_contract_size(contract, scenario);
  check_composition_cap(scenario);
  double sum = 0.0;
  for_each_composition(scenario.types.population(), scenario.types.size(),
                       [&](const Composition& c) {
                         sum += multinomial_pmf(c, scenario.types.probs()) *
                                pu_utility(contract, c, scenario.pu);
                       });
  return sum;
}

Contract candidate_contract(const CandidateContract& candidate, std::span<const double> thetas) {
  validate_thetas(thetas);
  if (candidate.threshold >= thetas.size()) throw InvalidInput("threshold out of range");
  std::vector<ContractItem> items(thetas.size());
  const ContractItem offer{thetas[candidate.threshold] * candidate.time, candidate.time};
  for (std::size_t j = candidate.threshold; j < thetas.size(); ++j) items[j] = offer;
  return Contract(std::move(items));
}

RelayMixture candidate_objective(std::size_t threshold, const StrongScenario& scenario) {
  const auto& types = scenario.types;
  if (threshold >= types.size()) throw InvalidInput("threshold out of range");
  const Count n = types.population();
  const double q = tail_probability(types.probs(), threshold);
  const double slope = types.theta(threshold) / scenario.pu.n0;
  std::vector<RelayMixture::Term> terms;
  terms.reserve(n + 1);
  for (Count m = 0; m <= n; ++m) terms.push_back({binomial_pmf(m, n, q), m * slope, double(m)});
  return RelayMixture(scenario.pu, std::move(terms));
}

namespace {

struct GridSearchResult {
  std::vector<std::size_t> best_index;
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t tuples = 0;
};

// Nondecreasing index tuples over [0, points), visited lexicographically.
GridSearchResult search_monotone_grid(const StrongScenario& scenario,
                                      const std::vector<WeightedComposition>& comps,
                                      double t_max) {
  const std::size_t k = scenario.types.size();
  const std::size_t g = scenario.exhaustive.points_per_dim;
  const auto thetas = scenario.types.thetas();
  const double step = t_max / static_cast<double>(g - 1);
  constexpr std::size_t kChunk = 4096;

  const kernels::PairTerm base{0.5 * scenario.pu.r_dir, 0.5 * scenario.pu.log_scale(),
                               1.0 / scenario.pu.n0, 1.0};

  std::vector<std::size_t> idx(k, 0);
  std::vector<std::vector<std::size_t>> chunk_idx;
  std::vector<double> times(k * kChunk), powers(k * kChunk);
  std::vector<double> total_p(kChunk), total_t(kChunk), value(kChunk);
  GridSearchResult result;

  auto flush = [&](std::size_t n) {
    std::fill_n(value.begin(), n, 0.0);
    for (const auto& wc : comps) {
      if (wc.probability == 0.0) continue;
      std::fill_n(total_p.begin(), n, 0.0);
      std::fill_n(total_t.begin(), n, 0.0);
      for (std::size_t j = 0; j < k; ++j) {
        const double c = wc.counts[j];
        if (c == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) {
          total_p[i] += c * powers[j * kChunk + i];
          total_t[i] += c * times[j * kChunk + i];
        }
      }
      auto term = base;
      term.weight = wc.probability;
      kernels::accumulate_pairs(std::span(total_p).first(n), std::span(total_t).first(n), term,
                                std::span(value).first(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (value[i] > result.best_value) {
        result.best_value = value[i];
        result.best_index = chunk_idx[i];
      }
    }
    chunk_idx.clear();
  };

  for (;;) {
    const std::size_t slot = chunk_idx.size();
    chunk_idx.push_back(idx);
    double prev_t = 0.0;
    double prev_p = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double t = step * static_cast<double>(idx[j]);
      const double p = j == 0 ? thetas[0] * t : prev_p + thetas[j] * (t - prev_t);
      times[j * kChunk + slot] = t;
      powers[j * kChunk + slot] = p;
      prev_t = t;
      prev_p = p;
    }
    ++result.tuples;
    if (chunk_idx.size() == kChunk) flush(kChunk);

    // Advance to the next nondecreasing tuple.
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == g - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[pos - 1];
  }
  if (!chunk_idx.empty()) flush(chunk_idx.size());
  return result;
}

}  // namespace

SolveReport exhaustive_search(const StrongScenario& scenario) {
  scenario.validate();
  const auto& types = scenario.types;
  const std::size_t k = types.size();
  const auto& grid = scenario.exhaustive;
  const auto comps = weighted_compositions(scenario);

  const std::uint64_t tuples = composition_count(
      static_cast<Count>(grid.points_per_dim - 1), k + 1);  // C(G + K - 1, K)
  const unsigned __int128 evaluations = static_cast<unsigned __int128>(tuples) * comps.size();
  if (evaluations > grid.max_evaluations)
    throw InvalidInput("exhaustive grid needs " + std::to_string(tuples) + " tuples x " +
                       std::to_string(comps.size()) +
                       " compositions, above the evaluation cap; reduce points_per_dim");

  const bool automatic = !(grid.t_max > 0.0);
  double t_max = grid.t_max;
  if (automatic) {
    double widest = 0.0;
    for (double theta : types.thetas())
      widest = std::max(widest, maximize_scalar({theta, scenario.pu, scenario.grid}).argmax);
    t_max = widest > 0.0 ? 2.0 * widest : 1.0;
  }

  GridSearchResult best;
  for (;;) {
    best = search_monotone_grid(scenario, comps, t_max);
    const bool at_edge = best.best_index.back() == grid.points_per_dim - 1;
    if (!automatic || !at_edge || 2.0 * t_max > grid.t_max_cap) break;
    t_max *= 2.0;
  }

  const double step = t_max / static_cast<double>(grid.points_per_dim - 1);
  std::vector<double> times(k);
  for (std::size_t j = 0; j < k; ++j) times[j] = step * static_cast<double>(best.best_index[j]);

  SolveReport report;
  report.contract = contract_from_times(types.thetas(), times);
  // Re-evaluate on the exact composition sum so the reported value does not
  // depend on the kernel backend.
  report.pu_value = expected_utility(report.contract, scenario);
  report.decision = relay_or_direct(report.pu_value, scenario.pu);
  report.diagnostics["grid_points_per_dim"] = static_cast<double>(grid.points_per_dim);
  report.diagnostics["grid_t_max"] = t_max;
  report.diagnostics["grid_step"] = step;
  report.diagnostics["grid_tuples"] = static_cast<double>(best.tuples);
  report.diagnostics["hit_upper_bound"] =
      best.best_index.back() == grid.points_per_dim - 1 ? 1.0 : 0.0;
  return report;
}

DecomposeResult decompose_and_compare(const StrongScenario& scenario) {
  scenario.validate();
  const auto& types = scenario.types;
  DecomposeResult out;
  for (std::size_t k = 0; k < types.size(); ++k) {
    const auto opt = maximize_on_grid(candidate_objective(k, scenario), scenario.grid);
    out.candidate_values.push_back(opt.value);
    out.candidate_times.push_back(opt.argmax);
    if (out.candidate_values[k] > out.candidate_values[out.chosen]) out.chosen = k;
  }
  auto& report = out.report;
  report.contract = candidate_contract({out.chosen, out.candidate_times[out.chosen]},
                                       types.thetas());
  report.pu_value = out.candidate_values[out.chosen];
  report.decision = relay_or_direct(report.pu_value, scenario.pu);
  for (std::size_t k = 0; k < types.size(); ++k) {
    const auto tag = "candidate_" + std::to_string(k + 1);
    report.diagnostics[tag + "_value"] = out.candidate_values[k];
    report.diagnostics[tag + "_time"] = out.candidate_times[k];
  }
  report.diagnostics["chosen_threshold"] = static_cast<double>(out.chosen + 1);
  return out;
}

BenchmarkResult complete_info_benchmark(const StrongScenario& scenario) {
  scenario.validate();
  const auto& types = scenario.types;
  std::vector<double> optimum(types.size());
  for (std::size_t k = 0; k < types.size(); ++k)
    optimum[k] = maximize_scalar({types.theta(k), scenario.pu, scenario.grid}).value;

  BenchmarkResult out;
  for (auto& wc : weighted_compositions(scenario)) {
    std::size_t top = types.size() - 1;
    while (wc.counts[top] == 0) --top;  // N >= 1, so some count is positive
    out.average += wc.probability * optimum[top];
    out.outcomes.push_back({std::move(wc.counts), wc.probability, top, optimum[top]});
  }
  return out;
}

double realized_utility_under_strong_contract(const Contract& contract,
                                              std::span<const Count> composition,
                                              const PUParams& pu) {
  return pu_utility(contract, composition, pu);
}

}  // namespace specshare

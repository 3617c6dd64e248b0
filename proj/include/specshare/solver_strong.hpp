#pragma once

// Strong incomplete information: the PU knows only the population size N and
// the type distribution q, so it maximizes expected utility over the
// multinomial distribution of realized type counts.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "specshare/model.hpp"
#include "specshare/scalar_opt.hpp"

namespace specshare {

struct ExhaustiveGrid {
  std::size_t points_per_dim = 200;
  /// Upper end of every time coordinate; <= 0 picks 2 * max_k T*(theta_k) and
  /// doubles it while the optimum touches the boundary.
  double t_max = 0.0;
  double t_max_cap = 1600.0;
  /// Upper bound on monotone grid tuples times compositions.
  std::uint64_t max_evaluations = 2'000'000'000ULL;
};

struct StrongScenario {
  TypeSpace types;  ///< must carry probs and a population
  PUParams pu;
  GridOptions grid;             ///< scalar searches (decompose-and-compare)
  ExhaustiveGrid exhaustive;    ///< K-dimensional baseline
  std::uint64_t composition_cap = 10'000'000ULL;

  void validate() const;
};

/// Realized type counts (n_1, ..., n_K), summing to N.
using Composition = std::vector<Count>;

/// C(N + K - 1, K - 1), saturating at UINT64_MAX.
std::uint64_t composition_count(Count population, std::size_t types);

/// Visits every composition of N into K parts in lexicographic order
/// (n_1 ascending outermost, n_K taking the remainder).
void for_each_composition(Count population, std::size_t types,
                          const std::function<void(const Composition&)>& visit);

/// N! / prod n_k! * prod q_k^{n_k}
double multinomial_pmf(std::span<const Count> composition, std::span<const double> probs);

/// Binomial(m; n, q)
double binomial_pmf(Count m, Count n, double q);

/// Sum over all compositions of pmf * pu_utility. Throws if the number of
/// compositions exceeds scenario.composition_cap.
double expected_utility(const Contract& contract, const StrongScenario& scenario);

/// Threshold candidate: item (theta_k t, t) for every type >= k, (0,0) below.
struct CandidateContract {
  std::size_t threshold = 0;  ///< 0-based k
  double time = 0.0;
};

Contract candidate_contract(const CandidateContract& candidate, std::span<const double> thetas);

/// Expected utility of a threshold candidate as a function of its time: the
/// participating count is Binomial(N, sum_{j >= k} q_j).
RelayMixture candidate_objective(std::size_t threshold, const StrongScenario& scenario);

/// Best monotone time schedule on a uniform grid, powers from
/// optimal_powers_given_times. Diagnostics record the grid used.
SolveReport exhaustive_search(const StrongScenario& scenario);

struct DecomposeResult {
  SolveReport report;
  std::vector<double> candidate_values;  ///< best expected utility per threshold
  std::vector<double> candidate_times;
  std::size_t chosen = 0;
};

/// Optimizes each of the K threshold candidates with the scalar search and
/// keeps the best (lowest threshold on exact ties).
DecomposeResult decompose_and_compare(const StrongScenario& scenario);

struct CompositionOutcome {
  Composition counts;
  double probability = 0.0;
  std::size_t highest_present = 0;  ///< 0-based type index
  double utility = 0.0;             ///< complete-information optimum
};

struct BenchmarkResult {
  std::vector<CompositionOutcome> outcomes;  ///< lexicographic order
  double average = 0.0;
};

/// Complete-information optimum for every realized composition (depends only
/// on the highest type present), and its probability-weighted average.
BenchmarkResult complete_info_benchmark(const StrongScenario& scenario);

/// PU utility once the counts are realized and every SU takes its own item.
double realized_utility_under_strong_contract(const Contract& contract,
                                              std::span<const Count> composition,
                                              const PUParams& pu);

}  // namespace specshare

#pragma once

// Runs the broadcast / select / relay / transmit protocol on a concrete SU
// population: the PU announces a contract, every SU picks its best item (or
// opts out), and the PU's rate follows from the realized choices.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "specshare/model.hpp"

namespace specshare {

/// SplitMix64 step; also used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

struct Member {
  std::size_t type_index = 0;  ///< 0-based, designates contract item
  double theta = 0.0;
  std::optional<SUProfile> profile;  ///< when set, choices use raw payoffs
};

struct Population {
  std::vector<Member> members;
  std::uint64_t seed = 0;

  /// Realized number of members of each of k types.
  std::vector<Count> counts(std::size_t k) const;
};

/// counts[k] members of type k, in type order.
Population population_from_counts(std::span<const double> thetas, std::span<const Count> counts);

/// One member per profile; its type index is the position of its theta in
/// `thetas` (matched within kTolerance).
Population population_from_profiles(std::span<const double> thetas,
                                    std::span<const SUProfile> profiles);

/// types.population() independent draws from types.probs(). Deterministic per
/// seed and identical across platforms.
Population draw_population(const TypeSpace& types, std::uint64_t seed);

struct SuOutcome {
  std::size_t type_index = 0;
  double theta = 0.0;
  std::optional<std::size_t> item;  ///< nullopt = opted out
  double payoff = 0.0;              ///< theta t - p of the chosen item
  /// Chosen item equals the designated one (opting out counts as (0,0)).
  bool truthful = true;
};

struct SimTrace {
  std::vector<SuOutcome> outcomes;
  std::vector<Count> item_counts;  ///< SUs per contract item
  double pu_utility = 0.0;
  std::uint64_t seed = 0;

  std::size_t participants() const;
  std::size_t untruthful() const;
};

SimTrace run_protocol(const Contract& contract, const Population& population, const PUParams& pu);

/// Columns replication, su_index, theta, item_index, payoff, pu_utility.
/// item_index is 1-based; 0 marks opting out.
void write_trace_csv(std::ostream& out, std::span<const SimTrace> traces);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t replications = 0;
};

/// Average realized PU utility of `contract` over fresh populations drawn
/// from `types`, replication r seeded with derive_seed(seed, r).
MonteCarloEstimate monte_carlo_utility(const Contract& contract, const TypeSpace& types,
                                       const PUParams& pu, std::size_t replications,
                                       std::uint64_t seed, unsigned threads = 0);

}  // namespace specshare

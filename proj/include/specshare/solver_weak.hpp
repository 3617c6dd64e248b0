#pragma once

// Optimal contracts when the PU knows every SU's type (complete information)
// or only how many SUs of each type exist (weak incomplete information).
// Both reach the same utility: only the highest type gets a positive item,
// and it is priced so that type earns exactly zero payoff.

#include <span>
#include <vector>

#include "specshare/model.hpp"
#include "specshare/scalar_opt.hpp"

namespace specshare {

struct WeakScenario {
  TypeSpace types;  ///< must carry counts, each >= 1
  PUParams pu;
  GridOptions grid;

  void validate() const;
};

/// Cheapest powers making a monotone time schedule incentive compatible:
/// p_1 = theta_1 t_1 and p_k = p_{k-1} + theta_k (t_k - t_{k-1}).
std::vector<double> optimal_powers_given_times(std::span<const double> thetas,
                                               std::span<const double> times);

/// Pairs the times with optimal_powers_given_times.
Contract contract_from_times(std::span<const double> thetas, std::span<const double> times);

/// Optimizes the total time T = N_K t_K given to the highest type directly.
SolveReport solve_complete(const WeakScenario& scenario);

/// Sequential route: lowest incentive-compatible powers for the schedule (0, ..., 0, t_K), then a
/// search over t_K evaluated through the generic PU utility.
SolveReport solve_weak(const WeakScenario& scenario);

}  // namespace specshare

#pragma once

// Contract feasibility (incentive compatibility + individual rationality).
//
// Two independent routes are provided: a brute-force check of every IR and
// pairwise IC constraint, and the three-condition characterization
// (monotone menu, lowest type's IR, adjacent power bounds). They must agree
// on every input; tests and the CLI's check-feasible command verify that.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specshare/model.hpp"

namespace specshare {

enum class ViolationKind {
  ir,            ///< IR(k): type k's own item pays < 0
  ic,            ///< IC(k,j): type k prefers item j over item k
  monotone,      ///< Monotone(k): p or t decreases from item k-1 to k
  lowest_ir,     ///< LowestIR: theta_1 t_1 < p_1
  power_bounds,  ///< PowerBounds(k): p_k outside the adjacent bounds
};

struct Violation {
  ViolationKind kind;
  std::size_t k = 0;  ///< 0-based item/type index
  std::size_t j = 0;  ///< second index (IC only)
  double magnitude = 0.0;

  std::string to_string() const;  ///< 1-based, e.g. "IC(1,2)"
};

struct FeasibilityVerdict {
  bool feasible = true;
  std::vector<Violation> violations;

  void add(Violation v);
  void merge(const FeasibilityVerdict& other);
};

FeasibilityVerdict check_ir(const Contract& contract, std::span<const double> thetas,
                            double tol = kTolerance);
FeasibilityVerdict check_ic(const Contract& contract, std::span<const double> thetas,
                            double tol = kTolerance);

/// IR for every type, IC for every ordered pair.
FeasibilityVerdict feasible_bruteforce(const Contract& contract, std::span<const double> thetas,
                                       double tol = kTolerance);

/// Monotone menu, theta_1 t_1 >= p_1, and for k >= 2
///   p_{k-1} + theta_{k-1} (t_k - t_{k-1}) <= p_k <= p_{k-1} + theta_k (t_k - t_{k-1}).
FeasibilityVerdict feasible_by_conditions(const Contract& contract,
                                          std::span<const double> thetas,
                                          double tol = kTolerance);

enum class NecessaryFlagKind { power_time_order, equal_items, type_time_order };

struct NecessaryFlag {
  NecessaryFlagKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string to_string() const;
};

/// Diagnostic ordering checks every feasible contract satisfies:
///  - p_i > p_j iff t_i > t_j
///  - p_i = p_j iff t_i = t_j
///  - theta_i > theta_j implies t_i >= t_j
/// Thresholds are derived from the IC inequalities so that any contract
/// passing feasible_bruteforce at the same tolerance raises no flag.
std::vector<NecessaryFlag> check_necessary_props(const Contract& contract,
                                                 std::span<const double> thetas,
                                                 double tol = kTolerance);

}  // namespace specshare

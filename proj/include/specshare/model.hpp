#pragma once

// Domain types and payoff formulas for contract-based cooperative spectrum
// sharing: one primary user (PU) buys relay power from secondary users (SUs)
// by granting them dedicated transmission time.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace specshare {

/// Thrown for inputs that violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when two routes that must agree do not (e.g. the two feasibility
/// checkers disagree). Indicates a bug, not bad input.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Absolute tolerance used for every payoff/constraint comparison.
inline constexpr double kTolerance = 1e-9;

enum class LogBase { natural, base2 };

std::string to_string(LogBase base);
LogBase parse_log_base(const std::string& name);

/// PU-side constants. T0 is normalized to 1 throughout.
struct PUParams {
  double r_dir = 0.0;  ///< direct-transmission rate
  double n0 = 1.0;     ///< noise power
  LogBase log_base = LogBase::natural;

  /// r_dir = log(1 + snr) in the selected base.
  static PUParams from_snr(double snr, double n0 = 1.0, LogBase base = LogBase::natural);

  double log(double x) const;
  /// log(1 + x) evaluated without cancellation for small x.
  double log1p(double x) const;
  /// Multiplier turning a natural log into the selected base.
  double log_scale() const;

  void validate() const;
};

/// Raw private parameters of one SU.
struct SUProfile {
  double relay_gain = 1.0;  ///< h, ST -> PR channel gain
  double own_rate = 1.0;    ///< r_SU
  double own_power = 0.0;   ///< transmit power for its own data
  double power_cost = 1.0;  ///< C, cost per unit power
};

/// theta = 2h (r - C pt) / C. Throws if the SU would not want time at all.
double su_type_from_profile(const SUProfile& profile);

struct ContractItem {
  double power = 0.0;  ///< relay power received at PR
  double time = 0.0;   ///< transmission time granted (fraction of T0)

  bool is_null() const { return power == 0.0 && time == 0.0; }
  friend bool operator==(const ContractItem&, const ContractItem&) = default;
};

/// Ordered menu of K items, item k designed for type k. Components are finite
/// and nonnegative; feasibility is a separate question.
class Contract {
 public:
  Contract() = default;
  explicit Contract(std::vector<ContractItem> items);

  /// K copies of (0,0).
  static Contract null(std::size_t k);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const ContractItem& operator[](std::size_t k) const { return items_[k]; }
  std::span<const ContractItem> items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  std::vector<ContractItem> items_;
};

using Count = unsigned;

/// Throws unless thetas is nonempty, positive, finite and strictly increasing.
void validate_thetas(std::span<const double> thetas);

/// The K type values plus either per-type counts (complete/weak information)
/// or per-type probabilities and a total population (strong information).
class TypeSpace {
 public:
  static TypeSpace with_counts(std::vector<double> thetas, std::vector<Count> counts);
  static TypeSpace with_probs(std::vector<double> thetas, std::vector<double> probs,
                              Count population);

  std::size_t size() const { return thetas_.size(); }
  std::span<const double> thetas() const { return thetas_; }
  double theta(std::size_t k) const { return thetas_[k]; }
  double highest() const { return thetas_.back(); }

  bool has_counts() const { return !counts_.empty(); }
  bool has_probs() const { return !probs_.empty(); }
  std::span<const Count> counts() const { return counts_; }
  std::span<const double> probs() const { return probs_; }
  Count population() const { return population_; }

 private:
  TypeSpace() = default;
  std::vector<double> thetas_;
  std::vector<Count> counts_;
  std::vector<double> probs_;
  Count population_ = 0;
};

enum class Decision { relay, direct_only };
std::string to_string(Decision d);

/// Result of any solver. pu_value is the relay contract's (expected) utility;
/// with Decision::direct_only the PU actually gets R_dir instead.
struct SolveReport {
  Contract contract;
  double pu_value = 0.0;
  Decision decision = Decision::relay;
  std::map<std::string, double> diagnostics;

  double effective_value(const PUParams& pu) const {
    return decision == Decision::relay ? pu_value : pu.r_dir;
  }
};

/// R_dir/2 + (1/2) log(1 + total_power / n0).
double relay_rate(double total_power, const PUParams& pu);

/// PU's time-averaged rate when counts[k] SUs take item k. Zero relaying
/// (all sums zero) yields exactly R_dir/2.
double pu_utility(const Contract& contract, std::span<const Count> counts, const PUParams& pu);

/// t r - (t pt + p / (2h)) C
double su_payoff_raw(const SUProfile& profile, const ContractItem& item);

/// theta t - p; equals su_payoff_raw scaled by 2h/C.
inline double su_payoff(double theta, const ContractItem& item) {
  return theta * item.time - item.power;
}

/// Item an SU of the given type picks, or nullopt for opting out.
///
/// The implicit opt-out item pays 0. Payoffs within kTolerance of the best
/// count as ties and the highest-indexed tied item wins; opting out is chosen
/// only when no item reaches the best payoff.
std::optional<std::size_t> best_response(double theta, const Contract& contract);

/// Same selection rule evaluated on raw (unnormalized) payoffs. The tie
/// tolerance is rescaled by C/(2h) so both routes classify ties identically.
std::optional<std::size_t> best_response_raw(const SUProfile& profile, const Contract& contract);

}  // namespace specshare

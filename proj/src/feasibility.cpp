#include "specshare/feasibility.hpp"

#include <algorithm>
#include <cmath>

namespace specshare {

namespace {

void validate(const Contract& contract, std::span<const double> thetas) {
  validate_thetas(thetas);
  if (contract.size() != thetas.size())
    throw InvalidInput("contract has " + std::to_string(contract.size()) + " items but " +
                       std::to_string(thetas.size()) + " types were given");
}

}  // namespace

std::string Violation::to_string() const {
  const auto idx = std::to_string(k + 1);
  switch (kind) {
    case ViolationKind::ir: return "IR(" + idx + ")";
    case ViolationKind::ic: return "IC(" + idx + "," + std::to_string(j + 1) + ")";
    case ViolationKind::monotone: return "Monotone(" + idx + ")";
    case ViolationKind::lowest_ir: return "LowestIR";
    case ViolationKind::power_bounds: return "PowerBounds(" + idx + ")";
  }
  return "?";
}

void FeasibilityVerdict::add(Violation v) {
  feasible = false;
  violations.push_back(v);
}

void FeasibilityVerdict::merge(const FeasibilityVerdict& other) {
  for (const auto& v : other.violations) add(v);
}

FeasibilityVerdict check_ir(const Contract& c, std::span<const double> thetas, double tol) {
  validate(c, thetas);
  FeasibilityVerdict out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double payoff = su_payoff(thetas[k], c[k]);
    if (payoff < -tol) out.add({ViolationKind::ir, k, k, -payoff});
  }
  return out;
}

FeasibilityVerdict check_ic(const Contract& c, std::span<const double> thetas, double tol) {
  validate(c, thetas);
  FeasibilityVerdict out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double own = su_payoff(thetas[k], c[k]);
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == k) continue;
      const double other = su_payoff(thetas[k], c[j]);
      if (own < other - tol) out.add({ViolationKind::ic, k, j, other - own});
    }
  }
  return out;
}

FeasibilityVerdict feasible_bruteforce(const Contract& c, std::span<const double> thetas,
                                       double tol) {
  // Nonnegativity holds by Contract's construction.
  auto out = check_ir(c, thetas, tol);
  out.merge(check_ic(c, thetas, tol));
  return out;
}

FeasibilityVerdict feasible_by_conditions(const Contract& c, std::span<const double> thetas,
                                          double tol) {
  validate(c, thetas);
  FeasibilityVerdict out;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double drop =
        std::max(c[k - 1].power - c[k].power, c[k - 1].time - c[k].time);
    if (drop > tol) out.add({ViolationKind::monotone, k, k, drop});
  }
  const double lowest = su_payoff(thetas[0], c[0]);
  if (lowest < -tol) out.add({ViolationKind::lowest_ir, 0, 0, -lowest});
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double dt = c[k].time - c[k - 1].time;
    const double lower = c[k - 1].power + thetas[k - 1] * dt;
    const double upper = c[k - 1].power + thetas[k] * dt;
    const double excess = std::max(lower - c[k].power, c[k].power - upper);
    if (excess > tol) out.add({ViolationKind::power_bounds, k, k, excess});
  }
  return out;
}

std::string NecessaryFlag::to_string() const {
  const auto pair = "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
  switch (kind) {
    case NecessaryFlagKind::power_time_order: return "PowerTimeOrder" + pair;
    case NecessaryFlagKind::equal_items: return "EqualItems" + pair;
    case NecessaryFlagKind::type_time_order: return "TypeTimeOrder" + pair;
  }
  return "?";
}

std::vector<NecessaryFlag> check_necessary_props(const Contract& c,
                                                 std::span<const double> thetas, double tol) {
  validate(c, thetas);
  std::vector<NecessaryFlag> flags;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dp = c[i].power - c[j].power;
      const double dt = c[i].time - c[j].time;
      // IC gives theta_j dt - tol <= dp <= theta_i dt + tol.
      const bool power_up_time_not = dp > tol && dt <= 0.0;
      const bool time_up_power_not = thetas[j] * dt > tol && dp <= 0.0;
      if (power_up_time_not || time_up_power_not)
        flags.push_back({NecessaryFlagKind::power_time_order, i, j});
      if (i < j) {
        const double theta_min = std::min(thetas[i], thetas[j]);
        if ((dp == 0.0 && std::abs(dt) * theta_min > tol) ||
            (dt == 0.0 && std::abs(dp) > tol))
          flags.push_back({NecessaryFlagKind::equal_items, i, j});
      }
      // Summing both IC constraints: (theta_i - theta_j)(t_i - t_j) >= -2 tol.
      if (thetas[i] > thetas[j] && (thetas[i] - thetas[j]) * (c[j].time - c[i].time) > 2.0 * tol)
        flags.push_back({NecessaryFlagKind::type_time_order, i, j});
    }
  }
  return flags;
}

}  // namespace specshare

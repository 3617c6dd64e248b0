#include "specshare/solver_weak.hpp"

#include <cmath>

namespace specshare {

void WeakScenario::validate() const {
  if (!types.has_counts()) throw InvalidInput("weak scenario needs per-type counts");
  for (Count n : types.counts())
    if (n < 1) throw InvalidInput("weak scenario needs at least one SU of every type");
  pu.validate();
  grid.validate();
}

std::vector<double> optimal_powers_given_times(std::span<const double> thetas,
                                               std::span<const double> times) {
  validate_thetas(thetas);
  if (times.size() != thetas.size()) throw InvalidInput("need one time per type");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || !std::isfinite(times[k]))
      throw InvalidInput("times must be finite and >= 0");
    if (k > 0 && times[k] < times[k - 1]) throw InvalidInput("times must be nondecreasing");
  }
  std::vector<double> powers(times.size());
  powers[0] = thetas[0] * times[0];
  for (std::size_t k = 1; k < times.size(); ++k)
    powers[k] = powers[k - 1] + thetas[k] * (times[k] - times[k - 1]);
  return powers;
}

Contract contract_from_times(std::span<const double> thetas, std::span<const double> times) {
  const auto powers = optimal_powers_given_times(thetas, times);
  std::vector<ContractItem> items(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) items[k] = {powers[k], times[k]};
  return Contract(std::move(items));
}

namespace {

void finish(SolveReport& report, const ScalarOptimum& opt, const PUParams& pu) {
  report.decision = relay_or_direct(report.pu_value, pu);
  report.diagnostics["t_max_used"] = opt.t_max_used;
  report.diagnostics["hit_upper_bound"] = opt.hit_upper_bound ? 1.0 : 0.0;
  report.diagnostics["direct_rate"] = pu.r_dir;
  report.diagnostics["gain_over_direct"] = report.pu_value - pu.r_dir;
}

}  // namespace

SolveReport solve_complete(const WeakScenario& scenario) {
  scenario.validate();
  const auto& types = scenario.types;
  const std::size_t k = types.size();
  const double top_count = types.counts()[k - 1];

  const auto opt = maximize_scalar({types.highest(), scenario.pu, scenario.grid});
  const double t_top = opt.argmax / top_count;

  std::vector<ContractItem> items(k);
  items[k - 1] = {types.highest() * t_top, t_top};

  SolveReport report;
  report.contract = Contract(std::move(items));
  report.pu_value = opt.value;
  report.diagnostics["total_time"] = opt.argmax;
  finish(report, opt, scenario.pu);
  return report;
}

SolveReport solve_weak(const WeakScenario& scenario) {
  scenario.validate();
  const auto& types = scenario.types;
  const std::size_t k = types.size();
  const auto thetas = types.thetas();
  const auto counts = types.counts();

  auto schedule = [k](double t_top) {
    std::vector<double> times(k, 0.0);
    times[k - 1] = t_top;
    return times;
  };
  const FunctionObjective objective([&](double t_top) {
    return pu_utility(contract_from_times(thetas, schedule(t_top)), counts, scenario.pu);
  });

  // Search in per-SU time, so the interval scales with 1/N_K.
  GridOptions grid = scenario.grid;
  const double top_count = counts[k - 1];
  grid.t_max /= top_count;
  grid.t_max_cap /= top_count;
  const auto opt = maximize_on_grid(objective, grid);

  SolveReport report;
  report.contract = contract_from_times(thetas, schedule(opt.argmax));
  report.pu_value = opt.value;
  report.diagnostics["total_time"] = opt.argmax * top_count;
  finish(report, opt, scenario.pu);
  return report;
}

}  // namespace specshare

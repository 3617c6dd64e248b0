#include "specshare/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace specshare {

std::string to_string(LogBase base) {
  return base == LogBase::natural ? "natural" : "base2";
}

LogBase parse_log_base(const std::string& name) {
  if (name == "natural" || name == "e" || name == "ln") return LogBase::natural;
  if (name == "base2" || name == "2" || name == "log2") return LogBase::base2;
  throw InvalidInput("unknown log base '" + name + "' (expected natural or base2)");
}

std::string to_string(Decision d) {
  return d == Decision::relay ? "relay" : "direct_only";
}

PUParams PUParams::from_snr(double snr, double n0, LogBase base) {
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw InvalidInput("snr must be finite and >= 0");
  PUParams pu{0.0, n0, base};
  pu.r_dir = pu.log1p(snr);
  pu.validate();
  return pu;
}

double PUParams::log_scale() const {
  return log_base == LogBase::natural ? 1.0 : 1.0 / std::numbers::ln2;
}

double PUParams::log(double x) const {
  return log_base == LogBase::natural ? std::log(x) : std::log2(x);
}

double PUParams::log1p(double x) const {
  return std::log1p(x) * log_scale();
}

void PUParams::validate() const {
  if (!(r_dir >= 0.0) || !std::isfinite(r_dir)) throw InvalidInput("r_dir must be finite and >= 0");
  if (!(n0 > 0.0) || !std::isfinite(n0)) throw InvalidInput("n0 must be finite and > 0");
}

double su_type_from_profile(const SUProfile& p) {
  if (!(p.relay_gain > 0.0)) throw InvalidInput("relay_gain must be > 0");
  if (!(p.own_rate > 0.0)) throw InvalidInput("own_rate must be > 0");
  if (!(p.own_power >= 0.0)) throw InvalidInput("own_power must be >= 0");
  if (!(p.power_cost > 0.0)) throw InvalidInput("power_cost must be > 0");
  const double theta = 2.0 * p.relay_gain * (p.own_rate - p.power_cost * p.own_power) / p.power_cost;
  if (!(theta > 0.0))
    throw InvalidInput("SU violates the participation assumption (r - C*pt must be > 0)");
  return theta;
}

Contract::Contract(std::vector<ContractItem> items) : items_(std::move(items)) {
  for (std::size_t k = 0; k < items_.size(); ++k) {
    const auto& it = items_[k];
    if (!std::isfinite(it.power) || !std::isfinite(it.time) || it.power < 0.0 || it.time < 0.0)
      throw InvalidInput("contract item " + std::to_string(k + 1) +
                         " must have finite, nonnegative power and time");
  }
}

Contract Contract::null(std::size_t k) {
  return Contract(std::vector<ContractItem>(k));
}

void validate_thetas(std::span<const double> thetas) {
  if (thetas.empty()) throw InvalidInput("at least one type is required");
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (!std::isfinite(thetas[k]) || !(thetas[k] > 0.0))
      throw InvalidInput("theta " + std::to_string(k + 1) + " must be finite and > 0");
    if (k > 0 && !(thetas[k] > thetas[k - 1]))
      throw InvalidInput("thetas must be strictly increasing");
  }
}

TypeSpace TypeSpace::with_counts(std::vector<double> thetas, std::vector<Count> counts) {
  validate_thetas(thetas);
  if (counts.size() != thetas.size()) throw InvalidInput("counts must have one entry per type");
  TypeSpace ts;
  ts.thetas_ = std::move(thetas);
  ts.counts_ = std::move(counts);
  ts.population_ = std::accumulate(ts.counts_.begin(), ts.counts_.end(), Count{0});
  return ts;
}

TypeSpace TypeSpace::with_probs(std::vector<double> thetas, std::vector<double> probs,
                                Count population) {
  validate_thetas(thetas);
  if (probs.size() != thetas.size()) throw InvalidInput("probs must have one entry per type");
  double sum = 0.0;
  for (double q : probs) {
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("probabilities must lie in [0, 1]");
    sum += q;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("probabilities must sum to 1");
  if (population < 1) throw InvalidInput("population must be >= 1");
  TypeSpace ts;
  ts.thetas_ = std::move(thetas);
  ts.probs_ = std::move(probs);
  ts.population_ = population;
  return ts;
}

double relay_rate(double total_power, const PUParams& pu) {
  if (!(total_power >= 0.0)) throw InvalidInput("total relay power must be >= 0");
  return 0.5 * pu.r_dir + 0.5 * pu.log1p(total_power / pu.n0);
}

double pu_utility(const Contract& contract, std::span<const Count> counts, const PUParams& pu) {
  if (counts.size() != contract.size())
    throw InvalidInput("counts and contract must have the same length");
  double power = 0.0;
  double time = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    power += counts[k] * contract[k].power;
    time += counts[k] * contract[k].time;
  }
  return relay_rate(power, pu) / (1.0 + time);
}

double su_payoff_raw(const SUProfile& p, const ContractItem& item) {
  return item.time * p.own_rate -
         (item.time * p.own_power + item.power / (2.0 * p.relay_gain)) * p.power_cost;
}

namespace {

template <class Payoff>
std::optional<std::size_t> select_item(std::size_t k, Payoff payoff, double tol) {
  double best = 0.0;  // opt-out
  for (std::size_t j = 0; j < k; ++j) best = std::max(best, payoff(j));
  for (std::size_t j = k; j-- > 0;)
    if (payoff(j) >= best - tol) return j;
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> best_response(double theta, const Contract& contract) {
  return select_item(
      contract.size(), [&](std::size_t j) { return su_payoff(theta, contract[j]); }, kTolerance);
}

std::optional<std::size_t> best_response_raw(const SUProfile& profile, const Contract& contract) {
  const double tol = kTolerance * profile.power_cost / (2.0 * profile.relay_gain);
  return select_item(
      contract.size(), [&](std::size_t j) { return su_payoff_raw(profile, contract[j]); }, tol);
}

}  // namespace specshare

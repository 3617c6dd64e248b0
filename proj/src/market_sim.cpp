#include "specshare/market_sim.hpp"

#include <cmath>
#include <random>

#include "specshare/csv.hpp"
#include "specshare/parallel.hpp"

namespace specshare {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base ^ (stream * 0xd1342543de82ef95ULL);
  splitmix64(state);
  return splitmix64(state);
}

std::vector<Count> Population::counts(std::size_t k) const {
  std::vector<Count> out(k, 0);
  for (const auto& m : members) {
    if (m.type_index >= k) throw InvalidInput("member type index out of range");
    ++out[m.type_index];
  }
  return out;
}

Population population_from_counts(std::span<const double> thetas, std::span<const Count> counts) {
  validate_thetas(thetas);
  if (counts.size() != thetas.size()) throw InvalidInput("need one count per type");
  Population pop;
  for (std::size_t k = 0; k < thetas.size(); ++k)
    for (Count i = 0; i < counts[k]; ++i) pop.members.push_back({k, thetas[k], std::nullopt});
  return pop;
}

Population population_from_profiles(std::span<const double> thetas,
                                    std::span<const SUProfile> profiles) {
  validate_thetas(thetas);
  Population pop;
  for (const auto& profile : profiles) {
    const double theta = su_type_from_profile(profile);
    std::size_t k = 0;
    while (k < thetas.size() && std::abs(thetas[k] - theta) > kTolerance) ++k;
    if (k == thetas.size()) throw InvalidInput("profile type does not match any listed theta");
    pop.members.push_back({k, theta, profile});
  }
  return pop;
}

Population draw_population(const TypeSpace& types, std::uint64_t seed) {
  if (!types.has_probs()) throw InvalidInput("drawing a population needs type probabilities");
  std::uint64_t state = seed;
  std::mt19937_64 gen(splitmix64(state));

  const auto probs = types.probs();
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) cdf[k] = (acc += probs[k]);

  Population pop;
  pop.seed = seed;
  pop.members.reserve(types.population());
  for (Count i = 0; i < types.population(); ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    std::size_t k = 0;
    while (k + 1 < cdf.size() && !(u < cdf[k])) ++k;
    // Rounding in the cdf must not hand a draw to a zero-probability type.
    while (probs[k] == 0.0 && k > 0) --k;
    pop.members.push_back({k, types.theta(k), std::nullopt});
  }
  return pop;
}

std::size_t SimTrace::participants() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.item.has_value();
  return n;
}

std::size_t SimTrace::untruthful() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += !o.truthful;
  return n;
}

namespace {

bool same_item(const ContractItem& a, const ContractItem& b) {
  return std::abs(a.power - b.power) <= kTolerance && std::abs(a.time - b.time) <= kTolerance;
}

}  // namespace

SimTrace run_protocol(const Contract& contract, const Population& population, const PUParams& pu) {
  pu.validate();
  SimTrace trace;
  trace.seed = population.seed;
  trace.item_counts.assign(contract.size(), 0);
  trace.outcomes.reserve(population.members.size());
  for (const auto& m : population.members) {
    if (m.type_index >= contract.size()) throw InvalidInput("member type has no contract item");
    SuOutcome o;
    o.type_index = m.type_index;
    o.theta = m.theta;
    o.item = m.profile ? best_response_raw(*m.profile, contract) : best_response(m.theta, contract);
    const ContractItem chosen = o.item ? contract[*o.item] : ContractItem{};
    o.payoff = su_payoff(m.theta, chosen);
    o.truthful = same_item(chosen, contract[m.type_index]);
    if (o.item) ++trace.item_counts[*o.item];
    trace.outcomes.push_back(o);
  }
  trace.pu_utility = pu_utility(contract, trace.item_counts, pu);
  return trace;
}

void write_trace_csv(std::ostream& out, std::span<const SimTrace> traces) {
  csv::Writer w(out);
  w.row({"replication", "su_index", "theta", "item_index", "payoff", "pu_utility"});
  for (std::size_t r = 0; r < traces.size(); ++r) {
    const auto& t = traces[r];
    for (std::size_t i = 0; i < t.outcomes.size(); ++i) {
      const auto& o = t.outcomes[i];
      w.row({std::to_string(r), std::to_string(i), csv::number(o.theta),
             std::to_string(o.item ? *o.item + 1 : 0), csv::number(o.payoff),
             csv::number(t.pu_utility)});
    }
  }
}

MonteCarloEstimate monte_carlo_utility(const Contract& contract, const TypeSpace& types,
                                       const PUParams& pu, std::size_t replications,
                                       std::uint64_t seed, unsigned threads) {
  if (replications < 2) throw InvalidInput("Monte Carlo needs at least 2 replications");
  if (contract.size() != types.size()) throw InvalidInput("contract must have one item per type");
  const auto values = parallel_map(
      replications,
      [&](std::size_t r) {
        return run_protocol(contract, draw_population(types, derive_seed(seed, r)), pu).pu_utility;
      },
      threads == 0 ? default_threads() : threads);

  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(replications);
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n), replications};
}

}  // namespace specshare

#pragma once

// Reference computations for tests. Each one is written from the model
// formulas directly and shares no code with the library beyond its types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "specshare/model.hpp"

namespace oracle {

// High-precision reference values (50-digit arithmetic, then rounded).
struct ScalarReference {
  double theta;
  double t_star;
  double f_star;
};
inline constexpr ScalarReference kRdir0[] = {
    {1.0, 1.71828182845904523536, 0.18393972058572116080},
    {2.0, 1.29556073833431106832, 0.27846454276107379511},
    {10.0, 0.717436466772480951627, 0.61166833182054036840},
};

inline double log_in(specshare::LogBase base, double x) {
  return base == specshare::LogBase::natural ? std::log(x) : std::log2(x);
}

// (R/2 + 1/2 log(1 + theta T / n0)) / (1 + T)
inline double single_type(double theta, double total_time, const specshare::PUParams& pu) {
  return (pu.r_dir / 2 + 0.5 * log_in(pu.log_base, 1.0 + theta * total_time / pu.n0)) /
         (1.0 + total_time);
}

struct GridMax {
  double argmax;
  double value;
};

inline GridMax dense_grid_max(const std::function<double(double)>& f, double t_max,
                              std::size_t points) {
  GridMax best{0.0, f(0.0)};
  for (std::size_t i = 1; i < points; ++i) {
    const double x = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

// Counts-based PU utility, written out term by term.
inline double pu_utility(const std::vector<double>& powers, const std::vector<double>& times,
                         const std::vector<unsigned>& counts, const specshare::PUParams& pu) {
  double p = 0.0, t = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p += counts[k] * powers[k];
    t += counts[k] * times[k];
  }
  return (pu.r_dir / 2 + 0.5 * log_in(pu.log_base, 1.0 + p / pu.n0)) / (1.0 + t);
}

// Expected utility by enumerating all K^N ordered type assignments. Each SU
// takes its own item.
inline double expected_utility_by_assignment(const std::vector<double>& powers,
                                             const std::vector<double>& times,
                                             const std::vector<double>& probs, unsigned n,
                                             const specshare::PUParams& pu) {
  const std::size_t k = probs.size();
  std::vector<std::size_t> who(n, 0);
  double sum = 0.0;
  for (;;) {
    double prob = 1.0;
    std::vector<unsigned> counts(k, 0);
    for (auto w : who) {
      prob *= probs[w];
      ++counts[w];
    }
    sum += prob * pu_utility(powers, times, counts, pu);
    std::size_t i = 0;
    while (i < n && ++who[i] == k) who[i++] = 0;
    if (i == n) break;
  }
  return sum;
}

// Pairwise IC/IR check on normalized payoffs.
inline bool feasible(const std::vector<double>& powers, const std::vector<double>& times,
                     const std::vector<double>& thetas, double tol = 1e-9) {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    const double own = thetas[i] * times[i] - powers[i];
    if (own < -tol) return false;
    for (std::size_t j = 0; j < thetas.size(); ++j)
      if (thetas[i] * times[j] - powers[j] > own + tol) return false;
  }
  return true;
}

inline std::vector<double> increasing_thetas(std::mt19937_64& rng, std::size_t k,
                                             double lo = 0.5, double hi = 20.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> th;
  while (th.size() < k) {
    th.clear();
    for (std::size_t i = 0; i < k; ++i) th.push_back(u(rng));
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end()), th.end());
  }
  return th;
}

inline std::vector<double> monotone_times(std::mt19937_64& rng, std::size_t k, double hi = 2.0) {
  std::uniform_real_distribution<double> u(0.0, hi);
  std::bernoulli_distribution tie(0.2);
  std::vector<double> t(k);
  for (auto& x : t) x = u(rng);
  std::sort(t.begin(), t.end());
  for (std::size_t i = 1; i < k; ++i)
    if (tie(rng)) t[i] = t[i - 1];
  if (tie(rng)) t[0] = 0.0;
  return t;
}

// p_1 = theta_1 t_1, p_k = p_{k-1} + theta_k (t_k - t_{k-1}).
inline std::vector<double> lowest_powers(const std::vector<double>& thetas,
                                         const std::vector<double>& times) {
  std::vector<double> p(times.size());
  for (std::size_t k = 0; k < times.size(); ++k)
    p[k] = k == 0 ? thetas[0] * times[0] : p[k - 1] + thetas[k] * (times[k] - times[k - 1]);
  return p;
}

inline specshare::Contract make_contract(const std::vector<double>& powers,
                                         const std::vector<double>& times) {
  std::vector<specshare::ContractItem> items;
  for (std::size_t k = 0; k < powers.size(); ++k) items.push_back({powers[k], times[k]});
  return specshare::Contract(std::move(items));
}

}  // namespace oracle

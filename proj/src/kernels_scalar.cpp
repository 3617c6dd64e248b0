#include <cassert>
#include <cmath>

#include "specshare/kernels.hpp"

namespace specshare::kernels::scalar {

void accumulate_linear(std::span<const double> x, const LinearTerm& t, std::span<double> out) {
  assert(out.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] += t.weight * (t.h + t.s * std::log1p(t.a * x[i])) / (1.0 + t.b * x[i]);
}

void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& t, std::span<double> out) {
  assert(power.size() == time.size() && out.size() == time.size());
  for (std::size_t i = 0; i < time.size(); ++i)
    out[i] += t.weight * (t.h + t.s * std::log1p(power[i] * t.inv_n0)) / (1.0 + time[i]);
}

}  // namespace specshare::kernels::scalar

#pragma once

// Batched evaluation of the rate-over-time terms every solver spends its time
// in. A term has the shape
//
//     weight * (h + s * ln(1 + a * x)) / (1 + b * x)
//
// which covers the single-type objective (a = theta / n0, b = 1), each
// binomial component of a threshold candidate (a = m theta / n0, b = m), and,
// in the pairwise form, arbitrary (total power, total time) grids.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2+FMA
// variant selected at runtime. Setting SPECSHARE_KERNEL=scalar in the
// environment pins the scalar path.

#include <cstddef>
#include <span>
#include <string_view>

namespace specshare::kernels {

struct LinearTerm {
  double h = 0.0;  ///< constant numerator part (R_dir / 2)
  double s = 0.5;  ///< log multiplier (1/2, or 1/(2 ln 2) for base 2)
  double a = 1.0;  ///< slope inside the log
  double b = 1.0;  ///< slope of the denominator
  double weight = 1.0;
};

struct PairTerm {
  double h = 0.0;
  double s = 0.5;
  double inv_n0 = 1.0;
  double weight = 1.0;
};

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);
bool backend_available(Backend b);
/// Backend used by the dispatching entry points.
Backend active_backend();
/// Override the runtime choice (tests, benchmarks). Throws if unavailable.
void set_backend(Backend b);

/// out[i] += w (h + s ln(1 + a x[i])) / (1 + b x[i]).  Requires x[i], a, b >= 0.
void accumulate_linear(std::span<const double> x, const LinearTerm& term, std::span<double> out);

/// out[i] += w (h + s ln(1 + power[i] / n0)) / (1 + time[i]).  Requires power, time >= 0.
void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& term, std::span<double> out);

namespace scalar {
void accumulate_linear(std::span<const double> x, const LinearTerm& term, std::span<double> out);
void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& term, std::span<double> out);
}  // namespace scalar

#if defined(SPECSHARE_HAVE_AVX2)
namespace avx2 {
void accumulate_linear(std::span<const double> x, const LinearTerm& term, std::span<double> out);
void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& term, std::span<double> out);
/// Vector ln(1 + y) for y >= 0, exposed for accuracy tests.
void log1p(std::span<const double> y, std::span<double> out);
}  // namespace avx2
#endif

}  // namespace specshare::kernels

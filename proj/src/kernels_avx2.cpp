// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the runtime CPU check in kernels_dispatch.cpp.

#include <immintrin.h>

#include <cassert>
#include <cstdint>

#include "specshare/kernels.hpp"

namespace specshare::kernels::avx2 {

namespace {

// Cephes-style rational approximation of log(1 + f) on [sqrt(1/2) - 1, sqrt(2) - 1].
constexpr double kP[] = {1.01875663804580931796e-4, 4.97494994976747001425e-1,
                         4.70579119878881725854e0,  1.44989225341610930846e1,
                         1.79368678507819816313e1,  7.70838733755885391666e0};
constexpr double kQ[] = {1.12873587189167450590e1, 4.52279145837532221105e1,
                         8.29875266912776603211e1, 7.11544750618563894466e1,
                         2.31251620126765340583e1};
// ln 2 split so that e * kLn2Hi is exact.
constexpr double kLn2Hi = 0.693359375;
constexpr double kLn2Lo = -2.121944400546905827679e-4;
constexpr double kSqrt2 = 1.41421356237309504880;

// ln(u) for u >= 1 and finite.
inline __m256d log_ge1(__m256d u) {
  const __m256i bits = _mm256_castpd_si256(u);
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

  // Biased exponent -> double via the 2^52 trick.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(two52))), two52);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

  const __m256d x = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
  const __m256d z = _mm256_mul_pd(x, x);

  __m256d p = _mm256_set1_pd(kP[0]);
  for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, x, _mm256_set1_pd(kP[i]));
  __m256d q = _mm256_add_pd(x, _mm256_set1_pd(kQ[0]));
  for (int i = 1; i < 5; ++i) q = _mm256_fmadd_pd(q, x, _mm256_set1_pd(kQ[i]));

  __m256d y = _mm256_mul_pd(x, _mm256_div_pd(_mm256_mul_pd(z, p), q));
  y = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  const __m256d r = _mm256_add_pd(x, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), r);
}

// ln(1 + y) for y >= 0, with the rounding error of 1 + y folded back in.
inline __m256d log1p_nonneg(__m256d y) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, y);
  const __m256d c = _mm256_div_pd(_mm256_sub_pd(y, _mm256_sub_pd(u, one)), u);
  return _mm256_add_pd(log_ge1(u), c);
}

}  // namespace

void log1p(std::span<const double> y, std::span<double> out) {
  assert(out.size() == y.size());
  std::size_t i = 0;
  for (; i + 4 <= y.size(); i += 4)
    _mm256_storeu_pd(out.data() + i, log1p_nonneg(_mm256_loadu_pd(y.data() + i)));
  if (i < y.size()) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = i; j < y.size(); ++j) buf[j - i] = y[j];
    _mm256_store_pd(buf, log1p_nonneg(_mm256_load_pd(buf)));
    for (std::size_t j = i; j < y.size(); ++j) out[j] = buf[j - i];
  }
}

void accumulate_linear(std::span<const double> x, const LinearTerm& t, std::span<double> out) {
  assert(out.size() == x.size());
  const __m256d h = _mm256_set1_pd(t.h);
  const __m256d s = _mm256_set1_pd(t.s);
  const __m256d a = _mm256_set1_pd(t.a);
  const __m256d b = _mm256_set1_pd(t.b);
  const __m256d w = _mm256_set1_pd(t.weight);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= x.size(); i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    const __m256d num = _mm256_fmadd_pd(s, log1p_nonneg(_mm256_mul_pd(a, xv)), h);
    const __m256d den = _mm256_fmadd_pd(b, xv, one);
    const __m256d acc = _mm256_loadu_pd(out.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(w, _mm256_div_pd(num, den), acc));
  }
  scalar::accumulate_linear(x.subspan(i), t, out.subspan(i));
}

void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& t, std::span<double> out) {
  assert(power.size() == time.size() && out.size() == time.size());
  const __m256d h = _mm256_set1_pd(t.h);
  const __m256d s = _mm256_set1_pd(t.s);
  const __m256d inv_n0 = _mm256_set1_pd(t.inv_n0);
  const __m256d w = _mm256_set1_pd(t.weight);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= time.size(); i += 4) {
    const __m256d pv = _mm256_loadu_pd(power.data() + i);
    const __m256d tv = _mm256_loadu_pd(time.data() + i);
    const __m256d num = _mm256_fmadd_pd(s, log1p_nonneg(_mm256_mul_pd(pv, inv_n0)), h);
    const __m256d den = _mm256_add_pd(one, tv);
    const __m256d acc = _mm256_loadu_pd(out.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(w, _mm256_div_pd(num, den), acc));
  }
  scalar::accumulate_pairs(power.subspan(i), time.subspan(i), t, out.subspan(i));
}

}  // namespace specshare::kernels::avx2

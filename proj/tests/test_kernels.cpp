#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "specshare/kernels.hpp"

using namespace specshare::kernels;

namespace {

std::vector<double> sample_inputs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mant(0.0, 1.0);
  std::uniform_int_distribution<int> expo(-40, 40);
  std::vector<double> x(n);
  for (auto& v : x) v = mant(rng) * std::ldexp(1.0, expo(rng));
  x[0] = 0.0;
  x[1] = 1e-300;
  x[2] = std::sqrt(2.0) - 1.0;
  x[3] = 1e300;
  return x;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace

TEST_CASE("scalar linear kernel matches the formula") {
  const auto x = sample_inputs(257, 1);
  const LinearTerm term{0.75, 0.5, 3.0, 2.0, 0.25};
  std::vector<double> out(x.size(), 1.0);
  scalar::accumulate_linear(x, term, out);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double expect = 1.0 + 0.25 * (0.75 + 0.5 * std::log1p(3.0 * x[i])) / (1.0 + 2.0 * x[i]);
    CHECK(rel_err(out[i], expect) < 1e-15);
  }
}

#if defined(SPECSHARE_HAVE_AVX2)

TEST_CASE("avx2 log1p is accurate across magnitudes") {
  if (!backend_available(Backend::avx2)) return;
  const auto y = sample_inputs(4099, 2);
  std::vector<double> out(y.size());
  avx2::log1p(y, out);
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) {
      CHECK(out[i] == 0.0);
      continue;
    }
    worst = std::max(worst, rel_err(out[i], std::log1p(y[i])));
  }
  CHECK(worst < 4e-16);
}

TEST_CASE("avx2 kernels agree with scalar kernels") {
  if (!backend_available(Backend::avx2)) return;
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u, 1003u}) {
    const auto x = sample_inputs(std::max<std::size_t>(n, 4), 10 + n);
    const std::span<const double> xs(x.data(), n);
    const LinearTerm term{0.5, 0.72134752044448170368, 20.0, 3.0, 0.125};
    std::vector<double> a(n, 0.3), b(n, 0.3);
    scalar::accumulate_linear(xs, term, a);
    avx2::accumulate_linear(xs, term, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_err(b[i], a[i]) < 1e-14);

    const auto t = sample_inputs(std::max<std::size_t>(n, 4), 20 + n);
    const std::span<const double> ts(t.data(), n);
    const PairTerm pair{0.5, 0.5, 0.5, 0.75};
    std::vector<double> c(n, 0.0), d(n, 0.0);
    scalar::accumulate_pairs(xs, ts, pair, c);
    avx2::accumulate_pairs(xs, ts, pair, d);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_err(d[i], c[i]) < 1e-14);
  }
}

#endif

TEST_CASE("dispatch can be pinned to the scalar backend") {
  const Backend before = active_backend();
  set_backend(Backend::scalar);
  CHECK(active_backend() == Backend::scalar);
  const std::vector<double> x = {0.0, 1.0, 2.0};
  std::vector<double> out(3, 0.0);
  accumulate_linear(x, {0.0, 0.5, 1.0, 1.0, 1.0}, out);
  CHECK(out[1] == doctest::Approx(0.5 * std::log(2.0) / 2.0));
  set_backend(before);
  CHECK(to_string(Backend::avx2) == "avx2");
}

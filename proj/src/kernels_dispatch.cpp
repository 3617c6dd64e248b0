#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "specshare/kernels.hpp"

namespace specshare::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SPECSHARE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("SPECSHARE_KERNEL"); env && std::string(env) == "scalar")
    return Backend::scalar;
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_available(Backend b) {
  return b == Backend::scalar || cpu_has_avx2();
}

Backend active_backend() {
  return current().load(std::memory_order_relaxed);
}

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::runtime_error("kernel backend " + std::string(to_string(b)) + " is not available");
  current().store(b, std::memory_order_relaxed);
}

void accumulate_linear(std::span<const double> x, const LinearTerm& term, std::span<double> out) {
#if defined(SPECSHARE_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::accumulate_linear(x, term, out);
#endif
  scalar::accumulate_linear(x, term, out);
}

void accumulate_pairs(std::span<const double> power, std::span<const double> time,
                      const PairTerm& term, std::span<double> out) {
#if defined(SPECSHARE_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::accumulate_pairs(power, time, term, out);
#endif
  scalar::accumulate_pairs(power, time, term, out);
}

}  // namespace specshare::kernels

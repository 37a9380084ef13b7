#include <atomic>

#include "esslab/kernels.hpp"

namespace esslab::kernels {

namespace {

// -1: no override, otherwise the Backend value.
std::atomic<int> g_override{-1};

bool cpu_has_avx2() {
#if defined(ESSLAB_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

}  // namespace

std::string to_string(Backend backend) {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
  static const bool available = cpu_has_avx2();
  return available;
}

Backend active_backend() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) {
    const auto b = static_cast<Backend>(o);
    return b == Backend::avx2 && !avx2_available() ? Backend::scalar : b;
  }
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

void set_backend_override(std::optional<Backend> backend) {
  g_override.store(backend ? static_cast<int>(*backend) : -1, std::memory_order_relaxed);
}

void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts) {
#if defined(ESSLAB_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2) {
    avx2::sturm_count4(d, e2, n, shifts, pivmin, counts);
    return;
  }
#endif
  scalar::sturm_count4(d, e2, n, shifts, pivmin, counts);
}

void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi) {
#if defined(ESSLAB_HAVE_AVX2_TU)
  if (active_backend() == Backend::avx2) {
    avx2::defect_moduli(count, A, B, psi, w, p, defect, phi);
    return;
  }
#endif
  scalar::defect_moduli(count, A, B, psi, w, p, defect, phi);
}

}  // namespace esslab::kernels

#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace esslab::kernels {

enum class Backend { scalar, avx2 };

std::string to_string(Backend backend);

/// True when the AVX2 variants were compiled in and the CPU supports AVX2.
bool avx2_available();

/// Backend used by the dispatching entry points below. Defaults to the fastest
/// available; tests may force one.
Backend active_backend();
void set_backend_override(std::optional<Backend> backend);

/// Number of eigenvalues strictly below each of 4 shifts for the symmetric tridiagonal
/// matrix with diagonal d[0..n) and squared off-diagonals e2[0..n-1), by counting
/// negative pivots of the LDL^T factorization of T - shift. A pivot that is exactly 0
/// is replaced by -pivmin.
void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts);

/// Pointwise moduli for the defect integrals:
///   defect[j] = |A_j + i B_j|^p * w_j,   phi[j] = psi_j^p * w_j,   p in {1, 2}.
void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi);

namespace scalar {
void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts);
void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi);
}  // namespace scalar

#if defined(ESSLAB_HAVE_AVX2_TU)
namespace avx2 {
void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts);
void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi);
}  // namespace avx2
#endif

}  // namespace esslab::kernels

#include <cmath>

#include "esslab/kernels.hpp"

namespace esslab::kernels::scalar {

void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts) {
  for (int lane = 0; lane < 4; ++lane) {
    const double s = shifts[lane];
    int c = 0;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      q = i == 0 ? d[0] - s : (d[i] - s) - e2[i - 1] / q;
      if (q == 0.0) q = -pivmin;
      if (q < 0.0) ++c;
    }
    counts[lane] = c;
  }
}

void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi) {
  if (p == 1) {
    for (std::size_t j = 0; j < count; ++j) {
      defect[j] = std::sqrt(A[j] * A[j] + B[j] * B[j]) * w[j];
      phi[j] = psi[j] * w[j];
    }
  } else {
    for (std::size_t j = 0; j < count; ++j) {
      defect[j] = (A[j] * A[j] + B[j] * B[j]) * w[j];
      phi[j] = (psi[j] * psi[j]) * w[j];
    }
  }
}

}  // namespace esslab::kernels::scalar

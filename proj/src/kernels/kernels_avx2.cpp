#include <immintrin.h>

#include <cmath>

#include "esslab/kernels.hpp"

namespace esslab::kernels::avx2 {

// Four shifts, one per lane. Operation order matches the scalar variant exactly
// (no FMA), so counts are identical.
void sturm_count4(const double* d, const double* e2, std::size_t n, const double* shifts,
                  double pivmin, int* counts) {
  const __m256d s = _mm256_loadu_pd(shifts);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_piv = _mm256_set1_pd(-pivmin);
  __m256i c = _mm256_setzero_si256();
  __m256d q = zero;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d di = _mm256_sub_pd(_mm256_set1_pd(d[i]), s);
    q = i == 0 ? di : _mm256_sub_pd(di, _mm256_div_pd(_mm256_set1_pd(e2[i - 1]), q));
    q = _mm256_blendv_pd(q, neg_piv, _mm256_cmp_pd(q, zero, _CMP_EQ_OQ));
    // The comparison mask is all ones (-1 as an integer) in negative lanes.
    c = _mm256_sub_epi64(c, _mm256_castpd_si256(_mm256_cmp_pd(q, zero, _CMP_LT_OQ)));
  }
  alignas(32) long long out[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(out), c);
  for (int lane = 0; lane < 4; ++lane) counts[lane] = static_cast<int>(out[lane]);
}

void defect_moduli(std::size_t count, const double* A, const double* B, const double* psi,
                   const double* w, int p, double* defect, double* phi) {
  std::size_t j = 0;
  if (p == 1) {
    for (; j + 4 <= count; j += 4) {
      const __m256d a = _mm256_loadu_pd(A + j);
      const __m256d b = _mm256_loadu_pd(B + j);
      const __m256d ww = _mm256_loadu_pd(w + j);
      const __m256d mod = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)));
      _mm256_storeu_pd(defect + j, _mm256_mul_pd(mod, ww));
      _mm256_storeu_pd(phi + j, _mm256_mul_pd(_mm256_loadu_pd(psi + j), ww));
    }
    for (; j < count; ++j) {
      defect[j] = std::sqrt(A[j] * A[j] + B[j] * B[j]) * w[j];
      phi[j] = psi[j] * w[j];
    }
  } else {
    for (; j + 4 <= count; j += 4) {
      const __m256d a = _mm256_loadu_pd(A + j);
      const __m256d b = _mm256_loadu_pd(B + j);
      const __m256d ww = _mm256_loadu_pd(w + j);
      const __m256d ps = _mm256_loadu_pd(psi + j);
      const __m256d sq = _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
      _mm256_storeu_pd(defect + j, _mm256_mul_pd(sq, ww));
      _mm256_storeu_pd(phi + j, _mm256_mul_pd(_mm256_mul_pd(ps, ps), ww));
    }
    for (; j < count; ++j) {
      defect[j] = (A[j] * A[j] + B[j] * B[j]) * w[j];
      phi[j] = (psi[j] * psi[j]) * w[j];
    }
  }
}

}  // namespace esslab::kernels::avx2

#include "doctest.h"

#include <cmath>
#include <cfloat>

#include "esslab/kernels.hpp"
#include "gen.hpp"

using namespace esslab;

TEST_CASE("backend override") {
  kernels::set_backend_override(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::set_backend_override(std::nullopt);
  CHECK(kernels::active_backend() ==
        (kernels::avx2_available() ? kernels::Backend::avx2 : kernels::Backend::scalar));
}

TEST_CASE("scalar sturm count on a diagonal matrix") {
  const double d[3] = {1.0, 2.0, 3.0};
  const double e2[2] = {0.0, 0.0};
  const double s[4] = {0.5, 1.5, 2.5, 3.5};
  int c[4];
  kernels::scalar::sturm_count4(d, e2, 3, s, DBL_MIN, c);
  CHECK(c[0] == 0);
  CHECK(c[1] == 1);
  CHECK(c[2] == 2);
  CHECK(c[3] == 3);
}

TEST_CASE("scalar defect moduli") {
  const double A[2] = {3.0, 0.0}, B[2] = {4.0, -2.0}, psi[2] = {0.5, 1.0}, w[2] = {2.0, 1.0};
  double def[2], phi[2];
  kernels::scalar::defect_moduli(2, A, B, psi, w, 1, def, phi);
  CHECK(def[0] == doctest::Approx(10.0));
  CHECK(def[1] == doctest::Approx(2.0));
  CHECK(phi[0] == doctest::Approx(1.0));
  kernels::scalar::defect_moduli(2, A, B, psi, w, 2, def, phi);
  CHECK(def[0] == doctest::Approx(50.0));
  CHECK(phi[0] == doctest::Approx(0.5));
}

#if defined(ESSLAB_HAVE_AVX2_TU)
TEST_CASE("property: AVX2 kernels match the scalar reference") {
  if (!kernels::avx2_available()) return;
  testing::Gen gen(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(gen.integer(1, 300));
    auto d = gen.vector(n, -5.0, 5.0);
    auto e = gen.vector(n > 0 ? n - 1 : 0, -2.0, 2.0);
    std::vector<double> e2(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) e2[i] = trial % 7 == 0 && i % 3 == 0 ? 0.0 : e[i] * e[i];
    double s[4];
    for (auto& x : s) x = gen.uniform(-8.0, 8.0);
    if (trial % 5 == 0) s[1] = d[0];  // exact zero pivot
    int a[4], b[4];
    kernels::scalar::sturm_count4(d.data(), e2.data(), n, s, DBL_MIN, a);
    kernels::avx2::sturm_count4(d.data(), e2.data(), n, s, DBL_MIN, b);
    for (int l = 0; l < 4; ++l) CHECK(a[l] == b[l]);

    const std::size_t m = static_cast<std::size_t>(gen.integer(0, 67));
    auto A = gen.vector(m, -3.0, 3.0), B = gen.vector(m, -3.0, 3.0);
    auto psi = gen.vector(m, 0.0, 1.0), w = gen.vector(m, 0.0, 1e3);
    for (int p : {1, 2}) {
      std::vector<double> d1(m), p1(m), d2(m), p2(m);
      kernels::scalar::defect_moduli(m, A.data(), B.data(), psi.data(), w.data(), p, d1.data(), p1.data());
      kernels::avx2::defect_moduli(m, A.data(), B.data(), psi.data(), w.data(), p, d2.data(), p2.data());
      for (std::size_t j = 0; j < m; ++j) {
        CHECK(d2[j] == doctest::Approx(d1[j]).epsilon(4 * DBL_EPSILON));
        CHECK(p2[j] == doctest::Approx(p1[j]).epsilon(4 * DBL_EPSILON));
      }
    }
  }
}
#endif

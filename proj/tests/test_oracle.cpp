#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"
#include "esslab/spectrum_oracle.hpp"
#include "gen.hpp"

using namespace esslab;

namespace {

Eigen::VectorXd dense_eigenvalues(const TridiagonalOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = op.d[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = op.e[static_cast<std::size_t>(i)];
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
}

TridiagonalOperator flat(std::size_t N, BoundaryCondition outer = BoundaryCondition::dirichlet) {
  return assemble_from_log_weight([](double) { return 0.0; }, 0.0, 1.0, N, BoundaryCondition::dirichlet, outer, "1");
}

}  // namespace

TEST_CASE("constant weight gives the classical stencil") {
  const auto op = flat(100);
  const double h2 = 1e-4;
  CHECK(op.d[50] == doctest::Approx(2.0 / h2));
  CHECK(op.e[50] == doctest::Approx(-1.0 / h2));
  // Ghost-cell Dirichlet rows.
  CHECK(op.d[0] == doctest::Approx(3.0 / h2));
  CHECK(op.d[99] == doctest::Approx(3.0 / h2));
  CHECK(flat(100, BoundaryCondition::neumann).d[99] == doctest::Approx(1.0 / h2));
}

TEST_CASE("unit interval Dirichlet eigenvalues") {
  const auto ev = eig_tridiagonal_index(flat(1000), 0, 3).eigenvalues;
  for (int k = 1; k <= 3; ++k) CHECK(ev[k - 1] == doctest::Approx(k * k * M_PI * M_PI).epsilon(1e-3));
}

TEST_CASE("property: bisection agrees with a dense eigensolve") {
  testing::Gen gen(71);
  for (int trial = 0; trial < 30; ++trial) {
    TridiagonalOperator op;
    const std::size_t n = static_cast<std::size_t>(gen.integer(2, 80));
    op.d = gen.vector(n, -3.0, 3.0);
    op.e = gen.vector(n - 1, -1.0, 1.0);
    const Eigen::VectorXd ref = dense_eigenvalues(op);
    const auto got = eig_tridiagonal_index(op, 0, n, 1e-12).eigenvalues;
    for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(ref(static_cast<Eigen::Index>(i))).epsilon(1e-10).scale(1.0));
    const auto win = eig_tridiagonal(op, -1.0, 1.0, 1e-12);
    const auto inside = std::count_if(ref.begin(), ref.end(), [](double v) { return v >= -1.0 && v < 1.0; });
    CHECK(win.eigenvalues.size() == static_cast<std::size_t>(inside));
  }
}

TEST_CASE("property: inertia counts are backend independent") {
  testing::Gen gen(72);
  TridiagonalOperator op;
  op.d = gen.vector(200, -3.0, 3.0);
  op.e = gen.vector(199, -1.0, 1.0);
  const Eigen::VectorXd ref = dense_eigenvalues(op);
  for (auto b : {kernels::Backend::scalar, kernels::Backend::avx2}) {
    if (b == kernels::Backend::avx2 && !kernels::avx2_available()) continue;
    kernels::set_backend_override(b);
    for (int i = 0; i < 50; ++i) {
      const double x = gen.uniform(-5.0, 5.0);
      const auto brute = std::count_if(ref.begin(), ref.end(), [x](double v) { return v < x; });
      CHECK(count_below(op, x) == static_cast<std::size_t>(brute));
    }
  }
  kernels::set_backend_override(std::nullopt);
}

TEST_CASE("radial operator: pole is natural, symmetric weights") {
  const auto op = assemble_radial_operator(make_euclidean(3, 1e3), 10.0, 100, BoundaryCondition::dirichlet);
  CHECK(op.inner_natural);
  const auto cusp = assemble_radial_operator(make_cusp(200.0), 50.0, 100, BoundaryCondition::neumann);
  CHECK_FALSE(cusp.inner_natural);
  // R^3 radial: the lowest Dirichlet eigenvalue on the ball of radius L is (pi/L)^2.
  const auto ev = eig_tridiagonal_index(
      assemble_radial_operator(make_euclidean(3, 1e3), 10.0, 2000, BoundaryCondition::dirichlet), 0, 2);
  CHECK(ev.eigenvalues[0] == doctest::Approx(M_PI * M_PI / 100.0).epsilon(1e-4));
  CHECK(ev.eigenvalues[1] == doctest::Approx(4.0 * M_PI * M_PI / 100.0).epsilon(1e-4));
}

TEST_CASE("property: Dirichlet and Neumann counts interlace") {
  testing::Gen gen(73);
  for (int i = 0; i < 10; ++i) {
    const double L = gen.uniform(20.0, 120.0);
    const auto D = assemble_radial_operator(make_hyperbolic(3, 700.0), L, 400, BoundaryCondition::dirichlet);
    const auto N = assemble_radial_operator(make_hyperbolic(3, 700.0), L, 400, BoundaryCondition::neumann);
    std::vector<double> edges;
    for (int k = 0; k <= 20; ++k) edges.push_back(0.3 * k);
    CHECK(interlacing_holds(D, N, edges));
    // Rank-one difference: the Neumann count never falls below the Dirichlet count.
    for (double x : edges) CHECK(count_below(N, x) >= count_below(D, x));
  }
}

TEST_CASE("grid convergence is second order") {
  for (const WarpedModel& m : {make_euclidean(3, 1e3), make_hyperbolic(3, 700.0), make_cusp(200.0)}) {
    const double L = m.r_lo() + 20.0;
    std::vector<double> lam;
    for (std::size_t N : {200u, 400u, 800u}) {
      lam.push_back(eig_tridiagonal_index(assemble_radial_operator(m, L, N, BoundaryCondition::dirichlet), 0, 1, 1e-14)
                        .eigenvalues[0]);
    }
    INFO(m.name());
    CHECK(std::log2(std::abs(lam[0] - lam[1]) / std::abs(lam[1] - lam[2])) >= 1.8);
  }
}

TEST_CASE("fill-in on R^3 and the hyperbolic gap") {
  const auto e = estimate_essential_spectrum(make_euclidean(3, 1e4), 4.0, {50.0, 100.0, 200.0}, 4000, 2);
  CHECK(e.fills);
  CHECK(e.interlacing);
  REQUIRE(e.gap_ratios.size() == 2);
  for (double r : e.gap_ratios) CHECK(r == doctest::Approx(2.0).epsilon(0.25));
  const auto h = estimate_essential_spectrum(make_hyperbolic(3, 700.0), 4.0, {50.0, 100.0}, 4000, 2);
  CHECK_FALSE(h.fills);
  CHECK(h.levels.back().dirichlet.front() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("oracle preconditions") {
  CHECK_THROWS_AS(flat(8), InvalidInput);
  CHECK_THROWS_AS(assemble_radial_operator(make_euclidean(3, 100.0), 200.0, 100, BoundaryCondition::dirichlet),
                  InvalidInput);
  CHECK_THROWS_AS(parse_boundary_condition("robin"), InvalidInput);
  CHECK_THROWS_AS(estimate_essential_spectrum(make_euclidean(3, 1e3), 4.0, {100.0, 50.0}, 100), InvalidInput);
}

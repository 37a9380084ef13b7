#include "doctest.h"

#include <cmath>

#include "esslab/errors.hpp"
#include "esslab/smoothing.hpp"
#include "esslab/volume.hpp"
#include "esslab/weyl.hpp"
#include "gen.hpp"

using namespace esslab;

namespace {

const SmoothedDistance& flat3() {
  static const WarpedModel m = make_euclidean(3, 1e4);
  static const SmoothedDistance sm = mollify_distance(m, standard_delta(m));
  return sm;
}

}  // namespace

TEST_CASE("cutoff profile") {
  const CutoffProfile c = build_cutoff(10.0, 20.0);
  CHECK(c(15.0) == 1.0);
  CHECK(c(8.9) == 0.0);
  CHECK(c(21.5) == 0.0);
  CHECK(c(9.5) == doctest::Approx(0.5));
  // C^2 joins.
  for (double s : {9.0, 10.0, 20.0, 21.0}) {
    CHECK(std::abs(c.d1(s)) < 1e-12);
    CHECK(std::abs(c.d2(s)) < 1e-12);
  }
  // Budget: sup |psi'| + |psi''| of the quintic smoothstep.
  CHECK(c.budget() > 6.0);
  CHECK(c.budget() < 7.0);
  double m = 0.0;
  for (double s = 9.0; s <= 10.0; s += 1e-4) m = std::max(m, std::abs(c.d1(s)) + std::abs(c.d2(s)));
  CHECK(m <= c.budget() + 1e-9);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((WeylParamsNonCompact{10.0, 30.0, 40.0, 10.0, 1.0, 1}.validate()), InvalidInput);
  CHECK_THROWS_AS((WeylParamsNonCompact{13.0, 39.0, 78.0, 10.0, 1.0, 3}.validate()), InvalidInput);
  CHECK_NOTHROW((WeylParamsNonCompact{13.0, 39.0, 78.0, 10.0, 1.0, 1}.validate()));
  CHECK_THROWS_AS((SolitonWeylParams{1.0, 12.0, 2.0, 10.0, 1.0, 1}.validate()), InvalidInput);
}

TEST_CASE("on the plateau the defect is i sqrt(lambda) (n-1)/r phi") {
  const WeylTestFunction phi = build_weyl_noncompact(flat3(), {20.0, 60.0, 200.0, 10.0, 2.0, 1});
  for (double r : {80.0, 120.0, 190.0}) {
    const WeylPoint pt = phi.at(r);
    const std::complex<double> expect = std::complex<double>(0.0, std::sqrt(2.0)) * (2.0 / r) * pt.phi;
    CHECK(std::abs(pt.defect - expect) < 1e-12 * std::abs(expect) + 1e-15);
  }
}

TEST_CASE("property: expansion matches a finite-difference laplacian of phi") {
  testing::Gen gen(51);
  const WeylTestFunction phi = build_weyl_noncompact(flat3(), {20.0, 60.0, 200.0, 10.0, 1.5, 1});
  for (int i = 0; i < 40; ++i) {
    const double r = gen.uniform(39.5, 240.5);
    const double h = 1e-3;
    auto f = [&](double x) { return phi.at(x).phi; };
    const auto d1 = (f(r + h) - f(r - h)) / (2.0 * h);
    const auto d2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
    const auto fd = d2 + (2.0 / r) * d1 + 1.5 * f(r);
    CHECK(std::abs(phi.at(r).defect - fd) < 1e-5);
  }
}

TEST_CASE("defect report invariants") {
  const DefectReport rep = eval_defect(build_weyl_noncompact(flat3(), {20.0, 60.0, 200.0, 10.0, 1.0, 1}));
  CHECK(rep.phi_norm > 0.0);
  CHECK(rep.defect_norm >= 0.0);
  CHECK(rep.quotient == doctest::Approx(rep.defect_norm / rep.phi_norm));
  CHECK(rep.support.lo <= 40.0);
  CHECK(rep.support.hi >= 220.0);
  CHECK(rep.quad_converged);
  CHECK(rep.quad_rel_error <= 1e-6);
  const auto pc = rep.param_columns();
  CHECK(pc[0] == 20.0);
  CHECK(pc[1] == 60.0);
  CHECK(pc[2] == 200.0);
}

TEST_CASE("flat example quotient") {
  const DefectReport rep = eval_defect(build_weyl_noncompact(flat3(), {100.0, 300.0, 3000.0, 10.0, 1.0, 1}));
  CHECK(rep.quotient < 0.05);
}

TEST_CASE("property: quotient decays like 1/R under proportional scaling") {
  std::vector<double> q;
  for (double R = 16.0; R <= 128.0; R *= 2.0) {
    q.push_back(eval_defect(build_weyl_noncompact(flat3(), {R, 3.0 * R, 6.0 * R, 10.0, 1.0, 1})).quotient);
  }
  for (std::size_t i = 0; i + 1 < q.size(); ++i) CHECK(std::log2(q[i] / q[i + 1]) >= 0.8);
}

TEST_CASE("term norms add up") {
  DefectOptions opt;
  opt.term_norms = true;
  const DefectReport rep = eval_defect(build_weyl_noncompact(flat3(), {20.0, 60.0, 200.0, 10.0, 1.0, 1}), opt);
  REQUIRE(rep.term_norms);
  const auto& t = *rep.term_norms;
  CHECK(rep.defect_norm <= t[0] + t[1] + t[2] + 1e-9 * rep.defect_norm);
  CHECK(t[2] < 1e-12 * rep.defect_norm + 1e-300);  // |grad r| = 1
}

TEST_CASE("defect norms are dominated by the instantiated right sides") {
  const double B = build_cutoff(0.0, 0.0).budget();
  for (double lambda : {0.0, 1.0, 4.0}) {
    const DefectReport rep = eval_defect(build_weyl_noncompact(flat3(), {26.0, 78.0, 300.0, 10.0, lambda, 1}));
    CHECK(noncompact_l1_bound(flat3(), rep, B).dominated);
  }
  const SolitonModel g = make_soliton(SolitonStructure::gaussian, 3, 0);
  const SolitonModel c = make_soliton(SolitonStructure::cylinder, 4, 2);
  for (double lambda : {0.0, 1.0, 2.0}) {
    const DefectReport r1 = eval_defect(build_weyl_soliton(g, {4.0, 12.0, 8.0, 10.0, lambda, 1}));
    CHECK(soliton_l1_bound(g, r1, B).dominated);
    const DefectReport r2 = eval_defect(build_weyl_soliton(c, {4.0, 12.0, 8.0, 10.0, lambda, 2}));
    CHECK(soliton_l2_bound(c, r2, B).dominated);
  }
}

TEST_CASE("property: annulus selection agrees with a brute-force scan") {
  testing::Gen gen(52);
  for (int i = 0; i < 40; ++i) {
    const double a = gen.uniform(1.0, 6.0), c = gen.uniform(0.1, 10.0);
    auto V = [&](double r) { return c * std::pow(r, a); };
    const double R = gen.uniform(1.0, 30.0);
    std::vector<double> ys;
    for (int j = 1; j <= 300; ++j) ys.push_back(j * gen.uniform(0.5, 2.0) + (ys.empty() ? 0.0 : ys.back()));
    const auto sel = select_annulus_infinite(V, R, ys);
    const auto sel_log = select_annulus_infinite_log([&](double r) { return std::log(V(r)); }, R, ys);
    std::size_t k = 0;
    while (k < ys.size() && !(V(ys[k] + R) <= 2.0 * V(ys[k]))) ++k;
    CHECK(sel.found == (k < ys.size()));
    if (sel.found) {
      CHECK(sel.index == k);
      CHECK(sel.value == ys[k]);
    }
    CHECK(sel_log.found == sel.found);
  }
  std::vector<double> ys;
  for (int j = 1; j <= 200; ++j) ys.push_back(j);
  CHECK_FALSE(select_annulus_infinite([](double r) { return std::exp(r); }, 10.0, ys).found);
}

TEST_CASE("finite-volume selection") {
  std::vector<double> xs;
  for (int j = 1; j <= 64; ++j) xs.push_back(20.0 + 2.0 * j);
  // Exponential tails never satisfy the rule; polynomial tails do.
  const double C = expansion_constant(build_cutoff(0.0, 0.0).budget(), 0.5);
  CHECK_FALSE(select_annulus_finite([](double r) { return std::exp(-r / 2.0); }, 10.0, 0.1, C, xs).found);
  CHECK(select_annulus_finite([](double r) { return 1.0 / (r * r); }, 10.0, 0.1, C, xs).found);
  // The vol - V form, on a grid where the tail is still resolved.
  const WarpedModel cusp = make_cusp(200.0);
  const double vol = warped_total_volume(cusp).value;
  std::vector<double> near;
  for (int j = 0; j <= 28; ++j) near.push_back(12.0 + j);
  CHECK_FALSE(select_annulus_finite([&](double r) { return vol - warped_tail_volume(cusp, r); }, vol, 10.0,
                                    0.1, C, near).found);
  CHECK(select_annulus_finite([](double r) { return 1.0 - 1.0 / (r * r); }, 1.0, 10.0, 0.1, C, xs).found);
}

TEST_CASE("certification") {
  const AnyModel flat = make_euclidean(3, 1e4);
  const auto c = certify_spectrum_point(flat, &flat3(), 1.0, 0.05, 10.0, 1);
  CHECK(c.certified);
  REQUIRE(c.certificate);
  CHECK(c.certificate->quotient < 0.05);
  CHECK(c.dominance_violations == 0);

  const auto h = sweep_spectrum(AnyModel{make_hyperbolic(3, 700.0)}, {0.5}, 0.05, 10.0, 2).at(0);
  CHECK_FALSE(h.certified);
  CHECK(h.best_quotient >= 0.1);
  CHECK_FALSE(h.binding_term.empty());
  CHECK_FALSE(h.failure_reason.empty());

  const auto g = certify_spectrum_point(AnyModel{make_soliton(SolitonStructure::gaussian, 3, 0)}, nullptr, 2.0,
                                        0.05, 10.0, 1);
  CHECK(g.certified);
}

TEST_CASE("sweeps are deterministic and thread-count independent") {
  const AnyModel flat = make_euclidean(3, 1e4);
  const auto a = sweep_spectrum(flat, {0.0, 0.5, 1.0, 2.0}, 0.05, 10.0, 1, 1);
  const auto b = sweep_spectrum(flat, {0.0, 0.5, 1.0, 2.0}, 0.05, 10.0, 1, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].lambda == b[i].lambda);
    CHECK(a[i].best_quotient == b[i].best_quotient);
  }
}

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "esslab/comparison.hpp"
#include "esslab/geometry.hpp"
#include "esslab/smoothing.hpp"
#include "esslab/spectrum_oracle.hpp"
#include "esslab/volume.hpp"
#include "esslab/weyl.hpp"

using namespace esslab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<double> kFlatLambdas{0.0, 0.5, 1.0, 2.0, 4.0};

Outcome criterion1() {
  Outcome o;
  const AnyModel model = make_euclidean(3, 1e4);
  const auto t0 = std::chrono::steady_clock::now();
  const auto certs = sweep_spectrum(model, kFlatLambdas, 0.05, 10.0, 1);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& c : certs) o.require(c.certified, "lambda " + fmt("%g", c.lambda) + " not certified");
  o.require(secs < 10.0, "runtime " + fmt("%.2f s", secs));

  const WarpedModel& wm = std::get<WarpedModel>(model);
  const SmoothedDistance sm = mollify_distance(wm, standard_delta(wm));
  std::vector<double> Rs, qs;
  for (double R = 16.0; R <= 128.0; R *= 2.0) {
    const WeylParamsNonCompact prm{R, 3.0 * R, 6.0 * R, 10.0, 1.0, 1};
    Rs.push_back(R);
    qs.push_back(eval_defect(build_weyl_noncompact(sm, prm)).quotient);
  }
  const double slope = loglog_slope(Rs, qs);
  o.require(slope <= -0.8, "scaling slope " + fmt("%.3f", slope));
  o.detail = (o.pass ? "" : o.detail + "; ") + fmt("runtime %.2f s", secs) + fmt(", slope %.3f", slope);
  return o;
}

Outcome criterion2() {
  Outcome o;
  const AnyModel gauss = make_soliton(SolitonStructure::gaussian, 3, 0);
  for (const auto& c : sweep_spectrum(gauss, {0.0, 1.0, 2.0}, 0.05, 10.0, 1)) {
    o.require(c.certified, "gaussian lambda " + fmt("%g", c.lambda) + " not certified");
    o.require(c.dominance_violations == 0, "gaussian dominance violations");
  }
  const AnyModel cyl = make_soliton(SolitonStructure::cylinder, 4, 2);
  const auto c = certify_spectrum_point(cyl, nullptr, 1.0, 0.1, 10.0, 2);
  o.require(c.certified, "cylinder lambda 1 p 2 not certified");
  o.require(c.dominance_violations == 0, "cylinder dominance violations");
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst_norm = 0.0, worst_grad = 0.0;
  std::vector<SolitonModel> models{make_soliton(SolitonStructure::gaussian, 3, 0),
                                   make_soliton(SolitonStructure::cylinder, 4, 2)};
  for (const auto& m : models) {
    for (double s = 0.0; s <= 100.0; s += 0.37) {
      worst_norm = std::max(worst_norm, std::abs(m.normalization_residual(s)));
      if (s > 0.0) {
        const double f = m.potential(s);
        worst_grad = std::max(worst_grad, std::abs(m.grad_rho_sq(s) - (1.0 - m.scalar_curvature() / f)));
      }
    }
    std::vector<double> grid;
    const double lo = m.rho_min() + 0.1;
    for (int i = 0; i < 400; ++i) grid.push_back(lo * std::pow(1e3 / lo, i / 399.0));
    const auto id = check_soliton_volume_identities(m, grid, 1e-10);
    o.require(id.pass, m.name() + " volume identity residual " + fmt("%.2e", id.max_rel_residual));

    std::mt19937_64 rng(20241018);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
      const double r = m.rho_min() + 1.0 + 500.0 * U(rng);
      const double x = r + 500.0 * U(rng);
      if (!check_lemma3(m, r, x).pass) ++violations;
    }
    o.require(violations == 0, m.name() + " volume bound violations " + std::to_string(violations));
  }
  o.require(worst_norm <= 1e-12, "normalization residual " + fmt("%.2e", worst_norm));
  o.require(worst_grad <= 1e-12, "|grad rho|^2 residual " + fmt("%.2e", worst_grad));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const AnyModel hyp = make_hyperbolic(3, 700.0);
  const auto c = sweep_spectrum(hyp, {0.5}, 0.05, 10.0, 2).at(0);
  o.require(!c.certified, "hyperbolic certified");
  o.require(c.best_quotient >= 0.1, "hyperbolic best quotient " + fmt("%.3g", c.best_quotient));
  const auto op = assemble_radial_operator(std::get<WarpedModel>(hyp), 100.0, 4000,
                                           BoundaryCondition::dirichlet);
  const double bottom = eig_tridiagonal_index(op, 0, 1).eigenvalues.at(0);
  o.require(std::abs(bottom - 1.0) <= 0.05, "hyperbolic bottom " + fmt("%.4f", bottom));

  const WarpedModel cusp = make_cusp(200.0);
  std::vector<double> ds, rs;
  for (double d = 1.0; d <= 64.0; d *= 2.0) ds.push_back(d);
  for (double r = 1.0; r <= 128.0; r *= 1.25) rs.push_back(r);
  const auto g = check_subexp_growth(cusp, 0.1, ds, rs);
  o.require(g.verdict == GrowthVerdict::violated, "cusp growth verdict " + to_string(g.verdict));
  const double C = expansion_constant(build_cutoff(0.0, 0.0).budget(), 0.5);
  std::vector<double> xs;
  for (int j = 1; j <= 64; ++j) xs.push_back(15.0 + 2.5 * j);
  const auto sel = select_annulus_finite([&](double r) { return warped_tail_volume(cusp, r); },
                                         10.0, 0.1, C, xs);
  o.require(!sel.found, "cusp finite annulus found");
  o.detail = (o.pass ? "" : o.detail + "; ") + fmt("best quotient %.3g", c.best_quotient) +
             fmt(", bottom %.4f", bottom);
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto flat = [](double) { return 0.0; };
  const auto op = assemble_from_log_weight(flat, 0.0, 1.0, 1000, BoundaryCondition::dirichlet,
                                           BoundaryCondition::dirichlet, "flat");
  const auto ev = eig_tridiagonal_index(op, 0, 2).eigenvalues;
  const double pi2 = M_PI * M_PI;
  o.require(std::abs(ev[0] / pi2 - 1.0) <= 1e-3, "lambda1 " + fmt("%.6f", ev[0]));
  o.require(std::abs(ev[1] / (4.0 * pi2) - 1.0) <= 1e-3, "lambda2 " + fmt("%.6f", ev[1]));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    TridiagonalOperator t;
    t.d.resize(50);
    t.e.resize(49);
    for (auto& v : t.d) v = 4.0 * U(rng);
    for (auto& v : t.e) v = U(rng);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(50, 50);
    for (int i = 0; i < 50; ++i) dense(i, i) = t.d[i];
    for (int i = 0; i < 49; ++i) dense(i, i + 1) = dense(i + 1, i) = t.e[i];
    const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(dense).eigenvalues();
    for (int k = 0; k < 8; ++k) {
      const double x = 6.0 * U(rng);
      const auto brute = static_cast<std::size_t>(std::count_if(lam.begin(), lam.end(),
                                                                [x](double v) { return v < x; }));
      if (count_below(t, x) != brute) ++mismatches;
    }
  }
  o.require(mismatches == 0, "inertia mismatches " + std::to_string(mismatches));

  double worst_order = 1e9;
  for (const WarpedModel& m : {make_euclidean(3, 1e3), make_hyperbolic(3, 700.0)}) {
    std::vector<double> lam;
    for (std::size_t N : {250u, 500u, 1000u}) {
      const auto a = assemble_radial_operator(m, 20.0, N, BoundaryCondition::dirichlet);
      lam.push_back(eig_tridiagonal_index(a, 0, 1, 1e-14).eigenvalues[0]);
    }
    const double order = std::log2(std::abs(lam[0] - lam[1]) / std::abs(lam[1] - lam[2]));
    worst_order = std::min(worst_order, order);
  }
  o.require(worst_order >= 1.8, "convergence order " + fmt("%.3f", worst_order));
  o.detail = (o.pass ? "" : o.detail + "; ") + fmt("order %.3f", worst_order);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const WarpedModel m = make_euclidean(3, 1e4);
  const auto rep = estimate_essential_spectrum(m, 4.0, {50.0, 100.0, 200.0}, 4000, 3);
  o.require(rep.fills, "fill-in verdict false");
  const FillInLevel& top = rep.levels.back();
  std::vector<double> eig = top.dirichlet;
  eig.push_back(top.next_dirichlet);
  for (const auto& c : sweep_spectrum(AnyModel{m}, kFlatLambdas, 0.05, 10.0, 2)) {
    o.require(c.certified, "p=2 lambda " + fmt("%g", c.lambda) + " not certified");
    double dist = 1e300;
    for (double e : eig) dist = std::min(dist, std::abs(e - c.lambda));
    o.require(dist <= top.max_gap, "lambda " + fmt("%g", c.lambda) + " far from oracle");
  }
  std::string ratios;
  for (double r : rep.gap_ratios) ratios += fmt(" %.3f", r);
  o.detail = (o.pass ? "" : o.detail + "; ") + "gap ratios" + ratios;
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto one = solve_comparison_ode(parse_delta_spec("const:1"), 10.0);
  double err = 0.0;
  for (double r = 1.0; r <= 10.0; r += 0.01) err = std::max(err, std::abs(one.u(r) - 1.0 / std::tanh(r)));
  o.require(err <= 1e-8, "coth error " + fmt("%.2e", err));

  const DeltaProfile d = parse_delta_spec("inv-sq:1");
  ComparisonOptions fine;
  fine.points_per_decade *= 2;
  const auto a = solve_comparison_ode(d, 1e3);
  const auto b = solve_comparison_ode(d, 1e3, fine);
  const double ua = a.u(1e3), ub = b.u(1e3);
  o.require(ua <= 0.01, "u(1000) " + fmt("%.4g", ua));
  o.require(std::abs(ua - ub) <= 1e-9, "resolution disagreement " + fmt("%.2e", std::abs(ua - ub)));

  o.require(envelope_from_model(make_euclidean(3, 1e3)).asymptotically_nonnegative, "euclidean flag");
  o.require(!envelope_from_model(make_hyperbolic(3, 700.0)).asymptotically_nonnegative, "hyperbolic flag");
  o.require(!envelope_from_model(make_cusp(200.0)).asymptotically_nonnegative, "cusp flag");
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const WarpedModel& m : {make_euclidean(3, 1e3), make_cusp(200.0), make_glued_cone(3, 20.0, 0.5, 1e3)}) {
    const SmoothedDistance sm = mollify_distance(m, standard_delta(m));
    std::size_t bad = 0;
    for (const auto& row : sm.rows()) {
      if (row.r > 2.0 && (row.bound_a_margin < 0.0 || row.bound_b_margin < 0.0)) ++bad;
    }
    o.require(bad == 0, m.name() + ": " + std::to_string(bad) + " grid points violate the bounds");
  }
  double err = 0.0;
  for (const WarpedModel& m : {make_euclidean(3, 1e3), make_hyperbolic(3, 300.0)}) {
    const SmoothedDistance sm = mollify_distance(m, standard_delta(m));
    for (const auto& row : sm.rows()) {
      err = std::max({err, std::abs(row.rho_tilde - row.rho), std::abs(row.d_rho_tilde - row.d_rho)});
    }
  }
  o.require(err <= 1e-12, "smooth reproduction error " + fmt("%.2e", err));
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::vector<double> ys;
  for (int j = 1; j <= 200; ++j) ys.push_back(static_cast<double>(j));
  auto cube = [](double r) { return r * r * r; };
  const auto sel = select_annulus_infinite(cube, 10.0, ys);
  double brute = -1.0;
  for (double y : ys) {
    if (cube(y + 10.0) <= 2.0 * cube(y)) {
      brute = y;
      break;
    }
  }
  o.require(sel.found && sel.value == brute, "cubic selection " + fmt("%g", sel.value));
  const auto ex = select_annulus_infinite([](double r) { return std::exp(r); }, 10.0, ys);
  o.require(!ex.found, "exponential selection found");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"weyl certification, flat case", criterion1},
      {"soliton certification", criterion2},
      {"soliton identities", criterion3},
      {"negative controls", criterion4},
      {"oracle correctness", criterion5},
      {"fill-in cross-check", criterion6},
      {"comparison ODE", criterion7},
      {"mollification", criterion8},
      {"annulus selection", criterion9},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.empty() ? "" : " :: ", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

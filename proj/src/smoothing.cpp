#include "esslab/smoothing.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "esslab/errors.hpp"
#include "esslab/quadrature.hpp"

namespace esslab {

double MollifierKernel::operator()(double t) const {
  if (std::abs(t) >= 1.0) return 0.0;
  const double q = 1.0 - t * t;
  return kNormalization * (q * q) * (q * q);
}

double MollifierKernel::derivative(double t) const {
  if (std::abs(t) >= 1.0) return 0.0;
  const double q = 1.0 - t * t;
  return -8.0 * kNormalization * t * q * q * q;
}

MollifiedValues mollify_at(const RadialProfile& rho, double r, double eps,
                           const MollifierKernel& kernel) {
  if (!(eps > 0.0)) throw InvalidInput("mollify_at: width must be positive");
  const double base = rho(r);
  // rho(y) - base carries rounding noise of order ulp(base); scaling it keeps the
  // absolute tolerance meaningful at large r.
  const double scale = std::max(1.0, std::abs(base));
  quad::BatchIntegrand<3> f = [&](std::span<const double> t, std::array<std::span<double>, 3> out) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      const double y = r - eps * t[j];
      const double slope = rho.d1(y);
      out[0][j] = kernel(t[j]) * (rho(y) - base) / scale;
      out[1][j] = kernel(t[j]) * slope;
      out[2][j] = kernel.derivative(t[j]) * slope;
    }
  };
  // Gauss-Kronrod error estimates can miss a jump of rho' that falls between nodes,
  // so declared corners become panel edges.
  std::vector<double> breaks{-1.0, 0.0, 1.0};
  for (double c : rho.corners()) {
    const double t = (r - c) / eps;
    if (t > -1.0 && t < 1.0 && t != 0.0) breaks.push_back(t);
  }
  std::sort(breaks.begin(), breaks.end());
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 4e-15;
  opt.max_panels = 4000;
  const auto res = quad::integrate_batch<3>(f, breaks, opt);
  return {base + scale * res.value[0], res.value[1], res.value[2] / eps};
}

double SmoothedDistance::eps_at(double r) const {
  const auto it = std::upper_bound(cell_start_.begin(), cell_start_.end(), r);
  const std::size_t i = it == cell_start_.begin() ? 0 : static_cast<std::size_t>(it - cell_start_.begin()) - 1;
  return cell_eps_[i];
}

MollifiedValues SmoothedDistance::evaluate(double r) const {
  const Interval dom = domain();
  if (!dom.contains(r)) {
    throw DomainError("smoothed distance: r=" + std::to_string(r) + " outside [" +
                      std::to_string(dom.lo) + ", " + std::to_string(dom.hi) + "]");
  }
  return mollify_at(rho_, r, eps_at(r), kernel_);
}

double SmoothedDistance::laplacian(double r) const {
  const MollifiedValues m = evaluate(r);
  return m.d2 + (model_.dimension() - 1) * model_.warp_log_derivative(r) * m.d1;
}

namespace {

double curvature_bound(const RadialProfile& rho, double r, int samples) {
  const Interval dom = rho.domain();
  const double lo = std::max(dom.lo, r - 1.0);
  const double hi = std::min(dom.hi, r + 1.0);
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / (samples - 1);
    m = std::max(m, std::abs(rho.d2(x)));
  }
  return m;
}

}  // namespace

SmoothedDistance mollify_profile(const WarpedModel& model, const RadialProfile& rho,
                                 const DeltaProfile& delta, const MollifierKernel& kernel,
                                 const SmoothingOptions& options) {
  const double lo = std::max(2.0, model.r_lo() + 1.0);
  const double hi = std::min(model.r_max(), rho.domain().hi) - 1.0;
  if (!(hi > lo)) throw InvalidInput("mollify: the region r > 2 is empty for this model");
  if (rho.domain().lo > lo - 1.0) throw InvalidInput("mollify: rho must be defined on [r-1, r+1]");
  if (options.grid_points < 2) throw InvalidInput("mollify: need at least 2 grid points");

  SmoothedDistance out(model, rho, delta, kernel);
  const std::size_t count = options.grid_points;
  const int n = model.dimension();
  out.cell_start_.resize(count);
  out.cell_eps_.resize(count);
  out.rows_.resize(count);

  SmoothingBoundReport& rep = out.report_;
  rep.min_margin_a = std::numeric_limits<double>::infinity();
  rep.min_margin_b = std::numeric_limits<double>::infinity();
  rep.sup_laplacian = -std::numeric_limits<double>::infinity();
  double worst = std::numeric_limits<double>::infinity();
  bool all_ok = true;

  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    const double r = i + 1 == count ? hi : lo * std::pow(hi / lo, t);
    const double rho_r = rho(r);
    const double drho_r = rho.d1(r);
    const double d = delta(rho_r);
    const double d_prev = delta(rho_r - 1.0);
    double eps = std::min(1.0, d / (4.0 * (1.0 + curvature_bound(rho, r, options.curvature_samples))));
    const double gl = model.warp_log_derivative(r);

    SmoothingRow row;
    for (int h = 0;; ++h) {
      const MollifiedValues m = mollify_at(rho, r, eps, kernel);
      row.r = r;
      row.eps = eps;
      row.rho = rho_r;
      row.d_rho = drho_r;
      row.rho_tilde = m.value;
      row.d_rho_tilde = m.d1;
      row.laplacian = m.d2 + (n - 1) * gl * m.d1;
      row.bound_a_margin = d - (std::abs(m.value - rho_r) + std::abs(m.d1 - drho_r));
      row.bound_b_margin = 2.0 * d_prev - row.laplacian;
      const bool ok = row.bound_a_margin >= 0.0 && row.bound_b_margin >= 0.0;
      if (ok || h >= options.max_halvings) {
        all_ok = all_ok && ok;
        break;
      }
      eps *= 0.5;
      ++rep.refinements;
    }
    out.cell_start_[i] = r;
    out.cell_eps_[i] = eps;
    out.rows_[i] = row;

    rep.sup_bound_a = std::max(rep.sup_bound_a, d - row.bound_a_margin);
    rep.sup_laplacian = std::max(rep.sup_laplacian, row.laplacian);
    rep.min_margin_a = std::min(rep.min_margin_a, row.bound_a_margin);
    rep.min_margin_b = std::min(rep.min_margin_b, row.bound_b_margin);
    const double m = std::min(row.bound_a_margin, row.bound_b_margin);
    if (m < worst) {
      worst = m;
      rep.worst_radius = r;
    }
  }
  rep.pass = all_ok;

  // The profile captures copies so it stays valid independently of `out`.
  auto starts = out.cell_start_;
  auto widths = out.cell_eps_;
  auto eval = [rho, kernel, starts, widths](double r) {
    const auto it = std::upper_bound(starts.begin(), starts.end(), r);
    const std::size_t i = it == starts.begin() ? 0 : static_cast<std::size_t>(it - starts.begin()) - 1;
    return mollify_at(rho, r, widths[i], kernel);
  };
  out.rho_tilde_ = RadialProfile::closed_form(
      "rho~", [eval](double r) { return eval(r).value; }, [eval](double r) { return eval(r).d1; },
      [eval](double r) { return eval(r).d2; }, Interval{lo, hi});
  return out;
}

SmoothedDistance mollify_distance(const WarpedModel& model, const DeltaProfile& delta,
                                  const MollifierKernel& kernel, const SmoothingOptions& options) {
  const Interval dom = model.warp().domain();
  auto rho = RadialProfile::closed_form(
      "r", [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; },
      Interval{dom.lo, model.r_max()});
  return mollify_profile(model, rho, delta, kernel, options);
}

DeltaProfile standard_delta(const WarpedModel& model, const ComparisonOptions& options) {
  const Envelope env = envelope_from_model(model);
  const ComparisonSolution sol = solve_comparison_ode(env.delta, model.r_max(), options);
  return normalize_envelope(env.delta, sol);
}

LemmaCompReport check_lemma_comp(const SmoothedDistance& smoothed,
                                 const ComparisonSolution& solution, double tol) {
  LemmaCompReport rep;
  const int n = smoothed.model().dimension();
  rep.inequality_holds = true;
  for (const SmoothingRow& row : smoothed.rows()) {
    if (row.r > solution.r_max) break;
    LemmaCompRow out;
    out.r = row.r;
    out.laplacian = row.laplacian;
    out.bound = (n - 1) * solution.u(row.r) + 2.0 * smoothed.delta()(row.r - 1.0);
    out.pass = out.laplacian <= out.bound;
    rep.inequality_holds = rep.inequality_holds && out.pass;
    rep.rows.push_back(out);
  }
  if (rep.rows.empty()) throw InvalidInput("check_lemma_comp: no grid points inside the solution range");
  const std::size_t tail = std::max<std::size_t>(1, rep.rows.size() / 20);
  rep.limsup_estimate = -std::numeric_limits<double>::infinity();
  for (std::size_t i = rep.rows.size() - tail; i < rep.rows.size(); ++i) {
    rep.limsup_estimate = std::max(rep.limsup_estimate, rep.rows[i].laplacian);
  }
  rep.limsup_nonpositive = rep.limsup_estimate <= tol;
  rep.pass = rep.inequality_holds && rep.limsup_nonpositive;
  return rep;
}

}  // namespace esslab

#include "esslab/weyl.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"
#include "esslab/quadrature.hpp"
#include "esslab/volume.hpp"

namespace esslab {

namespace {

double smoothstep(double t) { return t * t * t * (t * (6.0 * t - 15.0) + 10.0); }
double smoothstep_d1(double t) { return 30.0 * t * t * (t - 1.0) * (t - 1.0); }
double smoothstep_d2(double t) { return 60.0 * t * (2.0 * t - 1.0) * (t - 1.0); }

// Above this, densities are rescaled before integration.
constexpr double kLogWeightCeiling = 300.0;

}  // namespace

double CutoffProfile::operator()(double s) const {
  if (s <= s0_ - 1.0 || s >= s1_ + 1.0) return 0.0;
  if (s < s0_) return smoothstep(s - (s0_ - 1.0));
  if (s > s1_) return smoothstep(s1_ + 1.0 - s);
  return 1.0;
}

double CutoffProfile::d1(double s) const {
  if (s <= s0_ - 1.0 || s >= s1_ + 1.0) return 0.0;
  if (s < s0_) return smoothstep_d1(s - (s0_ - 1.0));
  if (s > s1_) return -smoothstep_d1(s1_ + 1.0 - s);
  return 0.0;
}

double CutoffProfile::d2(double s) const {
  if (s <= s0_ - 1.0 || s >= s1_ + 1.0) return 0.0;
  if (s < s0_) return smoothstep_d2(s - (s0_ - 1.0));
  if (s > s1_) return smoothstep_d2(s1_ + 1.0 - s);
  return 0.0;
}

CutoffProfile build_cutoff(double s0, double s1) {
  if (!(s1 >= s0)) throw InvalidInput("cutoff: need s1 >= s0");
  constexpr int kGrid = 100000;
  double budget = 0.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = static_cast<double>(i) / kGrid;
    budget = std::max(budget, std::abs(smoothstep_d1(t)) + std::abs(smoothstep_d2(t)));
  }
  return CutoffProfile(s0, s1, budget);
}

void WeylParamsNonCompact::validate() const {
  if (!(lambda >= 0.0)) throw InvalidInput("weyl: lambda must be >= 0");
  if (p != 1 && p != 2) throw InvalidInput("weyl: p must be 1 or 2");
  if (!(mu >= 0.0)) throw InvalidInput("weyl: mu must be >= 0");
  if (!(2.0 * scale_R > 2.0 * mu + 4.0)) throw InvalidInput("weyl: need 2R > 2 mu + 4");
  if (!(x > 2.0 * scale_R)) throw InvalidInput("weyl: need x > 2R");
  if (!(y > x + 2.0 * scale_R)) throw InvalidInput("weyl: need y > x + 2R");
}

void SolitonWeylParams::validate() const {
  if (!(lambda >= 0.0)) throw InvalidInput("weyl: lambda must be >= 0");
  if (p != 1 && p != 2) throw InvalidInput("weyl: p must be 1 or 2");
  if (!(mu >= 0.0)) throw InvalidInput("weyl: mu must be >= 0");
  if (!(a >= 2.0)) throw InvalidInput("weyl: need a >= 2");
  if (!(b >= 2.0 + mu)) throw InvalidInput("weyl: need b >= 2 + mu");
  if (!(l >= 2.0)) throw InvalidInput("weyl: need l >= 2");
}

WeylTestFunction::WeylTestFunction(WeylParams params, CutoffProfile cutoff, double scale,
                                   double offset, Coordinate coordinate, std::vector<double> breaks,
                                   double log_scale)
    : params_(std::move(params)),
      cutoff_(cutoff),
      scale_(scale),
      offset_(offset),
      coordinate_(std::move(coordinate)),
      breaks_(std::move(breaks)),
      log_scale_(log_scale) {}

double WeylTestFunction::lambda() const {
  return std::visit([](const auto& p) { return p.lambda; }, params_);
}

int WeylTestFunction::p() const {
  return std::visit([](const auto& p) { return p.p; }, params_);
}

WeylPoint WeylTestFunction::at(double t) const {
  const CoordinateSample c = coordinate_(t);
  const double lam = lambda();
  const double k = std::sqrt(lam);
  const double s = (c.tau - offset_) / scale_;
  const double psi = cutoff_(s);
  const double dpsi = cutoff_.d1(s);
  const double d2psi = cutoff_.d2(s);
  const double G = c.grad_sq;
  using cd = std::complex<double>;
  const cd phase = std::polar(1.0, k * c.tau);
  WeylPoint out;
  out.psi = psi;
  out.weight = c.weight;
  out.phi = psi * phase;
  out.terms[0] = phase * cd(d2psi * G / (scale_ * scale_), k * 2.0 * dpsi * G / scale_);
  out.terms[1] = phase * cd(dpsi / scale_, k * psi) * c.laplacian;
  out.terms[2] = lam * out.phi * (1.0 - G);
  out.defect = out.terms[0] + out.terms[1] + out.terms[2];
  return out;
}

void WeylTestFunction::evaluate_batch(std::span<const double> t, double* A, double* B, double* psi,
                                      double* w, std::array<double*, 6>* terms) const {
  const double lam = lambda();
  const double k = std::sqrt(lam);
  for (std::size_t j = 0; j < t.size(); ++j) {
    const CoordinateSample c = coordinate_(t[j]);
    const double s = (c.tau - offset_) / scale_;
    const double ps = cutoff_(s);
    const double dps = cutoff_.d1(s);
    const double d2ps = cutoff_.d2(s);
    const double G = c.grad_sq;
    // Phase-free forms: the moduli do not depend on e^{i k tau}.
    const double cut_re = d2ps * G / (scale_ * scale_);
    const double cut_im = k * 2.0 * dps * G / scale_;
    const double lap_re = dps / scale_ * c.laplacian;
    const double lap_im = k * ps * c.laplacian;
    const double grad_re = lam * ps * (1.0 - G);
    A[j] = cut_re + lap_re + grad_re;
    B[j] = cut_im + lap_im;
    psi[j] = ps;
    w[j] = c.weight;
    if (terms != nullptr) {
      (*terms)[0][j] = cut_re;
      (*terms)[1][j] = cut_im;
      (*terms)[2][j] = lap_re;
      (*terms)[3][j] = lap_im;
      (*terms)[4][j] = grad_re;
      (*terms)[5][j] = 0.0;
    }
  }
}

WeylTestFunction build_weyl_noncompact(const SmoothedDistance& smoothed,
                                       const WeylParamsNonCompact& params) {
  params.validate();
  const WarpedModel& model = smoothed.model();
  const double R = params.scale_R;
  const double lo = params.x - R - 1.0;
  const double hi = params.y + R + 1.0;
  const Interval dom = smoothed.domain();
  if (lo < dom.lo || hi > dom.hi) {
    throw DomainError("weyl: support [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] exceeds the smoothed range (model r_max " +
                      std::to_string(model.r_max()) + ")");
  }
  const double peak = model.log_weight(hi);
  const double log_scale = peak > kLogWeightCeiling ? peak : 0.0;
  const int n = model.dimension();
  const SmoothedDistance* sm = &smoothed;
  auto coord = [sm, n, log_scale](double r) {
    const MollifiedValues m = sm->evaluate(r);
    CoordinateSample c;
    c.tau = m.value;
    c.grad_sq = m.d1 * m.d1;
    c.laplacian = m.d2 + (n - 1) * sm->model().warp_log_derivative(r) * m.d1;
    c.weight = std::exp(sm->model().log_weight(r) - log_scale);
    return c;
  };
  std::vector<double> breaks{lo, params.x - R, params.x, params.y, params.y + R, hi};
  return WeylTestFunction(params, build_cutoff(params.x / R, params.y / R), R, 0.0, coord,
                          std::move(breaks), log_scale);
}

WeylTestFunction build_weyl_soliton(const SolitonModel& model, const SolitonWeylParams& params) {
  params.validate();
  const double top = params.b + (params.a + 2.0) * params.l;
  if (top > model.rho_max()) {
    throw DomainError("weyl: b + (a+2) l = " + std::to_string(top) + " exceeds rho_max " +
                      std::to_string(model.rho_max()));
  }
  if (params.b < model.rho_min()) throw DomainError("weyl: b below the minimum of rho");
  const RadialProfile lap = soliton_delta_rho(model);
  const double R = model.scalar_curvature();
  auto coord = [model, lap, R](double rho) {
    CoordinateSample c;
    c.tau = rho;
    c.grad_sq = 1.0 - 4.0 * R / (rho * rho);  // 1 - R/f
    c.laplacian = lap(rho);
    c.weight = soliton_volume_derivative(model, rho);
    return c;
  };
  std::vector<double> breaks{params.b, params.b + params.l, params.b + (params.a + 1.0) * params.l,
                             top};
  return WeylTestFunction(params, build_cutoff(1.0, params.a + 1.0), params.l, params.b, coord,
                          std::move(breaks), 0.0);
}

std::array<double, 3> DefectReport::param_columns() const {
  if (const auto* nc = std::get_if<WeylParamsNonCompact>(&params)) {
    return {nc->scale_R, nc->x, nc->y};
  }
  const auto& s = std::get<SolitonWeylParams>(params);
  return {s.l, s.b, s.a};
}

DefectReport eval_defect(const WeylTestFunction& phi, const DefectOptions& options) {
  const int p = phi.p();
  DefectReport rep;
  rep.lambda = phi.lambda();
  rep.p = p;
  rep.params = phi.params();
  rep.support = {phi.breaks().front(), phi.breaks().back()};
  rep.log_scale = phi.log_scale();

  constexpr std::size_t kMax = quad::kPanelPoints;
  quad::BatchIntegrand<2> f = [&](std::span<const double> t, std::array<std::span<double>, 2> out) {
    if (t.size() > kMax) throw InvalidInput("weyl: batch larger than a panel");
    std::array<double, kMax> A{}, B{}, psi{}, w{};
    phi.evaluate_batch(t, A.data(), B.data(), psi.data(), w.data());
    kernels::defect_moduli(t.size(), A.data(), B.data(), psi.data(), w.data(), p, out[0].data(),
                           out[1].data());
  };
  quad::Options opt;
  opt.rel_tol = options.rel_tol;
  opt.max_panels = options.max_panels;
  const auto res = quad::integrate_batch<2>(f, phi.breaks(), opt);
  if (!(res.value[1] > 0.0)) throw InvalidInput("weyl: phi has zero norm (empty plateau)");
  const double inv_p = 1.0 / p;
  rep.defect_norm = std::pow(std::max(0.0, res.value[0]), inv_p);
  rep.phi_norm = std::pow(res.value[1], inv_p);
  rep.quotient = rep.defect_norm / rep.phi_norm;
  const double e0 = res.value[0] > 0.0 ? res.error[0] / res.value[0] : 0.0;
  rep.quad_rel_error = std::max(e0, res.error[1] / res.value[1]);
  rep.quad_converged = res.converged;

  if (options.term_norms) {
    quad::BatchIntegrand<3> g = [&](std::span<const double> t, std::array<std::span<double>, 3> out) {
      std::array<double, kMax> A{}, B{}, psi{}, w{}, scratch{};
      std::array<std::array<double, kMax>, 6> parts{};
      std::array<double*, 6> ptr{};
      for (std::size_t i = 0; i < 6; ++i) ptr[i] = parts[i].data();
      phi.evaluate_batch(t, A.data(), B.data(), psi.data(), w.data(), &ptr);
      for (std::size_t k = 0; k < 3; ++k) {
        kernels::defect_moduli(t.size(), parts[2 * k].data(), parts[2 * k + 1].data(), psi.data(),
                               w.data(), p, out[k].data(), scratch.data());
      }
    };
    quad::Options topt;
    topt.rel_tol = 1e-4;
    topt.abs_tol = 1e-10 * res.value[1];
    topt.max_panels = options.max_panels;
    const auto tr = quad::integrate_batch<3>(g, phi.breaks(), topt);
    std::array<double, 3> norms{};
    for (std::size_t k = 0; k < 3; ++k) norms[k] = std::pow(std::max(0.0, tr.value[k]), inv_p);
    rep.term_norms = norms;
  }
  return rep;
}

std::string binding_term_name(std::size_t index) {
  static const char* names[] = {"cutoff-derivative", "laplacian", "gradient-defect"};
  return index < 3 ? names[index] : "unknown";
}

double expansion_constant(double budget, double lambda) {
  return std::max({budget, std::sqrt(lambda) * budget, lambda, 1.0});
}

BoundCheck noncompact_l1_bound(const SmoothedDistance& smoothed, const DefectReport& report,
                               double budget) {
  const auto* prm = std::get_if<WeylParamsNonCompact>(&report.params);
  if (prm == nullptr || report.p != 1) {
    throw InvalidInput("noncompact L1 bound: needs a non-compact report with p = 1");
  }
  const WarpedModel& model = smoothed.model();
  const double C = expansion_constant(budget, report.lambda);
  const double R = prm->scale_R;
  const double a = prm->x - R;
  const double b = prm->y + R;
  const double ls = report.log_scale;
  const double annulus = std::exp(warped_log_annulus(model, a, b) - ls);
  auto integrand = [&](double r) {
    return std::abs(smoothed.laplacian(r)) * std::exp(model.log_weight(r) - ls);
  };
  quad::Options opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-300;
  const double lap_mass = quad::integrate(integrand, a, b, opt).value[0];
  BoundCheck out;
  out.name = "noncompact-l1";
  out.lhs = report.defect_norm;
  out.rhs = (C / R + C * smoothed.delta()(a)) * annulus + C * lap_mass;
  out.dominated = out.lhs <= out.rhs;
  return out;
}

BoundCheck soliton_l1_bound(const SolitonModel& model, const DefectReport& report, double budget) {
  const auto* prm = std::get_if<SolitonWeylParams>(&report.params);
  if (prm == nullptr || report.p != 1) throw InvalidInput("soliton L1 bound: needs a soliton report with p = 1");
  const double C = expansion_constant(budget, report.lambda);
  const double n = model.dimension();
  const double top = prm->b + (prm->a + 2.0) * prm->l;
  BoundCheck out;
  out.name = "soliton-l1";
  out.lhs = report.defect_norm;
  out.rhs = (C / prm->l + 2.0 * n * C / prm->b) *
                (soliton_volume(model, top) - soliton_volume(model, prm->b)) +
            C * soliton_volume_derivative(model, prm->b) +
            4.0 * report.lambda / (prm->b * prm->b) * soliton_chi(model, top);
  out.dominated = out.lhs <= out.rhs;
  return out;
}

BoundCheck soliton_l2_bound(const SolitonModel& model, const DefectReport& report, double budget) {
  const auto* prm = std::get_if<SolitonWeylParams>(&report.params);
  if (prm == nullptr || report.p != 2) throw InvalidInput("soliton L2 bound: needs a soliton report with p = 2");
  const double C = expansion_constant(budget, report.lambda);
  const double C2 = 3.0 * C * C;  // (t1 + t2 + t3)^2 <= 3 (t1^2 + t2^2 + t3^2)
  const double n = model.dimension();
  const double b = prm->b;
  const double l = prm->l;
  const double top = b + (prm->a + 2.0) * l;
  const double max_R_rho2 = model.scalar_curvature() / (b * b);
  BoundCheck out;
  out.name = "soliton-l2";
  out.lhs = report.defect_norm * report.defect_norm;
  out.rhs = C2 * (1.0 / (l * l) + n * n / (b * b) + 2.0 * n * max_R_rho2) * soliton_volume(model, top) +
            4.0 * C2 / (b * b) * soliton_chi(model, top);
  out.dominated = out.lhs <= out.rhs;
  return out;
}

AnnulusSelection select_annulus_infinite(const std::function<double(double)>& V, double scale_R,
                                         const std::vector<double>& y_grid) {
  AnnulusSelection out;
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    const double y = y_grid[i];
    if (V(y + scale_R) <= 2.0 * V(y)) {
      out.found = true;
      out.value = y;
      out.index = i;
      return out;
    }
  }
  return out;
}

AnnulusSelection select_annulus_infinite_log(const std::function<double(double)>& log_V,
                                             double scale_R, const std::vector<double>& y_grid) {
  AnnulusSelection out;
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    const double y = y_grid[i];
    if (log_V(y + scale_R) <= std::log(2.0) + log_V(y)) {
      out.found = true;
      out.value = y;
      out.index = i;
      return out;
    }
  }
  return out;
}

AnnulusSelection select_annulus_finite(const std::function<double(double)>& f, double scale_R,
                                       double eps, double C, const std::vector<double>& x_grid) {
  AnnulusSelection out;
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    const double z = x - scale_R;
    const double h = 1e-4 * std::max(1.0, std::abs(z));
    const double fp = (f(z + h) - f(z - h)) / (2.0 * h);
    if (2.0 * eps * f(z) - C * fp <= 4.0 * eps * f(x)) {
      out.found = true;
      out.value = x;
      out.index = i;
      return out;
    }
  }
  return out;
}

AnnulusSelection select_annulus_finite(const std::function<double(double)>& V, double vol_M,
                                       double scale_R, double eps, double C,
                                       const std::vector<double>& x_grid) {
  return select_annulus_finite([&](double r) { return vol_M - V(r); }, scale_R, eps, C, x_grid);
}

namespace {

struct Schedule {
  const CertifyOptions& opt;
  double lambda, eps, mu;
  int p;
  Certification& cert;

  // Returns true once certified.
  bool record(DefectReport rep, bool annulus_found, std::optional<BoundCheck> bound) {
    if (bound && !bound->dominated) ++cert.dominance_violations;
    cert.best_quotient = std::min(cert.best_quotient, rep.quotient);
    const bool ok = annulus_found && rep.quotient < eps;
    cert.attempts.push_back({rep, annulus_found, std::move(bound)});
    if (ok) {
      cert.certified = true;
      cert.certificate = cert.attempts.back().report;
    }
    return ok;
  }
};

void certify_warped(const SmoothedDistance& sm, Schedule& s) {
  const WarpedModel& model = sm.model();
  const Interval dom = sm.domain();
  const double budget = build_cutoff(0.0, 0.0).budget();
  const double C = expansion_constant(budget, s.lambda);
  const TotalVolume total = warped_total_volume(model);
  auto log_V = [&model](double r) { return warped_log_volume(model, r); };
  auto tail = [&model](double r) { return warped_tail_volume(model, r); };

  auto evaluate = [&](double R, double x, double y) {
    WeylParamsNonCompact prm{R, x, y, s.mu, s.lambda, s.p};
    DefectReport rep = eval_defect(build_weyl_noncompact(sm, prm), s.opt.defect);
    std::optional<BoundCheck> bound;
    if (s.p == 1) bound = noncompact_l1_bound(sm, rep, budget);
    return std::pair{rep, bound};
  };

  bool any_annulus = false;
  for (double R = s.mu + 3.0; R <= s.opt.budget; R *= 2.0) {
    const double x0 = 3.0 * R;
    if (x0 + 3.0 * R + R + 1.0 > dom.hi) break;
    if (!total.finite) {
      std::vector<double> grid;
      for (std::size_t j = 1; j <= s.opt.annulus_grid; ++j) {
        const double y = x0 + 2.0 * R + static_cast<double>(j) * R;
        if (y + R + 1.0 > dom.hi) break;
        grid.push_back(y);
      }
      const AnnulusSelection sel = select_annulus_infinite_log(log_V, R, grid);
      any_annulus = any_annulus || sel.found;
      const double y = sel.found ? sel.value : grid.front();
      auto [rep, bound] = evaluate(R, x0, y);
      if (s.record(rep, sel.found, bound)) return;
    } else {
      std::vector<double> grid;
      for (std::size_t j = 1; j <= s.opt.annulus_grid; ++j) {
        const double x = 2.0 * R + static_cast<double>(j) * R;
        if (x + 3.0 * R + R + 1.0 > dom.hi) break;
        grid.push_back(x);
      }
      const AnnulusSelection sel = select_annulus_finite(tail, R, s.eps, C, grid);
      any_annulus = any_annulus || sel.found;
      double x = x0, y = x0 + 3.0 * R;
      if (sel.found) {
        x = sel.value;
        y = x + 3.0 * R;
        // Large enough that ||phi||_1 >= f(x)/2.
        const double fx = tail(x);
        for (double cand = y; cand + R + 1.0 <= dom.hi; cand += R) {
          y = cand;
          if (tail(cand) <= 0.5 * fx) break;
        }
      }
      auto [rep, bound] = evaluate(R, x, y);
      if (s.record(rep, sel.found, bound)) return;
    }
  }
  if (s.cert.attempts.empty()) {
    s.cert.failure_reason = "no admissible parameters fit inside the model range";
  } else if (!any_annulus) {
    s.cert.failure_reason = total.finite ? "finite-volume annulus selection found no x"
                                         : "annulus selection found no y (volume grows too fast)";
  } else {
    s.cert.failure_reason = "parameter budget exhausted";
  }
}

void certify_soliton(const SolitonModel& model, Schedule& s) {
  const double budget = build_cutoff(0.0, 0.0).budget();
  auto V = [&model](double r) { return soliton_volume(model, r); };
  bool any_annulus = false;
  for (double l = 2.0; l <= s.opt.budget; l *= 2.0) {
    const double b = std::max({2.0 + s.mu, l, model.rho_min()});
    if (b + 4.0 * l > model.rho_max()) break;
    AnnulusSelection sel;
    for (std::size_t a = 2; a < 2 + s.opt.annulus_grid; ++a) {
      const double ad = static_cast<double>(a);
      if (b + (ad + 2.0) * l > model.rho_max()) break;
      if (V(b + (ad + 2.0) * l) <= 2.0 * V(b + (ad + 1.0) * l)) {
        sel.found = true;
        sel.value = ad;
        break;
      }
    }
    any_annulus = any_annulus || sel.found;
    SolitonWeylParams prm{sel.found ? sel.value : 2.0, b, l, s.mu, s.lambda, s.p};
    DefectReport rep = eval_defect(build_weyl_soliton(model, prm), s.opt.defect);
    std::optional<BoundCheck> bound =
        s.p == 1 ? soliton_l1_bound(model, rep, budget) : soliton_l2_bound(model, rep, budget);
    if (s.record(rep, sel.found, bound)) return;
  }
  if (s.cert.attempts.empty()) {
    s.cert.failure_reason = "no admissible parameters fit inside the model range";
  } else if (!any_annulus) {
    s.cert.failure_reason = "annulus selection found no a";
  } else {
    s.cert.failure_reason = "parameter budget exhausted";
  }
}

}  // namespace

Certification certify_spectrum_point(const AnyModel& model, const SmoothedDistance* smoothed,
                                     double lambda, double eps, double mu, int p,
                                     const CertifyOptions& options) {
  if (!(lambda >= 0.0)) throw InvalidInput("certify: lambda must be >= 0");
  if (!(eps > 0.0)) throw InvalidInput("certify: eps must be positive");
  if (!(mu >= 0.0)) throw InvalidInput("certify: mu must be >= 0");
  if (p != 1 && p != 2) throw InvalidInput("certify: p must be 1 or 2");
  Certification cert;
  cert.lambda = lambda;
  cert.p = p;
  cert.eps = eps;
  Schedule sched{options, lambda, eps, mu, p, cert};
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    if (smoothed == nullptr) throw InvalidInput("certify: warped models need a smoothed distance");
    if (smoothed->model().name() != w->name()) {
      throw InvalidInput("certify: smoothed distance belongs to a different model");
    }
    certify_warped(*smoothed, sched);
  } else {
    certify_soliton(std::get<SolitonModel>(model), sched);
  }
  if (!cert.certified && !cert.attempts.empty()) {
    const auto best = std::min_element(cert.attempts.begin(), cert.attempts.end(),
                                       [](const auto& a, const auto& b) {
                                         return a.report.quotient < b.report.quotient;
                                       });
    DefectOptions opt = options.defect;
    opt.term_norms = true;
    const WeylTestFunction phi =
        std::holds_alternative<WeylParamsNonCompact>(best->report.params)
            ? build_weyl_noncompact(*smoothed, std::get<WeylParamsNonCompact>(best->report.params))
            : build_weyl_soliton(std::get<SolitonModel>(model),
                                 std::get<SolitonWeylParams>(best->report.params));
    const DefectReport with_terms = eval_defect(phi, opt);
    const auto& t = *with_terms.term_norms;
    cert.binding_term = binding_term_name(
        static_cast<std::size_t>(std::max_element(t.begin(), t.end()) - t.begin()));
  }
  return cert;
}

std::vector<Certification> sweep_spectrum(const AnyModel& model, const std::vector<double>& lambdas,
                                          double eps, double mu, int p, unsigned threads,
                                          const CertifyOptions& options) {
  std::optional<SmoothedDistance> smoothed;
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    smoothed.emplace(mollify_distance(*w, standard_delta(*w)));
  }
  const SmoothedDistance* sm = smoothed ? &*smoothed : nullptr;
  std::vector<Certification> out(lambdas.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < lambdas.size(); i = next.fetch_add(1)) {
      try {
        out[i] = certify_spectrum_point(model, sm, lambdas[i], eps, mu, p, options);
      } catch (const std::exception& e) {
        out[i] = Certification{};
        out[i].lambda = lambdas[i];
        out[i].p = p;
        out[i].eps = eps;
        out[i].failure_reason = std::string("error: ") + e.what();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace esslab

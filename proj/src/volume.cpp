#include "esslab/volume.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "esslab/errors.hpp"
#include "esslab/quadrature.hpp"

namespace esslab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

quad::Options volume_quad() {
  quad::Options opt;
  opt.rel_tol = 1e-12;
  return opt;
}

// Log of the area of a geodesic cap of angular radius theta in the unit k-sphere.
// Worked in logs because far out on a growing warp theta underflows any direct form.
double log_sphere_cap_area(int k, double theta) {
  theta = std::clamp(theta, 0.0, std::numbers::pi);
  if (!(theta > 0.0)) return kNegInf;
  if (k == 1) return std::log(2.0 * theta);
  // 1 - cos(theta) = 2 sin^2(theta / 2) without cancellation.
  if (k == 2) return std::log(4.0 * std::numbers::pi) + 2.0 * std::log(std::sin(0.5 * theta));
  const double log_c = std::log(unit_sphere_area(k - 1));
  // sin^(k-1) phi ~ phi^(k-1) (1 - (k-1) phi^2 / 6).
  if (theta < 1e-4) {
    return log_c + k * std::log(theta) - std::log(static_cast<double>(k)) -
           (k - 1) * k * theta * theta / (6.0 * (k + 2));
  }
  const auto r = quad::integrate([k](double phi) { return std::pow(std::sin(phi), k - 1); }, 0.0,
                                 theta, volume_quad());
  return log_c + std::log(r.value[0]);
}

// Slope of log w at the far end; strongly negative slopes signal finite volume.
double far_log_weight_slope(const WarpedModel& model) {
  return (model.dimension() - 1) * model.warp_log_derivative(model.r_max());
}

constexpr double kFiniteSlope = -1e-2;

}  // namespace

double warped_log_annulus(const WarpedModel& model, double a, double b) {
  a = std::max(a, model.r_lo());
  b = std::min(b, model.r_max());
  if (!(b > a)) return kNegInf;
  auto lw = [&model](double s) {
    const double g = model.warp()(s);
    return g > 0.0 ? model.log_weight(s) : kNegInf;
  };
  // Split at corners of the warp, then combine the pieces in the log domain.
  std::vector<double> edges{a};
  for (double c : model.warp().corners()) {
    if (c > a && c < b) edges.push_back(c);
  }
  edges.push_back(b);
  double acc = kNegInf;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double piece = quad::log_integral_exp(lw, edges[i], edges[i + 1], volume_quad());
    const double hi = std::max(acc, piece);
    if (hi == kNegInf) continue;
    acc = hi + std::log(std::exp(acc - hi) + std::exp(piece - hi));
  }
  return acc;
}

double warped_log_volume(const WarpedModel& model, double r) {
  return warped_log_annulus(model, model.r_lo(), r);
}

TotalVolume warped_total_volume(const WarpedModel& model) {
  TotalVolume out;
  const double slope = far_log_weight_slope(model);
  if (!(slope < kFiniteSlope)) return out;
  out.finite = true;
  out.value = std::exp(warped_log_volume(model, model.r_max())) +
              model.weight(model.r_max()) / -slope;
  return out;
}

double warped_tail_volume(const WarpedModel& model, double r) {
  const double slope = far_log_weight_slope(model);
  if (!(slope < kFiniteSlope)) {
    throw InvalidInput("tail volume requested on a model of infinite volume");
  }
  const double far = model.weight(model.r_max()) / -slope;
  // Beyond r_max the tail is the exponential model used for the estimate itself.
  if (r >= model.r_max()) return far * std::exp(slope * (r - model.r_max()));
  return std::exp(warped_log_annulus(model, r, model.r_max())) + far;
}

double soliton_volume(const SolitonModel& model, double rho) {
  if (rho <= model.rho_min()) return 0.0;
  const double s = model.s_of_rho(rho);
  const int m = model.flat_dim();
  return model.sphere_factor_volume() * unit_ball_volume(m) * std::pow(s, m);
}

double soliton_volume_derivative(const SolitonModel& model, double rho) {
  if (rho <= model.rho_min()) return 0.0;
  const double s = model.s_of_rho(rho);
  const int m = model.flat_dim();
  // dV/drho = |S^k| * omega_{m-1} s^{m-1} * (rho / s)
  return model.sphere_factor_volume() * unit_sphere_area(m - 1) * std::pow(s, m - 2) * rho;
}

double soliton_chi(const SolitonModel& model, double rho) {
  return model.scalar_curvature() * soliton_volume(model, rho);
}

VolumeData compute_volume(const AnyModel& model, const std::vector<double>& r_grid) {
  if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
    throw InvalidInput("compute_volume: radius grid must be sorted");
  }
  VolumeData out;
  out.r = r_grid;
  if (const auto* w = std::get_if<WarpedModel>(&model)) {
    double prev_r = w->r_lo();
    double log_v = kNegInf;
    for (double r : r_grid) {
      if (r > w->r_max()) throw DomainError("compute_volume: radius beyond r_max");
      if (r > prev_r) {
        log_v = log_add(log_v, warped_log_annulus(*w, prev_r, r));
        prev_r = r;
      }
      out.log_V.push_back(log_v);
      out.V.push_back(std::exp(log_v));
      out.dV.push_back(r >= w->r_lo() ? w->weight(r) : 0.0);
    }
    const TotalVolume tv = warped_total_volume(*w);
    out.finite_total = tv.finite;
    out.total_volume = tv.value;
    return out;
  }
  const auto& s = std::get<SolitonModel>(model);
  for (double r : r_grid) {
    const double v = soliton_volume(s, r);
    out.V.push_back(v);
    out.log_V.push_back(v > 0.0 ? std::log(v) : kNegInf);
    out.dV.push_back(soliton_volume_derivative(s, r));
    out.chi.push_back(soliton_chi(s, r));
  }
  return out;
}

std::string to_string(GrowthVerdict verdict) {
  switch (verdict) {
    case GrowthVerdict::satisfied_on_surrogate: return "satisfied-on-surrogate";
    case GrowthVerdict::violated: return "violated";
    case GrowthVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double log_ball_upper_bound(const WarpedModel& model, double d, double r) {
  if (d == 0.0 && model.has_pole()) return warped_log_volume(model, std::min(r, model.r_max()));
  return warped_log_annulus(model, d - r, d + r);
}

double log_ball_lower_bound(const WarpedModel& model, double d, double r) {
  if (d == 0.0 && model.has_pole()) return warped_log_volume(model, std::min(r, model.r_max()));
  const int n = model.dimension();
  const double log_omega = std::log(model.sphere_area());
  auto integrand = [&](double s) {
    const double g = model.warp()(s);
    if (!(g > 0.0)) return kNegInf;
    const double reach = r - std::abs(s - d);
    if (!(reach > 0.0)) return kNegInf;
    return model.log_weight(s) - log_omega + log_sphere_cap_area(n - 1, reach / g);
  };
  const double a = std::max(model.r_lo(), d - r);
  const double b = std::min(model.r_max(), d + r);
  if (!(b > a)) return kNegInf;
  // reach = r - |s - d| has a corner at s = d.
  std::vector<double> breaks{a, b};
  if (d > a && d < b) breaks.insert(breaks.begin() + 1, d);
  double total = kNegInf;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total = log_add(total, quad::log_integral_exp(integrand, breaks[i], breaks[i + 1], volume_quad()));
  }
  return total;
}

namespace {

// Log-slope of y against r over the last third of a family.
double tail_slope(const std::vector<GrowthWitness>& fam, double GrowthWitness::*field) {
  if (fam.size() < 3) return 0.0;
  const std::size_t start = fam.size() - std::max<std::size_t>(2, fam.size() / 3);
  const auto& a = fam[start];
  const auto& b = fam.back();
  if (!(b.r > a.r)) return 0.0;
  return (b.*field - a.*field) / (b.r - a.r);
}

}  // namespace

GrowthReport check_subexp_growth(const WarpedModel& model, double eps,
                                 const std::vector<double>& basepoint_distances,
                                 const std::vector<double>& r_grid) {
  if (!(eps > 0.0)) throw InvalidInput("growth check: eps must be positive");
  GrowthReport rep;
  rep.eps = eps;
  const double lo = model.r_lo();
  const double hi = model.r_max();

  std::vector<std::vector<GrowthWitness>> families;
  auto unit_bounds = [&](double d) {
    return std::pair{log_ball_lower_bound(model, d, 1.0), log_ball_upper_bound(model, d, 1.0)};
  };
  auto make = [&](const std::string& family, double d, double r, double lb1, double ub1) {
    GrowthWitness w;
    w.family = family;
    w.d = d;
    w.r = r;
    w.log_ratio_upper = log_ball_upper_bound(model, d, r) - lb1 - eps * r;
    w.log_ratio_lower = log_ball_lower_bound(model, d, r) - ub1 - eps * r;
    return w;
  };

  for (double d : basepoint_distances) {
    const bool at_pole = d == 0.0 && model.has_pole();
    if (!at_pole && !(d - 1.0 >= lo)) continue;
    const auto [lb1, ub1] = unit_bounds(d);
    std::vector<GrowthWitness> fam;
    for (double r : r_grid) {
      if (r < 1.0 || d + r > hi) continue;
      fam.push_back(make("fixed-d", d, r, lb1, ub1));
    }
    if (!fam.empty()) families.push_back(std::move(fam));
  }
  // Basepoints sliding outward with balls that always reach back to the inner end.
  {
    std::vector<GrowthWitness> fam;
    for (double d : r_grid) {
      if (!(d - 1.0 >= lo)) continue;
      const double r = d - lo + 1.0;
      if (d + r > hi) continue;
      const auto [lb1, ub1] = unit_bounds(d);
      fam.push_back(make("fixed-offset", d, r, lb1, ub1));
    }
    if (!fam.empty()) families.push_back(std::move(fam));
  }
  if (families.empty()) throw InvalidInput("growth check: no (basepoint, radius) pair fits in the model");

  bool violated = false;
  bool all_bounded = true;
  double best = kNegInf;
  for (const auto& fam : families) {
    for (const auto& w : fam) {
      rep.witnesses.push_back(w);
      best = std::max(best, w.log_ratio_upper);
    }
    const double grow = fam.back().log_ratio_lower - fam.front().log_ratio_lower;
    if (tail_slope(fam, &GrowthWitness::log_ratio_lower) >= 0.5 * eps && grow > std::log(100.0)) {
      violated = true;
      rep.violations.push_back(fam.back());
    }
    if (tail_slope(fam, &GrowthWitness::log_ratio_upper) > 0.0) all_bounded = false;
  }
  rep.best_constant = std::exp(best);
  if (violated) {
    rep.verdict = GrowthVerdict::violated;
  } else if (all_bounded) {
    rep.verdict = GrowthVerdict::satisfied_on_surrogate;
  } else {
    rep.verdict = GrowthVerdict::inconclusive;
  }
  return rep;
}

Lemma1Report check_lemma1(const SmoothedDistance& smoothed, double R1, double r,
                          bool finite_case) {
  const WarpedModel& model = smoothed.model();
  const Interval dom = smoothed.domain();
  if (!(r >= R1)) throw InvalidInput("lemma1: need r >= R1");
  if (!dom.contains(R1) || !dom.contains(r)) {
    throw DomainError("lemma1: R1 and r must lie in the smoothed range");
  }
  const TotalVolume tv = warped_total_volume(model);
  if (finite_case && !tv.finite) throw InvalidInput("lemma1: finite-volume case on an infinite-volume model");

  Lemma1Report rep;
  rep.finite_case = finite_case;
  double sup = std::max(0.0, smoothed.laplacian(R1));
  for (const auto& row : smoothed.rows()) {
    if (row.r >= R1) sup = std::max(sup, row.laplacian);
  }
  rep.eps = sup;

  auto integrand = [&](double s) { return std::abs(smoothed.laplacian(s)) * model.weight(s); };
  quad::Options opt;
  opt.rel_tol = 1e-8;
  opt.abs_tol = 1e-300;
  if (!finite_case) {
    rep.lhs = r > R1 ? quad::integrate(integrand, R1, r, opt).value[0] : 0.0;
    rep.rhs = 2.0 * rep.eps * std::exp(warped_log_volume(model, r)) + 2.0 * model.weight(R1);
  } else {
    const double end = dom.hi;
    const double body = end > r ? quad::integrate(integrand, r, end, opt).value[0] : 0.0;
    // Beyond the smoothed range: |lap rho~| at the end times the remaining mass.
    rep.lhs = body + std::abs(smoothed.laplacian(end)) * warped_tail_volume(model, end);
    rep.rhs = 2.0 * rep.eps * warped_tail_volume(model, r) + 2.0 * model.weight(r);
  }
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

SolitonIdentityReport check_soliton_volume_identities(const SolitonModel& model,
                                                      const std::vector<double>& r_grid,
                                                      double tol) {
  SolitonIdentityReport rep;
  const int n = model.dimension();
  const double R = model.scalar_curvature();
  for (double r : r_grid) {
    if (!(r > model.rho_min())) continue;
    const double V = soliton_volume(model, r);
    const double dV = soliton_volume_derivative(model, r);
    const double chi = soliton_chi(model, r);
    const double dchi = R * dV;
    SolitonIdentityRow row;
    row.r = r;
    row.lhs = n * V - 2.0 * chi;
    row.rhs = r * dV - (4.0 / r) * dchi;
    const double scale = std::max({std::abs(row.lhs), std::abs(row.rhs), 1e-300});
    row.rel_residual = std::abs(row.lhs - row.rhs) / scale;
    rep.max_rel_residual = std::max(rep.max_rel_residual, row.rel_residual);
    rep.nonnegative = rep.nonnegative && row.lhs >= 0.0;
    if (V > 0.0) rep.chi_over_V_max = std::max(rep.chi_over_V_max, chi / V);
    rep.growth_constant = std::max(rep.growth_constant, V / std::pow(r, n));
    rep.rows.push_back(row);
  }
  rep.pass = rep.max_rel_residual <= tol && rep.nonnegative && rep.chi_over_V_max <= 0.5 * n;
  return rep;
}

Lemma3Report check_lemma3(const SolitonModel& model, double r, double x) {
  if (!(r >= model.rho_min())) throw InvalidInput("lemma3: r below the minimum of rho");
  if (!(x >= r)) throw InvalidInput("lemma3: need x >= r");
  if (x > model.rho_max()) throw DomainError("lemma3: x beyond rho_max");
  const int n = model.dimension();
  const RadialProfile lap = soliton_delta_rho(model);
  Lemma3Report rep;
  rep.r = r;
  rep.x = x;
  if (x > r) {
    quad::BatchIntegrand<2> f = [&](std::span<const double> t, std::array<std::span<double>, 2> out) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        const double a = std::abs(lap(t[j]));
        const double w = soliton_volume_derivative(model, t[j]);
        out[0][j] = a * w;
        out[1][j] = a * a * w;
      }
    };
    const std::array<double, 2> br{r, x};
    quad::Options opt;
    opt.rel_tol = 1e-11;
    const auto res = quad::integrate_batch<2>(f, br, opt);
    rep.l1_lhs = res.value[0];
    rep.l2_lhs = res.value[1];
  }
  const double Vx = soliton_volume(model, x);
  const double Vr = soliton_volume(model, r);
  // R is constant on built-ins, so max over [r, x] of R/rho^2 is R/r^2.
  const double max_R_rho2 = model.scalar_curvature() / (r * r);
  rep.l1_rhs = (2.0 * n / r) * (Vx - Vr) + soliton_volume_derivative(model, r);
  rep.l2_rhs = (static_cast<double>(n) * n / (r * r) + 2.0 * n * max_R_rho2) * Vx;
  rep.pass = rep.l1_lhs <= rep.l1_rhs && rep.l2_lhs <= rep.l2_rhs;
  return rep;
}

InfiniteVolumeReport check_infinite_volume(const SolitonModel& model) {
  InfiniteVolumeReport rep;
  const double hi = model.rho_max();
  const double lo = std::max(hi / 10.0, model.rho_min() * 2.0);
  if (!(hi > lo)) throw InvalidInput("infinite volume check: rho range too short");
  rep.exponent = (std::log(soliton_volume(model, hi)) - std::log(soliton_volume(model, lo))) /
                 std::log(hi / lo);
  rep.infinite = rep.exponent >= 1.0;
  return rep;
}

InfiniteVolumeReport check_infinite_volume(const AnyModel& model) {
  if (const auto* s = std::get_if<SolitonModel>(&model)) return check_infinite_volume(*s);
  throw NotApplicable("infinite volume check: '" + model_name(model) + "' is not a soliton");
}

}  // namespace esslab

#include "esslab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "esslab/errors.hpp"

namespace esslab {

double unit_sphere_area(int k) {
  if (k < 0) throw InvalidInput("unit_sphere_area: negative dimension");
  const double a = 0.5 * (k + 1);
  return 2.0 * std::pow(std::numbers::pi, a) / std::tgamma(a);
}

double unit_ball_volume(int m) {
  if (m < 0) throw InvalidInput("unit_ball_volume: negative dimension");
  if (m == 0) return 1.0;
  return unit_sphere_area(m - 1) / m;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::euclidean: return "euclidean";
    case ModelKind::hyperbolic: return "hyperbolic";
    case ModelKind::cusp: return "cusp";
    case ModelKind::custom: return "custom";
  }
  return "custom";
}

WarpedModel::WarpedModel(std::string name, int n, ModelKind kind, RadialProfile warp, double r_max,
                         std::function<double(double)> log_warp)
    : name_(std::move(name)),
      n_(n),
      kind_(kind),
      warp_(std::move(warp)),
      r_lo_(0.0),
      r_max_(r_max),
      omega_(0.0),
      pole_(false),
      log_warp_(std::move(log_warp)) {
  if (n_ < 2) throw InvalidInput("warped model: dimension must be >= 2");
  if (!warp_.valid()) throw InvalidInput("warped model: missing warp profile");
  const Interval dom = warp_.domain();
  r_lo_ = dom.lo;
  if (!(r_max_ > r_lo_)) throw InvalidInput("warped model: r_max must exceed the domain start");
  if (r_max_ > dom.hi) throw InvalidInput("warped model: r_max beyond the warp domain");
  omega_ = unit_sphere_area(n_ - 1);
  const double g0 = warp_(r_lo_);
  if (g0 < 0.0) throw InvalidInput("warped model: negative warp at domain start");
  pole_ = (g0 == 0.0);
}

double WarpedModel::weight(double r) const {
  return omega_ * std::pow(warp_(r), n_ - 1);
}

double WarpedModel::log_weight(double r) const {
  const double lg = log_warp_ ? log_warp_(r) : std::log(warp_(r));
  return std::log(omega_) + (n_ - 1) * lg;
}

double WarpedModel::warp_log_derivative(double r) const {
  const double g = warp_(r);
  if (!(g > 0.0)) {
    throw DomainError("warp vanishes at r=" + std::to_string(r) + "; g'/g undefined");
  }
  return warp_.d1(r) / g;
}

WarpedModel make_euclidean(int n, double r_max) {
  auto warp = RadialProfile::closed_form(
      "r", [](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; },
      Interval{0.0, r_max});
  return WarpedModel("euclidean" + std::to_string(n), n, ModelKind::euclidean, warp, r_max,
                     [](double r) { return std::log(r); });
}

WarpedModel make_hyperbolic(int n, double r_max) {
  auto warp = RadialProfile::closed_form(
      "sinh", [](double r) { return std::sinh(r); }, [](double r) { return std::cosh(r); },
      [](double r) { return std::sinh(r); }, Interval{0.0, r_max});
  // log sinh r = r - log 2 + log(1 - e^{-2r})
  auto log_sinh = [](double r) {
    if (r <= 0.0) return -std::numeric_limits<double>::infinity();
    if (r < 1.0) return std::log(std::sinh(r));
    return r - std::numbers::ln2 + std::log1p(-std::exp(-2.0 * r));
  };
  return WarpedModel("hyperbolic" + std::to_string(n), n, ModelKind::hyperbolic, warp, r_max,
                     log_sinh);
}

WarpedModel make_cusp(double r_max) {
  auto warp = RadialProfile::closed_form(
      "exp(-r/2)", [](double r) { return std::exp(-0.5 * r); },
      [](double r) { return -0.5 * std::exp(-0.5 * r); },
      [](double r) { return 0.25 * std::exp(-0.5 * r); }, Interval{1.0, r_max});
  return WarpedModel("cusp", 2, ModelKind::cusp, warp, r_max, [](double r) { return -0.5 * r; });
}

WarpedModel make_glued_cone(int n, double r_kink, double outer_slope, double r_max) {
  if (!(r_kink > 0.0) || !(outer_slope > 0.0)) {
    throw InvalidInput("glued cone: kink radius and outer slope must be positive");
  }
  auto g = [=](double r) { return r <= r_kink ? r : r_kink + outer_slope * (r - r_kink); };
  auto dg = [=](double r) { return r < r_kink ? 1.0 : outer_slope; };
  auto warp = RadialProfile::closed_form("glued-cone", g, dg, [](double) { return 0.0; },
                                         Interval{0.0, r_max})
                  .with_corners({r_kink});
  return WarpedModel("glued-cone", n, ModelKind::custom, warp, r_max,
                     [g](double r) { return std::log(g(r)); });
}

WarpedModel make_tabulated(std::string name, int n, std::vector<double> r, std::vector<double> g,
                           double r_max) {
  if (r.size() != g.size() || r.size() < 3) {
    throw InvalidInput("tabulated warp: need at least 3 (r, g) samples");
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool origin = (i == 0 && r[i] == 0.0 && g[i] == 0.0);
    if (!origin && !(g[i] > 0.0)) {
      throw InvalidInput("tabulated warp: non-positive warp at r=" + std::to_string(r[i]));
    }
  }
  auto warp = RadialProfile::tabulated(name, std::move(r), std::move(g));
  return WarpedModel(std::move(name), n, ModelKind::custom, warp, r_max);
}

RadialProfile radial_laplacian(const WarpedModel& model, const RadialProfile& u) {
  const Interval a = model.warp().domain();
  const Interval b = u.domain();
  const Interval dom{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
  auto value = [model, u](double r) {
    return u.d2(r) + (model.dimension() - 1) * model.warp_log_derivative(r) * u.d1(r);
  };
  return RadialProfile::derived("laplacian(" + u.name() + ")", value, dom);
}

RadialProfile ricci_radial(const WarpedModel& model) {
  auto value = [model](double r) {
    const double g = model.warp()(r);
    if (!(g > 0.0)) throw DomainError("ricci_radial: warp vanishes at r=" + std::to_string(r));
    return -(model.dimension() - 1) * model.warp().d2(r) / g;
  };
  return RadialProfile::derived("ricci_radial", value, model.warp().domain());
}

SolitonModel::SolitonModel(std::string name, SolitonStructure structure, int n, int k,
                           double rho_max)
    : name_(std::move(name)),
      structure_(structure),
      n_(n),
      k_(k),
      sphere_radius_(k >= 2 ? std::sqrt(2.0 * (k - 1)) : 0.0),
      scalar_R_(0.5 * k),
      rho_max_(rho_max) {
  if (!(rho_max_ > rho_min())) throw InvalidInput("soliton: rho_max must exceed rho_min");
}

double SolitonModel::rho_min() const { return std::sqrt(2.0 * k_); }

double SolitonModel::sphere_factor_volume() const {
  if (k_ == 0) return 1.0;
  return unit_sphere_area(k_) * std::pow(sphere_radius_, k_);
}

double SolitonModel::potential(double s) const { return (s * s) / 4.0 + 0.5 * k_; }
double SolitonModel::grad_f_sq(double s) const { return (s * s) / 4.0; }
double SolitonModel::rho(double s) const { return 2.0 * std::sqrt(potential(s)); }

double SolitonModel::s_of_rho(double rho) const {
  if (rho < rho_min()) throw DomainError("soliton: rho below its minimum");
  return std::sqrt(std::max(0.0, rho * rho - 2.0 * k_));
}

double SolitonModel::grad_rho_sq(double s) const {
  const double f = potential(s);
  if (!(f > 0.0)) throw DomainError("soliton: |grad rho| undefined where f = 0");
  return grad_f_sq(s) / f;
}

double SolitonModel::normalization_residual(double s) const {
  return (scalar_R_ + grad_f_sq(s)) - potential(s);
}

SolitonModel make_soliton(SolitonStructure structure, int n, int k, double rho_max) {
  if (n < 2) throw InvalidInput("soliton: dimension must be >= 2");
  switch (structure) {
    case SolitonStructure::gaussian:
      if (k != 0) throw InvalidInput("gaussian soliton: sphere factor dimension must be 0");
      return SolitonModel("gaussian" + std::to_string(n), structure, n, 0, rho_max);
    case SolitonStructure::cylinder:
      if (k < 2) {
        throw InvalidInput("cylinder soliton: sphere factor needs k >= 2 (S^1 is Ricci-flat)");
      }
      if (k >= n) throw InvalidInput("cylinder soliton: k must be < n");
      return SolitonModel("cylinder" + std::to_string(n) + "_" + std::to_string(k), structure, n,
                          k, rho_max);
    case SolitonStructure::custom_radial:
      break;
  }
  throw InvalidInput("soliton: custom radial structures have no built-in construction");
}

RadialProfile soliton_delta_rho(const SolitonModel& model) {
  const double n = model.dimension();
  const double R = model.scalar_curvature();
  const double a = n - 1.0 - 2.0 * R;
  auto guard = [](double rho) {
    if (!(rho > 0.0)) throw DomainError("soliton_delta_rho: rho = 0 (apex)");
  };
  return RadialProfile::closed_form(
      "delta_rho",
      [=](double rho) {
        guard(rho);
        return a / rho + 4.0 * R / (rho * rho * rho);
      },
      [=](double rho) {
        guard(rho);
        return -a / (rho * rho) - 12.0 * R / std::pow(rho, 4);
      },
      [=](double rho) {
        guard(rho);
        return 2.0 * a / (rho * rho * rho) + 48.0 * R / std::pow(rho, 5);
      },
      Interval{model.rho_min(), model.rho_max()});
}

double soliton_delta_rho_flat(const SolitonModel& model, double s) {
  const double rho = model.rho(s);
  if (!(rho > 0.0)) throw DomainError("soliton_delta_rho_flat: rho = 0 (apex)");
  const double m = model.flat_dim();
  const double k = model.sphere_dim();
  const double rho_s = s / rho;
  const double rho_ss = 2.0 * k / (rho * rho * rho);
  // lim_{s->0} rho_s / s = rho_ss(0) = 1/rho_min.
  const double radial = s > 0.0 ? rho_s / s : 1.0 / rho;
  return rho_ss + (m - 1.0) * radial;
}

HamiltonSides hamilton_identity(const SolitonModel& model, double s) {
  if (model.structure() == SolitonStructure::custom_radial) {
    throw NotApplicable("hamilton_identity: only product built-ins are supported");
  }
  // R is constant on built-ins; grad f = (s/2) e_s lies in the Ricci-flat factor.
  HamiltonSides sides;
  const double flat_ricci = 0.0;
  const double sphere_ricci = 0.5;
  const double grad_f_flat = 0.5 * s;
  const double grad_f_sphere = 0.0;
  sides.grad_R = 0.0;
  sides.two_ric_grad_f = 2.0 * (flat_ricci * grad_f_flat + sphere_ricci * grad_f_sphere);
  return sides;
}

const std::string& model_name(const AnyModel& model) {
  return std::visit([](const auto& m) -> const std::string& { return m.name(); }, model);
}

}  // namespace esslab

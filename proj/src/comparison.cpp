#include "esslab/comparison.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

#include "esslab/errors.hpp"

namespace esslab {

DeltaProfile DeltaProfile::closed_form(std::string name, std::function<double(double)> fn) {
  DeltaProfile d;
  d.name_ = std::move(name);
  d.fn_ = std::move(fn);
  return d;
}

DeltaProfile DeltaProfile::tabulated(std::string name, std::vector<double> r,
                                     std::vector<double> values) {
  DeltaProfile d;
  d.name_ = std::move(name);
  d.fn_ = [lin = PiecewiseLinear(std::move(r), std::move(values))](double x) { return lin(x); };
  d.tabulated_ = true;
  return d;
}

DeltaProfile parse_delta_spec(std::string_view spec) {
  if (spec == "zero") return DeltaProfile::closed_form("zero", [](double) { return 0.0; });
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("delta spec '" + std::string(spec) + "': expected family:coefficient");
  }
  const std::string_view family = spec.substr(0, colon);
  const std::string_view num = spec.substr(colon + 1);
  double c = 0.0;
  const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), c);
  if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(c)) {
    throw InvalidInput("delta spec '" + std::string(spec) + "': bad coefficient");
  }
  if (c < 0.0) throw InvalidInput("delta spec '" + std::string(spec) + "': coefficient must be >= 0");
  const std::string name(spec);
  if (family == "const") return DeltaProfile::closed_form(name, [c](double) { return c; });
  if (family == "inv") {
    return DeltaProfile::closed_form(name, [c](double r) { return c / (1.0 + r); });
  }
  if (family == "inv-sq") {
    return DeltaProfile::closed_form(name, [c](double r) { return c / ((1.0 + r) * (1.0 + r)); });
  }
  if (family == "exp") {
    return DeltaProfile::closed_form(name, [c](double r) { return c * std::exp(-r); });
  }
  throw InvalidInput("delta spec '" + std::string(spec) + "': unknown family");
}

DeltaValidity check_delta(const DeltaProfile& delta, double r_max, double tol) {
  DeltaValidity v;
  constexpr int kSamples = 2000;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSamples; ++i) {
    const double t = static_cast<double>(i) / kSamples;
    const double r = r_max * t * t;
    const double d = delta(r);
    if (!(d >= 0.0)) v.nonnegative = false;
    if (!(d > 0.0)) v.positive = false;
    if (d > prev * (1.0 + 1e-12) + 1e-300) v.nonincreasing = false;
    prev = d;
  }
  v.tail_value = delta(r_max);
  v.decays = v.tail_value < tol;
  return v;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using State = std::array<double, 2>;  // (u, log g)

class RiccatiStepper {
 public:
  RiccatiStepper(const DeltaProfile& delta, const ComparisonOptions& opt, IntegratorStats& stats)
      : delta_(delta), opt_(opt), stats_(stats) {}

  State rhs(double r, const State& y) {
    ++stats_.evaluations;
    const double d = delta_(r);
    if (!(d >= 0.0)) {
      throw InvalidInput("comparison: delta is negative at r=" + std::to_string(r));
    }
    return {d - y[0] * y[0], y[0]};
  }

  // Advance from (r, y) to exactly r_end with adaptive steps; `h` carries the step proposal.
  // Every accepted step endpoint is appended to the node lists.
  void advance(double& r, State& y, State& f, double r_end, double& h,
               std::vector<double>& nodes, std::vector<State>& states) {
    while (r < r_end) {
      if (stats_.accepted + stats_.rejected > opt_.max_steps) {
        throw ConvergenceError("comparison: step budget exhausted");
      }
      bool clipped = false;
      double step = h;
      if (r + step >= r_end) {
        step = r_end - r;
        clipped = true;
      }
      State k2, k3, k4, k5, k6, k7, yt, y5;
      auto stage = [&](std::initializer_list<std::pair<double, const State*>> terms) {
        State out = y;
        for (const auto& [a, k] : terms) {
          out[0] += step * a * (*k)[0];
          out[1] += step * a * (*k)[1];
        }
        return out;
      };
      yt = stage({{a21, &f}});
      k2 = rhs(r + c2 * step, yt);
      yt = stage({{a31, &f}, {a32, &k2}});
      k3 = rhs(r + c3 * step, yt);
      yt = stage({{a41, &f}, {a42, &k2}, {a43, &k3}});
      k4 = rhs(r + c4 * step, yt);
      yt = stage({{a51, &f}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
      k5 = rhs(r + c5 * step, yt);
      yt = stage({{a61, &f}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
      k6 = rhs(r + step, yt);
      y5 = stage({{b1, &f}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      const double r_new = clipped ? r_end : r + step;
      k7 = rhs(r_new, y5);

      double err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double e = step * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                 e7 * k7[i]);
        const double sc = opt_.abs_tol + opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / 2.0);
      if (!std::isfinite(err)) err = 1e10;

      const double factor =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err <= 1.0) {
        ++stats_.accepted;
        r = r_new;
        y = y5;
        f = k7;
        nodes.push_back(r);
        states.push_back(y);
        // Keep the unclipped proposal so output points do not shrink the step size.
        h = clipped ? std::max(h, step * factor) : step * factor;
      } else {
        ++stats_.rejected;
        h = step * factor;
      }
      if (h < 1e-14 * std::max(1.0, r)) throw ConvergenceError("comparison: step size underflow");
    }
  }

 private:
  const DeltaProfile& delta_;
  const ComparisonOptions& opt_;
  IntegratorStats& stats_;
};

double stencil_derivative(const std::vector<double>& r, const std::vector<State>& y, double at,
                          double eta) {
  auto value = [&](double x) {
    const auto it = std::lower_bound(r.begin(), r.end(), x);
    return y[static_cast<std::size_t>(it - r.begin())][0];
  };
  return (-value(at + 2 * eta) + 8 * value(at + eta) - 8 * value(at - eta) +
          value(at - 2 * eta)) /
         (12 * eta);
}

}  // namespace

double ComparisonSolution::g(double radius) const { return std::exp(log_g(radius)); }

ComparisonSolution solve_comparison_ode(const DeltaProfile& delta, double r_max,
                                        const ComparisonOptions& options) {
  const double h0 = options.seed_radius;
  if (!(r_max > h0)) throw InvalidInput("comparison: r_max must exceed the seed radius");
  if (!(delta(0.0) >= 0.0)) throw InvalidInput("comparison: delta is negative at r=0");

  // Output grid: geometric from h0 to r_max, plus five-point stencils at check sites.
  std::vector<double> outputs;
  std::vector<std::pair<double, double>> sites;  // (radius, eta)
  const double decades = std::log10(r_max / h0);
  const int count = std::max(2, static_cast<int>(std::ceil(decades * options.points_per_decade)));
  constexpr double kEtaRel = 3e-3;
  for (int i = 1; i <= count; ++i) {
    const double r = h0 * std::pow(r_max / h0, static_cast<double>(i) / count);
    outputs.push_back(i == count ? r_max : r);
    if (i % 10 == 5 && r > 10 * h0 && r * (1 + 2.5 * kEtaRel) < r_max) {
      const double eta = kEtaRel * r;
      sites.emplace_back(r, eta);
      for (int j : {-2, -1, 1, 2}) outputs.push_back(r + j * eta);
    }
  }
  std::sort(outputs.begin(), outputs.end());
  outputs.erase(std::unique(outputs.begin(), outputs.end()), outputs.end());

  ComparisonSolution sol;
  sol.r_max = r_max;
  RiccatiStepper stepper(delta, options, sol.stats);

  const double d0 = delta(0.0);
  State y{1.0 / h0 + d0 * h0 / 3.0, std::log(h0) + d0 * h0 * h0 / 6.0};
  double r = h0;
  State f = stepper.rhs(r, y);
  double h = 1e-3 * h0;
  std::vector<double> nodes{r};
  std::vector<State> states{y};
  for (double target : outputs) {
    if (target <= r) continue;
    stepper.advance(r, y, f, target, h, nodes, states);
  }

  // Riccati residual at the check sites.
  for (const auto& [site, eta] : sites) {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), site);
    const State& ys = states[static_cast<std::size_t>(it - nodes.begin())];
    const double du = stencil_derivative(nodes, states, site, eta);
    const double res = std::abs(du - (delta(site) - ys[0] * ys[0])) / std::max(1.0, ys[0] * ys[0]);
    sol.stats.max_residual = std::max(sol.stats.max_residual, res);
  }
  if (sol.stats.max_residual > options.residual_tol) {
    throw ConvergenceError("comparison: Riccati residual " + std::to_string(sol.stats.max_residual) +
                           " exceeds tolerance");
  }

  sol.r = nodes;
  sol.u_values.reserve(nodes.size());
  sol.log_g_values.reserve(nodes.size());
  std::vector<double> du(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    sol.u_values.push_back(states[i][0]);
    sol.log_g_values.push_back(states[i][1]);
    du[i] = delta(nodes[i]) - states[i][0] * states[i][0];
  }
  sol.u = RadialProfile::hermite("u=g'/g", sol.r, sol.u_values, du);
  sol.log_g = RadialProfile::hermite("log g", sol.r, sol.log_g_values, sol.u_values);
  return sol;
}

std::string to_string(DecayStatus status) {
  switch (status) {
    case DecayStatus::pass: return "pass";
    case DecayStatus::fail: return "fail";
    case DecayStatus::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DecayReport verify_decay(const ComparisonSolution& solution, double tol) {
  DecayReport rep;
  const auto& r = solution.r;
  const auto& u = solution.u_values;
  rep.limit_estimate = u.back();
  const double r_start = solution.r_max / 10.0;
  if (r.empty() || r_start <= 10.0 * r.front()) {
    rep.status = DecayStatus::inconclusive;
    return rep;
  }
  const auto first = static_cast<std::size_t>(
      std::lower_bound(r.begin(), r.end(), r_start) - r.begin());
  rep.nonincreasing_tail = true;
  for (std::size_t i = first + 1; i < r.size(); ++i) {
    if (u[i] > u[i - 1] * (1.0 + 1e-12) + 1e-15) {
      rep.nonincreasing_tail = false;
      break;
    }
  }
  const double u0 = solution.u(r_start);
  rep.tail_slope = (u0 > 0.0 && u.back() > 0.0)
                       ? std::log(u.back() / u0) / std::log(solution.r_max / r_start)
                       : 0.0;
  if (rep.limit_estimate < tol && rep.nonincreasing_tail) {
    rep.status = DecayStatus::pass;
  } else if (rep.nonincreasing_tail && rep.tail_slope < -0.2) {
    rep.status = DecayStatus::inconclusive;  // still decaying at r_max
  } else {
    rep.status = DecayStatus::fail;
  }
  return rep;
}

Envelope envelope_from_model(const WarpedModel& model, double tol, std::size_t grid_points) {
  if (grid_points < 8) throw InvalidInput("envelope: too few grid points");
  const double lo = model.r_lo() + (model.has_pole() ? 1e-6 : 0.0);
  // Stop where the warp overflows; the envelope is extended as a constant beyond.
  double hi = model.r_max();
  while (!std::isfinite(model.warp()(hi)) || !std::isfinite(model.warp().d2(hi))) hi *= 0.5;
  hi = std::max(hi, lo + 1.0);

  std::vector<double> r(grid_points), need(grid_points);
  const int n = model.dimension();
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid_points - 1);
    r[i] = lo + (hi - lo) * t * t;
    const double g = model.warp()(r[i]);
    const double ric = -(n - 1) * model.warp().d2(r[i]) / g;
    need[i] = std::max(0.0, -ric / (n - 1));
  }
  std::vector<double> env(grid_points);
  double run = 0.0;
  for (std::size_t i = grid_points; i-- > 0;) {
    run = std::max(run, need[i]);
    env[i] = std::max(kDeltaFloor, run);
  }
  Envelope out;
  out.asymptotically_nonnegative = env.back() < tol;
  out.delta = DeltaProfile::tabulated("envelope(" + model.name() + ")", std::move(r), std::move(env));
  return out;
}

DeltaProfile normalize_envelope(const DeltaProfile& delta, const ComparisonSolution& solution) {
  std::vector<double> r = solution.r;
  std::vector<double> v(r.size());
  double run = 0.0;
  for (std::size_t i = r.size(); i-- > 0;) {
    run = std::max({run, delta(r[i]), solution.u_values[i]});
    // Where the bounds are equalities (g'/g -> const) the checks would otherwise
    // depend on the last bit.
    v[i] = run * (1.0 + 1e-12);
  }
  return DeltaProfile::tabulated("normalized(" + delta.name() + ")", std::move(r), std::move(v));
}

}  // namespace esslab

#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "esslab/geometry.hpp"
#include "esslab/interpolation.hpp"
#include "esslab/profile.hpp"

namespace esslab {

/// Ricci decay envelope delta(r): Ric >= -(n-1) delta(r) beyond radius r.
/// Closed-form or tabulated (piecewise linear, so monotonicity and positivity of the
/// samples carry over to the interpolant). Defined for all r >= 0 by constant extension.
class DeltaProfile {
 public:
  DeltaProfile() = default;
  static DeltaProfile closed_form(std::string name, std::function<double(double)> fn);
  static DeltaProfile tabulated(std::string name, std::vector<double> r, std::vector<double> d);

  double operator()(double r) const { return fn_(r); }
  const std::string& name() const { return name_; }
  bool is_tabulated() const { return tabulated_; }

 private:
  std::string name_;
  std::function<double(double)> fn_;
  bool tabulated_ = false;
};

/// Parse "zero", "const:c", "inv:c" (c/(1+r)), "inv-sq:c" (c/(1+r)^2), "exp:c" (c e^{-r}).
DeltaProfile parse_delta_spec(std::string_view spec);

/// Lower bound used when clamping an envelope to keep delta > 0 checkable.
inline constexpr double kDeltaFloor = 1e-15;

struct DeltaValidity {
  bool nonnegative = true;
  bool positive = true;
  bool nonincreasing = true;
  bool decays = true;  // delta(r_max) < tol
  double tail_value = 0.0;
};
DeltaValidity check_delta(const DeltaProfile& delta, double r_max, double tol);

struct ComparisonOptions {
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
  double seed_radius = 1e-3;
  int points_per_decade = 200;
  double residual_tol = 1e-8;
  std::size_t max_steps = 5'000'000;
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  /// max over check sites of |u' - (delta - u^2)| / max(1, u^2), u' from a
  /// five-point stencil on the computed solution.
  double max_residual = 0.0;
};

/// Solution of g'' = delta g, g(0) = 0, g'(0) = 1, carried as u = g'/g and log g.
struct ComparisonSolution {
  std::vector<double> r;
  std::vector<double> u_values;
  std::vector<double> log_g_values;
  RadialProfile u;      // Hermite interpolant with slopes delta - u^2
  RadialProfile log_g;  // Hermite interpolant with slopes u
  double r_max = 0.0;
  IntegratorStats stats;

  /// g itself; overflows to +inf for large r under positive delta.
  double g(double r) const;
};

/// Integrates u' = delta - u^2 from the series seed u = 1/r + (delta(0)/3) r at
/// r = seed_radius. Throws InvalidInput for negative delta and ConvergenceError when
/// the Riccati residual exceeds options.residual_tol.
ComparisonSolution solve_comparison_ode(const DeltaProfile& delta, double r_max,
                                        const ComparisonOptions& options = {});

enum class DecayStatus { pass, fail, inconclusive };
std::string to_string(DecayStatus status);

struct DecayReport {
  double limit_estimate = 0.0;  // u(r_max)
  double tail_slope = 0.0;      // d log u / d log r over the last decade
  bool nonincreasing_tail = false;
  DecayStatus status = DecayStatus::inconclusive;
};

DecayReport verify_decay(const ComparisonSolution& solution, double tol);

struct Envelope {
  DeltaProfile delta;
  bool asymptotically_nonnegative = false;
};

/// delta(r) = max(floor, sup_{s >= r} -Ric_radial(s)/(n-1)) by a reverse cumulative max.
Envelope envelope_from_model(const WarpedModel& model, double tol = 1e-6,
                             std::size_t grid_points = 4000);

/// Raises delta to max(delta, g'/g) and restores monotonicity, so that g'/g <= delta.
/// The result carries a relative margin of 1e-12 against rounding.
DeltaProfile normalize_envelope(const DeltaProfile& delta, const ComparisonSolution& solution);

}  // namespace esslab

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "esslab/comparison.hpp"
#include "esslab/geometry.hpp"
#include "esslab/profile.hpp"

namespace esslab {

/// Even bump xi(t) = c (1 - t^2)^4 on [-1, 1] with c = 315/256, so that the integral is 1.
class MollifierKernel {
 public:
  static constexpr double kNormalization = 315.0 / 256.0;

  double operator()(double t) const;
  double derivative(double t) const;
  double support() const { return 1.0; }
};

struct MollifiedValues {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Fixed-width mollification of rho at r:
///   value = rho(r) + int xi(t) [rho(r - eps t) - rho(r)] dt
///   d1    = int xi(t) rho'(r - eps t) dt
///   d2    = (1/eps) int xi'(t) rho'(r - eps t) dt
/// Only rho and rho' are sampled. Corners declared on rho split the quadrature.
MollifiedValues mollify_at(const RadialProfile& rho, double r, double eps,
                           const MollifierKernel& kernel = {});

struct SmoothingRow {
  double r = 0.0;
  double eps = 0.0;
  double rho = 0.0;
  double d_rho = 0.0;
  double rho_tilde = 0.0;
  double d_rho_tilde = 0.0;
  double laplacian = 0.0;
  double bound_a_margin = 0.0;  // delta(r) - |rho~ - rho| - |rho~' - rho'|
  double bound_b_margin = 0.0;  // 2 delta(r - 1) - laplacian(rho~)
};

struct SmoothingBoundReport {
  double sup_bound_a = 0.0;      // sup of |rho~ - rho| + |rho~' - rho'|
  double sup_laplacian = 0.0;    // sup of laplacian(rho~)
  double min_margin_a = 0.0;
  double min_margin_b = 0.0;
  double worst_radius = 0.0;     // radius of the smallest margin
  std::size_t refinements = 0;   // total dyadic halvings applied
  bool pass = false;
};

struct SmoothingOptions {
  std::size_t grid_points = 1500;
  int max_halvings = 30;
  /// Samples of |rho''| per unit window when estimating the width schedule.
  int curvature_samples = 17;
};

/// Mollified distance on a radial model. The width is a step function of r,
/// constant on each grid cell [r_i, r_{i+1}); evaluation anywhere in the domain
/// uses the width of the enclosing cell.
class SmoothedDistance {
 public:
  const WarpedModel& model() const { return model_; }
  const DeltaProfile& delta() const { return delta_; }
  const RadialProfile& source() const { return rho_; }
  /// rho~ as a profile on [grid.front(), grid.back()].
  const RadialProfile& rho_tilde() const { return rho_tilde_; }
  const std::vector<SmoothingRow>& rows() const { return rows_; }
  const SmoothingBoundReport& report() const { return report_; }
  Interval domain() const { return {rows_.front().r, rows_.back().r}; }

  double eps_at(double r) const;
  MollifiedValues evaluate(double r) const;
  /// rho~'' + (n-1) (g'/g) rho~'.
  double laplacian(double r) const;

 private:
  friend SmoothedDistance mollify_profile(const WarpedModel&, const RadialProfile&,
                                          const DeltaProfile&, const MollifierKernel&,
                                          const SmoothingOptions&);
  SmoothedDistance(WarpedModel model, RadialProfile rho, DeltaProfile delta, MollifierKernel k)
      : model_(std::move(model)), rho_(std::move(rho)), delta_(std::move(delta)), kernel_(k) {}

  WarpedModel model_;
  RadialProfile rho_;
  DeltaProfile delta_;
  MollifierKernel kernel_;
  std::vector<double> cell_start_;
  std::vector<double> cell_eps_;
  RadialProfile rho_tilde_;
  std::vector<SmoothingRow> rows_;
  SmoothingBoundReport report_;
};

/// Mollify an arbitrary radial function rho (for example a distance with a corner)
/// on [2, r_max - 1], choosing eps(r) = min(1, delta(r) / (4 (1 + sup_{[r-1,r+1]} |rho''|)))
/// and halving it at grid points where either bound fails.
SmoothedDistance mollify_profile(const WarpedModel& model, const RadialProfile& rho,
                                 const DeltaProfile& delta, const MollifierKernel& kernel = {},
                                 const SmoothingOptions& options = {});

/// The distance from the pole (or from the inner boundary), rho(r) = r.
SmoothedDistance mollify_distance(const WarpedModel& model, const DeltaProfile& delta,
                                  const MollifierKernel& kernel = {},
                                  const SmoothingOptions& options = {});

/// The envelope actually fed to the mollifier: the model's Ricci envelope, raised to
/// dominate g'/g of its comparison solution.
DeltaProfile standard_delta(const WarpedModel& model, const ComparisonOptions& options = {});

struct LemmaCompRow {
  double r = 0.0;
  double laplacian = 0.0;
  double bound = 0.0;  // (n-1) u(r) + 2 delta(r - 1)
  bool pass = false;
};

struct LemmaCompReport {
  std::vector<LemmaCompRow> rows;
  bool inequality_holds = false;
  /// max of laplacian(rho~) over the last 5% of the grid.
  double limsup_estimate = 0.0;
  bool limsup_nonpositive = false;  // limsup_estimate <= tol
  bool pass = false;
};

LemmaCompReport check_lemma_comp(const SmoothedDistance& smoothed,
                                 const ComparisonSolution& solution, double tol = 1e-2);

}  // namespace esslab

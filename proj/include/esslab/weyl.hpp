#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "esslab/geometry.hpp"
#include "esslab/smoothing.hpp"

namespace esslab {

/// Cutoff equal to 1 on [s0, s1], 0 outside [s0 - 1, s1 + 1], with quintic
/// smoothstep ramps 6t^5 - 15t^4 + 10t^3 of unit width (C^2 at the joins).
class CutoffProfile {
 public:
  CutoffProfile(double s0, double s1, double budget) : s0_(s0), s1_(s1), budget_(budget) {}

  double operator()(double s) const;
  double d1(double s) const;
  double d2(double s) const;

  Interval plateau() const { return {s0_, s1_}; }
  Interval support() const { return {s0_ - 1.0, s1_ + 1.0}; }
  /// B = sup |psi'| + |psi''|.
  double budget() const { return budget_; }

 private:
  double s0_, s1_, budget_;
};

/// B is measured by dense-grid maximization over a ramp.
CutoffProfile build_cutoff(double s0, double s1);

struct WeylParamsNonCompact {
  double scale_R = 0.0;
  double x = 0.0;
  double y = 0.0;
  double mu = 0.0;
  double lambda = 0.0;
  int p = 1;
  /// Throws InvalidInput unless y > x + 2R, x > 2R > 2 mu + 4, lambda >= 0, p in {1, 2}.
  void validate() const;
};

struct SolitonWeylParams {
  double a = 2.0;
  double b = 0.0;
  double l = 2.0;
  double mu = 0.0;
  double lambda = 0.0;
  int p = 1;
  /// Throws InvalidInput unless a >= 2, b >= 2 + mu, l >= 2, lambda >= 0, p in {1, 2}.
  void validate() const;
};

using WeylParams = std::variant<WeylParamsNonCompact, SolitonWeylParams>;

/// Radial data of the phase coordinate tau (rho~ or rho) at integration variable t.
struct CoordinateSample {
  double tau = 0.0;
  double grad_sq = 1.0;   // |grad tau|^2
  double laplacian = 0.0; // Delta tau
  double weight = 0.0;    // volume density in t (scaled by exp(-log_scale))
};

/// Pointwise values of phi = psi((tau - offset)/S) e^{i sqrt(lambda) tau} and of
/// Delta phi + lambda phi, split as in the expansion
///   e^{i k tau} [ psi'' G/S^2 + i k 2 psi' G/S ]            (cutoff)
/// + e^{i k tau} [ (i k psi + psi'/S) Delta tau ]             (laplacian)
/// + lambda phi (1 - G)                                       (gradient defect)
/// with k = sqrt(lambda), G = |grad tau|^2.
struct WeylPoint {
  std::complex<double> phi;
  std::complex<double> defect;
  std::array<std::complex<double>, 3> terms;
  double psi = 0.0;
  double weight = 0.0;
};

class WeylTestFunction {
 public:
  using Coordinate = std::function<CoordinateSample(double t)>;

  WeylTestFunction(WeylParams params, CutoffProfile cutoff, double scale, double offset,
                   Coordinate coordinate, std::vector<double> breaks, double log_scale);

  const WeylParams& params() const { return params_; }
  const CutoffProfile& cutoff() const { return cutoff_; }
  double lambda() const;
  int p() const;
  bool is_soliton() const { return std::holds_alternative<SolitonWeylParams>(params_); }
  /// Integration range in t and its ramp breakpoints.
  const std::vector<double>& breaks() const { return breaks_; }
  /// Densities are multiplied by exp(-log_scale) to keep them representable.
  double log_scale() const { return log_scale_; }

  WeylPoint at(double t) const;
  CoordinateSample coordinate(double t) const { return coordinate_(t); }

  /// Fills A = Re, B = Im of Delta phi + lambda phi, psi and weight for a batch of t.
  /// If `terms` is non-null it receives the real and imaginary parts of the three
  /// expansion terms (6 arrays).
  void evaluate_batch(std::span<const double> t, double* A, double* B, double* psi, double* w,
                      std::array<double*, 6>* terms = nullptr) const;

 private:
  WeylParams params_;
  CutoffProfile cutoff_;
  double scale_;
  double offset_;
  Coordinate coordinate_;
  std::vector<double> breaks_;
  double log_scale_;
};

/// phi = psi(rho~/R) e^{i sqrt(lambda) rho~}, integrated in r with weight w(r).
WeylTestFunction build_weyl_noncompact(const SmoothedDistance& smoothed,
                                       const WeylParamsNonCompact& params);

/// phi = psi((rho - b)/l) e^{i sqrt(lambda) rho}, integrated in rho with the co-area
/// density V'(rho).
WeylTestFunction build_weyl_soliton(const SolitonModel& model, const SolitonWeylParams& params);

struct DefectReport {
  double lambda = 0.0;
  int p = 1;
  double defect_norm = 0.0;  // || Delta phi + lambda phi ||_p
  double phi_norm = 0.0;     // || phi ||_p
  double quotient = 0.0;
  WeylParams params;
  Interval support;          // in the integration variable (r or rho)
  double quad_rel_error = 0.0;
  bool quad_converged = false;
  double log_scale = 0.0;    // norms carry a factor exp(-log_scale / p)
  /// ||.||_p of the cutoff, laplacian and gradient-defect terms (when requested).
  std::optional<std::array<double, 3>> term_norms;

  /// Parameter columns: (R, x, y) or (l, b, a).
  std::array<double, 3> param_columns() const;
};

struct DefectOptions {
  double rel_tol = 1e-6;
  bool term_norms = false;
  std::size_t max_panels = 20000;
};

/// Throws InvalidInput on a zero phi norm.
DefectReport eval_defect(const WeylTestFunction& phi, const DefectOptions& options = {});

std::string binding_term_name(std::size_t index);

/// Paper-style constant C = max(B, sqrt(lambda) B, lambda, 1).
double expansion_constant(double budget, double lambda);

struct BoundCheck {
  std::string name;
  double lhs = 0.0;  // ||.||_1, or ||.||_2^2 for the L^2 estimate
  double rhs = 0.0;
  bool dominated = false;
};

/// (C/R + C delta(x-R)) (V(y+R) - V(x-R)) + C int_{x-R}^{y+R} |Delta rho~| w.
BoundCheck noncompact_l1_bound(const SmoothedDistance& smoothed, const DefectReport& report,
                               double budget);
/// (C/l + 2nC/b)[V(b+(a+2)l) - V(b)] + C V'(b) + (4 lambda/b^2) chi(b+(a+2)l).
BoundCheck soliton_l1_bound(const SolitonModel& model, const DefectReport& report, double budget);
/// 3C^2 (1/l^2 + n^2/b^2 + 2n max R/rho^2) V(b+(a+2)l) + (4 * 3C^2/b^2) chi(b+(a+2)l),
/// compared with ||.||_2^2.
BoundCheck soliton_l2_bound(const SolitonModel& model, const DefectReport& report, double budget);

struct AnnulusSelection {
  bool found = false;
  double value = 0.0;
  std::size_t index = 0;
};

/// Smallest grid y with V(y + R) <= 2 V(y).
AnnulusSelection select_annulus_infinite(const std::function<double(double)>& V, double scale_R,
                                         const std::vector<double>& y_grid);
/// Same rule on log V, for volumes that overflow.
AnnulusSelection select_annulus_infinite_log(const std::function<double(double)>& log_V,
                                             double scale_R, const std::vector<double>& y_grid);

/// Smallest grid x with 2 eps f(x-R) - C f'(x-R) <= 4 eps f(x), f the tail volume,
/// f' by centred differences.
AnnulusSelection select_annulus_finite(const std::function<double(double)>& f, double scale_R,
                                       double eps, double C, const std::vector<double>& x_grid);
/// Overload with f = vol_M - V. The subtraction cancels once the tail drops below
/// about 1e-8 vol_M; callers with a direct tail should use the form above.
AnnulusSelection select_annulus_finite(const std::function<double(double)>& V, double vol_M,
                                       double scale_R, double eps, double C,
                                       const std::vector<double>& x_grid);

struct CertifyOptions {
  /// Upper limit for R (or l), in units of the grid.
  double budget = 1048576.0;
  DefectOptions defect;
  std::size_t annulus_grid = 64;
};

struct CertificationAttempt {
  DefectReport report;
  bool annulus_found = false;
  std::optional<BoundCheck> bound;
};

struct Certification {
  bool certified = false;
  double lambda = 0.0;
  int p = 1;
  double eps = 0.0;
  std::optional<DefectReport> certificate;
  std::vector<CertificationAttempt> attempts;
  double best_quotient = std::numeric_limits<double>::infinity();
  std::string binding_term;   // for failures: the largest term of the best attempt
  std::string failure_reason;
  std::size_t dominance_violations = 0;
};

/// Drives the parameter schedule. For warped models `smoothed` must come from the same model.
Certification certify_spectrum_point(const AnyModel& model, const SmoothedDistance* smoothed,
                                     double lambda, double eps, double mu, int p,
                                     const CertifyOptions& options = {});

/// Per-lambda certifications in lambda order; failures do not abort the sweep.
std::vector<Certification> sweep_spectrum(const AnyModel& model, const std::vector<double>& lambdas,
                                          double eps, double mu, int p, unsigned threads = 1,
                                          const CertifyOptions& options = {});

}  // namespace esslab

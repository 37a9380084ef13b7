#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "esslab/profile.hpp"

namespace esslab {

/// Area of the unit k-sphere S^k in R^{k+1}: 2 pi^{(k+1)/2} / Gamma((k+1)/2).
double unit_sphere_area(int k);

/// Volume of the unit ball in R^m.
double unit_ball_volume(int m);

enum class ModelKind { euclidean, hyperbolic, cusp, custom };

std::string to_string(ModelKind kind);

/// Rotationally symmetric manifold dr^2 + g(r)^2 dsigma^2_{n-1} on [r_lo, r_max].
/// Immutable after construction.
class WarpedModel {
 public:
  WarpedModel(std::string name, int n, ModelKind kind, RadialProfile warp, double r_max,
              std::function<double(double)> log_warp = {});

  const std::string& name() const { return name_; }
  int dimension() const { return n_; }
  ModelKind kind() const { return kind_; }
  const RadialProfile& warp() const { return warp_; }
  double r_lo() const { return r_lo_; }
  double r_max() const { return r_max_; }
  /// omega_{n-1}, area of the unit (n-1)-sphere.
  double sphere_area() const { return omega_; }
  /// True when the warp vanishes at r_lo (a coordinate origin rather than a boundary).
  bool has_pole() const { return pole_; }

  /// Volume density w(r) = omega_{n-1} g(r)^{n-1}; equals vol(dB(r)).
  double weight(double r) const;
  /// log w(r), finite even where w overflows (closed-form families).
  double log_weight(double r) const;
  /// g'(r)/g(r); throws DomainError where g(r) = 0.
  double warp_log_derivative(double r) const;

 private:
  std::string name_;
  int n_;
  ModelKind kind_;
  RadialProfile warp_;
  double r_lo_;
  double r_max_;
  double omega_;
  bool pole_;
  std::function<double(double)> log_warp_;
};

WarpedModel make_euclidean(int n, double r_max);
WarpedModel make_hyperbolic(int n, double r_max);
/// Cusp end dr^2 + e^{-r} dtheta^2 on [1, r_max] (n = 2).
WarpedModel make_cusp(double r_max);
/// Two flat cones glued at r_kink: g = r below, g = r_kink + outer_slope (r - r_kink) above.
WarpedModel make_glued_cone(int n, double r_kink, double outer_slope, double r_max);
/// Custom warp from samples; the first sample may be (0, 0) for a pole, all others must be > 0.
WarpedModel make_tabulated(std::string name, int n, std::vector<double> r, std::vector<double> g,
                           double r_max);

/// u'' + (n-1) (g'/g) u'; evaluation throws DomainError where g = 0.
RadialProfile radial_laplacian(const WarpedModel& model, const RadialProfile& u);

/// Radial Ricci curvature -(n-1) g''/g.
RadialProfile ricci_radial(const WarpedModel& model);

enum class SolitonStructure { gaussian, cylinder, custom_radial };

/// Normalized gradient shrinking soliton S^k(sqrt(2(k-1))) x R^{n-k} (k = 0: flat R^n).
/// All quantities are functions of the flat-factor radius s, or of rho = 2 sqrt(f).
class SolitonModel {
 public:
  SolitonModel(std::string name, SolitonStructure structure, int n, int k, double rho_max);

  const std::string& name() const { return name_; }
  SolitonStructure structure() const { return structure_; }
  int dimension() const { return n_; }
  int sphere_dim() const { return k_; }
  int flat_dim() const { return n_ - k_; }
  double sphere_radius() const { return sphere_radius_; }
  double scalar_curvature() const { return scalar_R_; }
  double normalization_constant() const { return c0_; }
  double rho_max() const { return rho_max_; }
  /// min rho = sqrt(2k), attained on the sphere factor over the flat origin.
  double rho_min() const;
  /// Volume of the sphere factor (1 when k = 0).
  double sphere_factor_volume() const;

  double potential(double s) const;     // f
  double grad_f_sq(double s) const;     // |grad f|^2
  double rho(double s) const;           // 2 sqrt(f)
  double s_of_rho(double rho) const;    // inverse of rho(s), s >= 0
  double grad_rho_sq(double s) const;   // |grad f|^2 / f
  /// (R + |grad f|^2) - f, evaluated in that order.
  double normalization_residual(double s) const;

 private:
  std::string name_;
  SolitonStructure structure_;
  int n_, k_;
  double sphere_radius_;
  double scalar_R_;
  double c0_ = 0.0;
  double rho_max_;
};

SolitonModel make_soliton(SolitonStructure structure, int n, int k, double rho_max = 1e4);

/// Delta rho as a function of rho: (n-1)/rho - 2R/rho + 4R/rho^3.
RadialProfile soliton_delta_rho(const SolitonModel& model);

/// Delta rho at flat radius s computed by differentiating rho(s) in the flat factor:
/// rho_ss + (m-1)/s rho_s. Independent of the closed form above.
double soliton_delta_rho_flat(const SolitonModel& model, double s);

/// Both sides of grad R = 2 Ric(grad f) at flat radius s.
struct HamiltonSides {
  double grad_R = 0.0;
  double two_ric_grad_f = 0.0;
};
HamiltonSides hamilton_identity(const SolitonModel& model, double s);

using AnyModel = std::variant<WarpedModel, SolitonModel>;

const std::string& model_name(const AnyModel& model);

}  // namespace esslab

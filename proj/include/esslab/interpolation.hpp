#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace esslab {

/// Cubic spline with natural end conditions (s'' = 0 at both ends).
/// Derivatives come from the interpolant itself.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline() = default;
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_, y_, m_;  // m_ = second derivatives at knots
};

/// Piecewise cubic Hermite interpolant from values and slopes at knots.
class CubicHermite {
 public:
  CubicHermite() = default;
  CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  double operator()(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  double lo() const { return x_.front(); }
  double hi() const { return x_.back(); }
  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }
  std::span<const double> slopes() const { return dy_; }

 private:
  std::size_t segment(double t) const;

  std::vector<double> x_, y_, dy_;
};

/// Piecewise-linear interpolation, constant extension outside the knots.
/// Preserves monotonicity and sign of the data.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;

  std::span<const double> knots() const { return x_; }
  std::span<const double> values() const { return y_; }

 private:
  std::vector<double> x_, y_;
};

}  // namespace esslab

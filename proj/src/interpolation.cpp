#include "esslab/interpolation.hpp"

#include <algorithm>
#include <cmath>

#include "esslab/errors.hpp"

namespace esslab {
namespace {

void check_knots(const std::vector<double>& x, std::size_t ny, std::size_t min_points) {
  if (x.size() != ny) throw InvalidInput("interpolation: knot and value counts differ");
  if (x.size() < min_points) throw InvalidInput("interpolation: too few knots");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw InvalidInput("interpolation: knots must be strictly increasing");
  }
}

std::size_t locate(std::span<const double> x, double t) {
  if (!(t >= x.front() && t <= x.back())) {
    throw DomainError("interpolation: evaluation point outside tabulated range");
  }
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i == 0) return 0;
  return std::min(i - 1, x.size() - 2);
}

}  // namespace

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_knots(x_, y_.size(), 3);
  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  // Tridiagonal solve for interior second derivatives (Thomas algorithm).
  std::vector<double> c(n, 0.0), rhs(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    const double diag = 2.0 * (h0 + h1);
    const double r = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    rhs[i] = (r - h0 * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = rhs[i] - c[i] * m_[i + 1];
  }
}

std::size_t NaturalCubicSpline::segment(double t) const { return locate(x_, t); }

double NaturalCubicSpline::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

double NaturalCubicSpline::second_derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h;
  const double b = (t - x_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

CubicHermite::CubicHermite(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  check_knots(x_, y_.size(), 2);
  if (dy_.size() != x_.size()) throw InvalidInput("hermite: slope count differs from knot count");
}

std::size_t CubicHermite::segment(double t) const { return locate(x_, t); }

double CubicHermite::operator()(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * dy_[i] +
         (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * dy_[i + 1];
}

double CubicHermite::derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y_[i] + (-6 * s2 + 6 * s) * y_[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * dy_[i] + (3 * s2 - 2 * s) * dy_[i + 1];
}

double CubicHermite::second_derivative(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  return ((12 * s - 6) * y_[i] + (-12 * s + 6) * y_[i + 1]) / (h * h) +
         ((6 * s - 4) * dy_[i] + (6 * s - 2) * dy_[i + 1]) / h;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_knots(x_, y_.size(), 1);
}

double PiecewiseLinear::operator()(double t) const {
  if (x_.size() == 1 || t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double s = (t - x_[i]) / (x_[i + 1] - x_[i]);
  return y_[i] + s * (y_[i + 1] - y_[i]);
}

}  // namespace esslab

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace esslab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double r) const { return r >= lo && r <= hi; }
  double length() const { return hi - lo; }
};

/// A twice-differentiable function of one radial variable on a closed interval.
///
/// Three representations share one interface:
///  - closed form: value and both derivatives supplied by the caller;
///  - derived: only the value is supplied, derivatives by Richardson-extrapolated
///    central differences;
///  - tabulated: natural cubic spline (or cubic Hermite when slopes are known),
///    derivatives taken from the interpolant.
///
/// A profile may also be merely piecewise smooth; it then lists its corners (points
/// where d1 jumps) so that integrals against it can split there.
///
/// Profiles are immutable and cheap to copy.
class RadialProfile {
 public:
  using Fn = std::function<double(double)>;

  RadialProfile() = default;

  static RadialProfile closed_form(std::string name, Fn value, Fn d1, Fn d2, Interval domain);
  static RadialProfile derived(std::string name, Fn value, Interval domain);
  static RadialProfile tabulated(std::string name, std::vector<double> r, std::vector<double> v);
  static RadialProfile hermite(std::string name, std::vector<double> r, std::vector<double> v,
                               std::vector<double> dv);

  /// Throws DomainError outside domain().
  double operator()(double r) const;
  double d1(double r) const;
  double d2(double r) const;

  Interval domain() const;
  const std::string& name() const;
  bool is_tabulated() const;
  bool valid() const { return impl_ != nullptr; }

  /// Copy that records the given corners (sorted on return).
  RadialProfile with_corners(std::vector<double> corners) const;
  const std::vector<double>& corners() const;

  class Impl;

 private:
  explicit RadialProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
  std::shared_ptr<const std::vector<double>> corners_;
};

}  // namespace esslab

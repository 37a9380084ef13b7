#include "esslab/profile.hpp"

#include <algorithm>
#include <cmath>

#include "esslab/errors.hpp"
#include "esslab/interpolation.hpp"

namespace esslab {

class RadialProfile::Impl {
 public:
  Impl(std::string name, Interval domain) : name_(std::move(name)), domain_(domain) {}
  virtual ~Impl() = default;
  virtual double value(double r) const = 0;
  virtual double d1(double r) const = 0;
  virtual double d2(double r) const = 0;
  virtual bool tabulated() const { return false; }

  const std::string& name() const { return name_; }
  Interval domain() const { return domain_; }

  void check(double r) const {
    if (!domain_.contains(r)) {
      throw DomainError("profile '" + name_ + "': r=" + std::to_string(r) + " outside [" +
                        std::to_string(domain_.lo) + ", " + std::to_string(domain_.hi) + "]");
    }
  }

 private:
  std::string name_;
  Interval domain_;
};

namespace {

class ClosedForm final : public RadialProfile::Impl {
 public:
  ClosedForm(std::string name, Interval dom, RadialProfile::Fn v, RadialProfile::Fn a,
             RadialProfile::Fn b)
      : Impl(std::move(name), dom), v_(std::move(v)), a_(std::move(a)), b_(std::move(b)) {}
  double value(double r) const override { return v_(r); }
  double d1(double r) const override { return a_(r); }
  double d2(double r) const override { return b_(r); }

 private:
  RadialProfile::Fn v_, a_, b_;
};

// Central differences with one Richardson step; stencils are pulled inside the domain.
class Derived final : public RadialProfile::Impl {
 public:
  Derived(std::string name, Interval dom, RadialProfile::Fn v)
      : Impl(std::move(name), dom), v_(std::move(v)) {}
  double value(double r) const override { return v_(r); }

  double d1(double r) const override {
    const double h = step(r, 1e-3);
    const double c = centre(r, 2 * h);
    auto d = [&](double s) { return (v_(c + s) - v_(c - s)) / (2 * s); };
    const double base = (4.0 * d(h) - d(2 * h)) / 3.0;
    // Correct back to r when the stencil had to be shifted.
    return c == r ? base : base + (r - c) * d2(c);
  }

  double d2(double r) const override {
    const double h = step(r, 1e-2);
    const double c = centre(r, 2 * h);
    auto d = [&](double s) { return (v_(c + s) - 2.0 * v_(c) + v_(c - s)) / (s * s); };
    return (4.0 * d(h) - d(2 * h)) / 3.0;
  }

 private:
  double step(double r, double rel) const {
    const double h = rel * std::max(1.0, std::abs(r));
    return std::min(h, 0.125 * domain().length());
  }
  double centre(double r, double reach) const {
    const Interval dom = domain();
    if (r - reach < dom.lo) return dom.lo + reach;
    if (r + reach > dom.hi) return dom.hi - reach;
    return r;
  }

  RadialProfile::Fn v_;
};

class Spline final : public RadialProfile::Impl {
 public:
  Spline(std::string name, NaturalCubicSpline s)
      : Impl(std::move(name), Interval{s.lo(), s.hi()}), s_(std::move(s)) {}
  double value(double r) const override { return s_(r); }
  double d1(double r) const override { return s_.derivative(r); }
  double d2(double r) const override { return s_.second_derivative(r); }
  bool tabulated() const override { return true; }

 private:
  NaturalCubicSpline s_;
};

class Hermite final : public RadialProfile::Impl {
 public:
  Hermite(std::string name, CubicHermite h)
      : Impl(std::move(name), Interval{h.lo(), h.hi()}), h_(std::move(h)) {}
  double value(double r) const override { return h_(r); }
  double d1(double r) const override { return h_.derivative(r); }
  double d2(double r) const override { return h_.second_derivative(r); }
  bool tabulated() const override { return true; }

 private:
  CubicHermite h_;
};

}  // namespace

RadialProfile RadialProfile::closed_form(std::string name, Fn value, Fn d1, Fn d2,
                                         Interval domain) {
  if (!(domain.hi > domain.lo)) throw InvalidInput("profile: empty domain");
  return RadialProfile(std::make_shared<ClosedForm>(std::move(name), domain, std::move(value),
                                                    std::move(d1), std::move(d2)));
}

RadialProfile RadialProfile::derived(std::string name, Fn value, Interval domain) {
  if (!(domain.hi > domain.lo)) throw InvalidInput("profile: empty domain");
  return RadialProfile(std::make_shared<Derived>(std::move(name), domain, std::move(value)));
}

RadialProfile RadialProfile::tabulated(std::string name, std::vector<double> r,
                                       std::vector<double> v) {
  return RadialProfile(
      std::make_shared<Spline>(std::move(name), NaturalCubicSpline(std::move(r), std::move(v))));
}

RadialProfile RadialProfile::hermite(std::string name, std::vector<double> r,
                                     std::vector<double> v, std::vector<double> dv) {
  return RadialProfile(std::make_shared<Hermite>(
      std::move(name), CubicHermite(std::move(r), std::move(v), std::move(dv))));
}

double RadialProfile::operator()(double r) const {
  impl_->check(r);
  return impl_->value(r);
}

double RadialProfile::d1(double r) const {
  impl_->check(r);
  return impl_->d1(r);
}

double RadialProfile::d2(double r) const {
  impl_->check(r);
  return impl_->d2(r);
}

Interval RadialProfile::domain() const { return impl_->domain(); }
const std::string& RadialProfile::name() const { return impl_->name(); }
bool RadialProfile::is_tabulated() const { return impl_->tabulated(); }

RadialProfile RadialProfile::with_corners(std::vector<double> corners) const {
  std::sort(corners.begin(), corners.end());
  RadialProfile out = *this;
  out.corners_ = std::make_shared<const std::vector<double>>(std::move(corners));
  return out;
}

const std::vector<double>& RadialProfile::corners() const {
  static const std::vector<double> none;
  return corners_ ? *corners_ : none;
}

}  // namespace esslab

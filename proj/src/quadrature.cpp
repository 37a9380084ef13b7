#include "esslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "esslab/errors.hpp"

namespace esslab::quad {

const KronrodTable& gk21() {
  static const KronrodTable table{
      {0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
       0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
       0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
       0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
       0.294392862701460198131126603103866, 0.148874338981631210884826001129720, 0.0},
      {0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
       0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
       0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
       0.123491976262065851077208529813378, 0.134709217311473325928054001771707,
       0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
       0.149445554002916905664936468389821},
      {0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
       0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
       0.295524224714752870173892994651146}};
  return table;
}

namespace {

template <std::size_t K>
struct Panel {
  double a = 0, b = 0;
  std::array<double, K> value{};
  std::array<double, K> error{};
  double priority = 0;
};

// Abscissae ordering inside a panel: [c - h*x_0, ..., c - h*x_9, c, c + h*x_9, ..., c + h*x_0]
template <std::size_t K>
void eval_panel(const BatchIntegrand<K>& f, Panel<K>& p, std::array<double, kPanelPoints>& xs,
                std::array<std::array<double, kPanelPoints>, K>& ys) {
  const auto& t = gk21();
  const double c = 0.5 * (p.a + p.b);
  const double h = 0.5 * (p.b - p.a);
  for (std::size_t j = 0; j < 10; ++j) {
    xs[j] = c - h * t.nodes[j];
    xs[20 - j] = c + h * t.nodes[j];
  }
  xs[10] = c;
  std::array<std::span<double>, K> out;
  for (std::size_t k = 0; k < K; ++k) out[k] = std::span<double>(ys[k]);
  f(std::span<const double>(xs), out);
  for (std::size_t k = 0; k < K; ++k) {
    const auto& y = ys[k];
    double kr = t.kronrod_weights[10] * y[10];
    double ga = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
      const double pair = y[j] + y[20 - j];
      kr += t.kronrod_weights[j] * pair;
      if (j % 2 == 1) ga += t.gauss_weights[j / 2] * pair;
    }
    p.value[k] = kr * h;
    p.error[k] = std::abs((kr - ga) * h);
  }
}

}  // namespace

template <std::size_t K>
Result<K> integrate_batch(const BatchIntegrand<K>& f, std::span<const double> breaks,
                          const Options& opt) {
  Result<K> res;
  if (breaks.size() < 2) return res;
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (!(breaks[i] >= breaks[i - 1])) throw InvalidInput("quadrature: breakpoints must be sorted");
  }

  std::array<double, kPanelPoints> xs{};
  std::array<std::array<double, kPanelPoints>, K> ys{};
  std::vector<Panel<K>> panels;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (breaks[i + 1] == breaks[i]) continue;
    Panel<K> p;
    p.a = breaks[i];
    p.b = breaks[i + 1];
    eval_panel(f, p, xs, ys);
    panels.push_back(p);
  }

  auto totals = [&](std::array<double, K>& val, std::array<double, K>& err) {
    val.fill(0.0);
    err.fill(0.0);
    for (const auto& p : panels) {
      for (std::size_t k = 0; k < K; ++k) {
        val[k] += p.value[k];
        err[k] += p.error[k];
      }
    }
  };

  auto cmp = [](const Panel<K>* x, const Panel<K>* y) { return x->priority < y->priority; };
  std::array<double, K> val{}, err{};
  while (true) {
    totals(val, err);
    std::array<double, K> tol{};
    bool done = true;
    for (std::size_t k = 0; k < K; ++k) {
      tol[k] = std::max(opt.abs_tol, opt.rel_tol * std::abs(val[k]));
      if (!(err[k] <= tol[k])) done = false;
    }
    if (done) {
      res.converged = true;
      break;
    }
    if (panels.size() >= opt.max_panels) break;
    // Bisect the batch of panels whose normalized error is largest.
    std::size_t worst = 0;
    double worst_pri = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double pri = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double scale = tol[k] > 0.0 ? tol[k] : std::numeric_limits<double>::min();
        pri = std::max(pri, panels[i].error[k] / scale);
      }
      panels[i].priority = pri;
      if (pri > worst_pri) {
        worst_pri = pri;
        worst = i;
      }
    }
    // Split the worst panel and every panel whose priority is comparable, to keep
    // the number of outer passes logarithmic in the panel count.
    std::vector<Panel<K>*> order;
    order.reserve(panels.size());
    for (auto& p : panels) order.push_back(&p);
    std::sort(order.begin(), order.end(), [&](auto* x, auto* y) { return cmp(y, x); });
    const double cutoff = 0.25 * worst_pri;
    std::vector<Panel<K>> fresh;
    std::vector<bool> split(panels.size(), false);
    for (auto* p : order) {
      if (p->priority < cutoff && p != &panels[worst]) break;
      if (panels.size() + fresh.size() >= opt.max_panels) break;
      const std::size_t idx = static_cast<std::size_t>(p - panels.data());
      const double mid = 0.5 * (p->a + p->b);
      if (!(mid > p->a && mid < p->b)) continue;  // interval at floating-point resolution
      Panel<K> left, right;
      left.a = p->a;
      left.b = mid;
      right.a = mid;
      right.b = p->b;
      eval_panel(f, left, xs, ys);
      eval_panel(f, right, xs, ys);
      fresh.push_back(left);
      fresh.push_back(right);
      split[idx] = true;
    }
    if (fresh.empty()) break;
    std::vector<Panel<K>> next;
    next.reserve(panels.size() + fresh.size());
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (!split[i]) next.push_back(panels[i]);
    }
    for (auto& p : fresh) next.push_back(p);
    panels = std::move(next);
  }
  totals(val, err);
  res.value = val;
  res.error = err;
  res.panels = panels.size();
  return res;
}

template Result<1> integrate_batch<1>(const BatchIntegrand<1>&, std::span<const double>,
                                      const Options&);
template Result<2> integrate_batch<2>(const BatchIntegrand<2>&, std::span<const double>,
                                      const Options&);
template Result<3> integrate_batch<3>(const BatchIntegrand<3>&, std::span<const double>,
                                      const Options&);
template Result<5> integrate_batch<5>(const BatchIntegrand<5>&, std::span<const double>,
                                      const Options&);

Result<1> integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                    const Options& opt) {
  BatchIntegrand<1> batch = [&f](std::span<const double> x, std::array<std::span<double>, 1> out) {
    for (std::size_t j = 0; j < x.size(); ++j) out[0][j] = f(x[j]);
  };
  return integrate_batch<1>(batch, breaks, opt);
}

Result<1> integrate(const std::function<double(double)>& f, double a, double b,
                    const Options& opt) {
  const std::array<double, 2> br{a, b};
  return integrate(f, std::span<const double>(br), opt);
}

double log_integral_exp(const std::function<double(double)>& log_f, double a, double b,
                        const Options& opt) {
  if (!(b > a)) return -std::numeric_limits<double>::infinity();
  // Reference level from a coarse scan; the integrand is then at most O(1)
  // wherever the scan is representative.
  double m = -std::numeric_limits<double>::infinity();
  constexpr int kScan = 64;
  for (int i = 0; i <= kScan; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / kScan;
    const double v = log_f(x);
    if (std::isfinite(v)) m = std::max(m, v);
  }
  if (!std::isfinite(m)) return -std::numeric_limits<double>::infinity();
  auto scaled = [&](double x) {
    const double v = log_f(x);
    return std::isfinite(v) ? std::exp(v - m) : 0.0;
  };
  const auto r = integrate(scaled, a, b, opt);
  if (!(r.value[0] > 0.0)) return -std::numeric_limits<double>::infinity();
  return m + std::log(r.value[0]);
}

}  // namespace esslab::quad

#include "esslab/spectrum_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "esslab/errors.hpp"
#include "esslab/kernels.hpp"

namespace esslab {

std::string to_string(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
  if (text == "dirichlet") return BoundaryCondition::dirichlet;
  if (text == "neumann") return BoundaryCondition::neumann;
  throw InvalidInput("boundary condition must be 'dirichlet' or 'neumann', got '" + text + "'");
}

TridiagonalOperator assemble_from_log_weight(const std::function<double(double)>& log_w, double lo,
                                             double hi, std::size_t N, BoundaryCondition inner,
                                             BoundaryCondition outer, std::string source) {
  if (N < 16) throw InvalidInput("oracle: need N >= 16 cells");
  if (!(hi > lo)) throw InvalidInput("oracle: empty interval");
  TridiagonalOperator op;
  op.h = (hi - lo) / static_cast<double>(N);
  op.lo = lo;
  op.hi = hi;
  op.inner = inner;
  op.outer = outer;
  op.weight_source = std::move(source);

  std::vector<double> lc(N), lf(N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    lc[i] = log_w(lo + (static_cast<double>(i) + 0.5) * op.h);
    if (!std::isfinite(lc[i])) {
      throw InvalidInput("oracle: non-positive weight inside the window at r=" +
                         std::to_string(lo + (static_cast<double>(i) + 0.5) * op.h));
    }
  }
  for (std::size_t i = 0; i <= N; ++i) lf[i] = log_w(i == N ? hi : lo + static_cast<double>(i) * op.h);
  op.inner_natural = !(lf[0] > -std::numeric_limits<double>::infinity());

  const double ih2 = 1.0 / (op.h * op.h);
  auto ratio = [&](double face, double cell) {
    return std::isfinite(face) ? std::exp(face - cell) : 0.0;
  };
  op.d.assign(N, 0.0);
  op.e.assign(N - 1, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    double diag = 0.0;
    if (i > 0) {
      diag += ratio(lf[i], lc[i]);
    } else if (!op.inner_natural && inner == BoundaryCondition::dirichlet) {
      diag += 2.0 * ratio(lf[0], lc[0]);
    }
    if (i + 1 < N) {
      diag += ratio(lf[i + 1], lc[i]);
      op.e[i] = -std::exp(lf[i + 1] - 0.5 * (lc[i] + lc[i + 1])) * ih2;
    } else if (outer == BoundaryCondition::dirichlet) {
      diag += 2.0 * ratio(lf[N], lc[i]);
    }
    op.d[i] = diag * ih2;
  }
  return op;
}

TridiagonalOperator assemble_radial_operator(const WarpedModel& model, double L, std::size_t N,
                                             BoundaryCondition bc) {
  if (L > model.r_max()) throw InvalidInput("oracle: L exceeds the model r_max");
  if (!(L > model.r_lo())) throw InvalidInput("oracle: L must exceed the inner radius");
  auto lw = [&model](double r) {
    const double g = model.warp()(r);
    return g > 0.0 ? model.log_weight(r) : -std::numeric_limits<double>::infinity();
  };
  return assemble_from_log_weight(lw, model.r_lo(), L, N, BoundaryCondition::dirichlet, bc,
                                  model.name());
}

namespace {

struct Sturm {
  const TridiagonalOperator& op;
  std::vector<double> e2;
  double pivmin;

  explicit Sturm(const TridiagonalOperator& o) : op(o), e2(o.e.size()) {
    double m = 1.0;
    for (std::size_t i = 0; i < e2.size(); ++i) {
      e2[i] = o.e[i] * o.e[i];
      m = std::max(m, e2[i]);
    }
    pivmin = std::numeric_limits<double>::min() * m;
  }

  void count4(const double* shifts, std::size_t* out) const {
    int c[4];
    kernels::sturm_count4(op.d.data(), e2.data(), op.d.size(), shifts, pivmin, c);
    for (int i = 0; i < 4; ++i) out[i] = static_cast<std::size_t>(c[i]);
  }

  std::size_t count(double x) const {
    const double s[4] = {x, x, x, x};
    std::size_t c[4];
    count4(s, c);
    return c[0];
  }
};

// Bisection for eigenvalue indices [first, first + n) inside [lo, hi], four at a time.
std::vector<double> bisect(const Sturm& st, std::size_t first, std::size_t n, double lo, double hi,
                           double tol) {
  std::vector<double> out(n);
  for (std::size_t base = 0; base < n; base += 4) {
    double a[4], b[4];
    bool done[4];
    std::size_t idx[4];
    for (int l = 0; l < 4; ++l) {
      const std::size_t k = base + static_cast<std::size_t>(l);
      idx[l] = first + std::min(k, n - 1);
      a[l] = lo;
      b[l] = hi;
      done[l] = k >= n;
    }
    while (true) {
      bool all = true;
      double mid[4];
      for (int l = 0; l < 4; ++l) {
        mid[l] = 0.5 * (a[l] + b[l]);
        if (!done[l] && (b[l] - a[l] <= tol || !(mid[l] > a[l] && mid[l] < b[l]))) done[l] = true;
        all = all && done[l];
      }
      if (all) break;
      std::size_t c[4];
      st.count4(mid, c);
      for (int l = 0; l < 4; ++l) {
        if (done[l]) continue;
        if (c[l] > idx[l]) {
          b[l] = mid[l];
        } else {
          a[l] = mid[l];
        }
      }
    }
    for (int l = 0; l < 4; ++l) {
      const std::size_t k = base + static_cast<std::size_t>(l);
      if (k < n) out[k] = 0.5 * (a[l] + b[l]);
    }
  }
  return out;
}

}  // namespace

std::size_t count_below(const TridiagonalOperator& op, double x) { return Sturm(op).count(x); }

void count_below4(const TridiagonalOperator& op, const double* shifts, std::size_t* counts) {
  Sturm(op).count4(shifts, counts);
}

std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& op) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const std::size_t n = op.d.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(op.e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(op.e[i]) : 0.0);
    lo = std::min(lo, op.d[i] - r);
    hi = std::max(hi, op.d[i] + r);
  }
  return {lo, hi};
}

SpectrumApprox eig_tridiagonal(const TridiagonalOperator& op, double lo, double hi, double tol) {
  SpectrumApprox out;
  out.lo = lo;
  out.hi = hi;
  out.L = op.hi;
  out.N = op.size();
  out.bc = op.outer;
  const auto [glo, ghi] = gershgorin_bounds(op);
  const double a = std::max(lo, glo - 1.0);
  const double b = std::min(hi, ghi + 1.0);
  if (!(b > a)) return out;
  const Sturm st(op);
  const std::size_t ca = st.count(a);
  const std::size_t cb = st.count(b);
  out.first_index = ca;
  if (cb > ca) out.eigenvalues = bisect(st, ca, cb - ca, a, b, tol);
  return out;
}

SpectrumApprox eig_tridiagonal_index(const TridiagonalOperator& op, std::size_t first,
                                     std::size_t count, double tol) {
  if (first + count > op.size()) throw InvalidInput("oracle: eigenvalue index out of range");
  SpectrumApprox out;
  const auto [glo, ghi] = gershgorin_bounds(op);
  out.lo = glo - 1.0;
  out.hi = ghi + 1.0;
  out.L = op.hi;
  out.N = op.size();
  out.bc = op.outer;
  out.first_index = first;
  out.eigenvalues = bisect(Sturm(op), first, count, out.lo, out.hi, tol);
  return out;
}

bool interlacing_holds(const TridiagonalOperator& dirichlet, const TridiagonalOperator& neumann,
                       const std::vector<double>& edges) {
  const Sturm sd(dirichlet), sn(neumann);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const std::size_t cd = sd.count(edges[i + 1]) - sd.count(edges[i]);
    const std::size_t cn = sn.count(edges[i + 1]) - sn.count(edges[i]);
    if (cd > cn + 1) return false;
  }
  return true;
}

FillInReport estimate_essential_spectrum(const WarpedModel& model, double lambda_cap,
                                         const std::vector<double>& L_list, std::size_t N_per_L,
                                         unsigned threads, double tolerance) {
  if (!(lambda_cap > 0.0)) throw InvalidInput("oracle: cap must be positive");
  if (L_list.empty()) throw InvalidInput("oracle: empty L list");
  if (!std::is_sorted(L_list.begin(), L_list.end()) ||
      std::adjacent_find(L_list.begin(), L_list.end()) != L_list.end()) {
    throw InvalidInput("oracle: L list must be strictly increasing");
  }
  FillInReport rep;
  rep.cap = lambda_cap;
  rep.levels.resize(L_list.size());

  auto run_level = [&](std::size_t i) {
    FillInLevel& lv = rep.levels[i];
    lv.L = L_list[i];
    lv.N = N_per_L;
    const auto D = assemble_radial_operator(model, lv.L, N_per_L, BoundaryCondition::dirichlet);
    const auto Nm = assemble_radial_operator(model, lv.L, N_per_L, BoundaryCondition::neumann);
    const auto [glo, ghi] = gershgorin_bounds(D);
    lv.dirichlet = eig_tridiagonal(D, glo - 1.0, lambda_cap).eigenvalues;
    const auto [nlo, nhi] = gershgorin_bounds(Nm);
    lv.neumann = eig_tridiagonal(Nm, nlo - 1.0, lambda_cap).eigenvalues;
    const std::size_t below = count_below(D, lambda_cap);
    lv.next_dirichlet = below < D.size() ? eig_tridiagonal_index(D, below, 1).eigenvalues[0] : ghi;
    std::vector<double> pts{0.0};
    pts.insert(pts.end(), lv.dirichlet.begin(), lv.dirichlet.end());
    pts.push_back(lv.next_dirichlet);
    std::sort(pts.begin(), pts.end());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) lv.max_gap = std::max(lv.max_gap, pts[k + 1] - pts[k]);
    std::vector<double> edges;
    constexpr int kBins = 16;
    const double start = std::min(glo, nlo) - 1.0;
    edges.push_back(start);
    for (int b = 0; b <= kBins; ++b) edges.push_back(lambda_cap * b / kBins);
    std::sort(edges.begin(), edges.end());
    lv.interlacing = interlacing_holds(D, Nm, edges);
  };

  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(L_list.size())));
  if (count == 1) {
    for (std::size_t i = 0; i < L_list.size(); ++i) run_level(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) {
      pool.emplace_back([&]() {
        for (std::size_t i = next.fetch_add(1); i < L_list.size(); i = next.fetch_add(1)) run_level(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  rep.interlacing = std::all_of(rep.levels.begin(), rep.levels.end(),
                                [](const FillInLevel& l) { return l.interlacing; });
  rep.fills = rep.levels.size() >= 2;
  for (std::size_t i = 0; i + 1 < rep.levels.size(); ++i) {
    const double gr = rep.levels[i].max_gap / rep.levels[i + 1].max_gap;
    const double lr = rep.levels[i + 1].L / rep.levels[i].L;
    rep.gap_ratios.push_back(gr);
    rep.L_ratios.push_back(lr);
    if (!(std::abs(gr / lr - 1.0) <= tolerance)) rep.fills = false;
  }
  return rep;
}

}  // namespace esslab

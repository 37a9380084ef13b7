#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace esslab::quad {

/// Nodes and weights of the 21-point Gauss-Kronrod pair on [-1, 1]
/// (positive half, node 0 is the largest abscissa, the last is 0).
struct KronrodTable {
  static constexpr std::size_t kHalf = 11;
  std::array<double, kHalf> nodes;
  std::array<double, kHalf> kronrod_weights;
  std::array<double, 5> gauss_weights;  // pair with nodes[1], nodes[3], ..., nodes[9]
};
const KronrodTable& gk21();

/// Number of points per Kronrod panel.
inline constexpr std::size_t kPanelPoints = 21;

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  std::size_t max_panels = 20000;
};

template <std::size_t K>
struct Result {
  std::array<double, K> value{};
  std::array<double, K> error{};
  std::size_t panels = 0;
  bool converged = false;
};

/// Batch integrand: fill out[k][j] = f_k(x[j]) for every abscissa in `x`.
/// Batching one panel at a time lets callers vectorize the evaluation.
template <std::size_t K>
using BatchIntegrand =
    std::function<void(std::span<const double> x, std::array<std::span<double>, K> out)>;

/// Globally adaptive Gauss-Kronrod (21-point) integration of K integrands
/// sharing abscissae over the union of [breaks[i], breaks[i+1]].
/// The panel with the largest error (relative to each component's tolerance) is bisected.
template <std::size_t K>
Result<K> integrate_batch(const BatchIntegrand<K>& f, std::span<const double> breaks,
                          const Options& opt = {});

/// Scalar convenience wrapper.
Result<1> integrate(const std::function<double(double)>& f, double a, double b,
                    const Options& opt = {});

/// Scalar integral over a partition.
Result<1> integrate(const std::function<double(double)>& f, std::span<const double> breaks,
                    const Options& opt = {});

/// log( integral_a^b exp(log_f(x)) dx ), robust when exp(log_f) overflows.
/// Returns -inf for an empty interval.
double log_integral_exp(const std::function<double(double)>& log_f, double a, double b,
                        const Options& opt = {});

extern template Result<1> integrate_batch<1>(const BatchIntegrand<1>&, std::span<const double>,
                                             const Options&);
extern template Result<2> integrate_batch<2>(const BatchIntegrand<2>&, std::span<const double>,
                                             const Options&);
extern template Result<3> integrate_batch<3>(const BatchIntegrand<3>&, std::span<const double>,
                                             const Options&);
extern template Result<5> integrate_batch<5>(const BatchIntegrand<5>&, std::span<const double>,
                                             const Options&);

}  // namespace esslab::quad

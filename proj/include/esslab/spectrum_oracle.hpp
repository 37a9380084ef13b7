#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "esslab/geometry.hpp"

namespace esslab {

enum class BoundaryCondition { dirichlet, neumann };
std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

/// Symmetric tridiagonal matrix; only d and e are stored, so symmetry is exact.
struct TridiagonalOperator {
  std::vector<double> d;  // diagonal, size N
  std::vector<double> e;  // off-diagonal, size N-1
  double h = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool inner_natural = false;  // inner face has zero weight (pole)
  BoundaryCondition inner = BoundaryCondition::dirichlet;
  BoundaryCondition outer = BoundaryCondition::dirichlet;
  std::string weight_source;

  std::size_t size() const { return d.size(); }
};

/// Cell-centred discretization of u -> -(w u')'/w on [lo, hi] with N cells, symmetrized
/// by sqrt(w). Faces where w = 0 (a pole) carry no flux; other ends use a ghost cell
/// (u_ghost = -u for Dirichlet, u_ghost = u for Neumann). Weights are passed as logs.
TridiagonalOperator assemble_from_log_weight(const std::function<double(double)>& log_w, double lo,
                                             double hi, std::size_t N, BoundaryCondition inner,
                                             BoundaryCondition outer, std::string source = "custom");

/// Radial Laplacian of a warped model on [r_lo, L]. The inner end is the natural
/// (zero-flux) face at a pole and Dirichlet at a boundary; `bc` applies at r = L.
TridiagonalOperator assemble_radial_operator(const WarpedModel& model, double L, std::size_t N,
                                             BoundaryCondition bc);

/// Number of eigenvalues strictly below x (inertia of T - x).
std::size_t count_below(const TridiagonalOperator& op, double x);
/// Counts for four shifts at once (vectorized when available).
void count_below4(const TridiagonalOperator& op, const double* shifts, std::size_t* counts);

/// Gershgorin enclosure [lo, hi] of the spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagonalOperator& op);

struct SpectrumApprox {
  std::vector<double> eigenvalues;  // ascending
  double lo = 0.0, hi = 0.0;        // search interval
  std::size_t first_index = 0;      // index of eigenvalues[0] in the full spectrum
  double L = 0.0;
  std::size_t N = 0;
  BoundaryCondition bc = BoundaryCondition::dirichlet;
};

/// Eigenvalues in [lo, hi) by Sturm bisection, to `tol` absolute.
/// An interval outside the Gershgorin bounds gives an empty result.
SpectrumApprox eig_tridiagonal(const TridiagonalOperator& op, double lo, double hi,
                               double tol = 1e-10);
/// Eigenvalues with indices [first, first + count) in ascending order.
SpectrumApprox eig_tridiagonal_index(const TridiagonalOperator& op, std::size_t first,
                                     std::size_t count, double tol = 1e-10);

/// Dirichlet count <= Neumann count + 1 on every [edges[i], edges[i+1]).
bool interlacing_holds(const TridiagonalOperator& dirichlet, const TridiagonalOperator& neumann,
                       const std::vector<double>& edges);

struct FillInLevel {
  double L = 0.0;
  std::size_t N = 0;
  std::vector<double> dirichlet;   // eigenvalues below the cap
  std::vector<double> neumann;
  double next_dirichlet = 0.0;     // first eigenvalue at or above the cap
  double max_gap = 0.0;            // over {0} + dirichlet + next_dirichlet
  bool interlacing = false;
};

struct FillInReport {
  double cap = 0.0;
  std::vector<FillInLevel> levels;
  std::vector<double> gap_ratios;  // max_gap[i] / max_gap[i+1]
  std::vector<double> L_ratios;    // L[i+1] / L[i]
  bool fills = false;
  bool interlacing = false;
};

FillInReport estimate_essential_spectrum(const WarpedModel& model, double lambda_cap,
                                         const std::vector<double>& L_list, std::size_t N_per_L,
                                         unsigned threads = 1, double tolerance = 0.25);

}  // namespace esslab

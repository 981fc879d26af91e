#pragma once

/// Discrete resistance form, discrete Laplacian, and pointwise gradient-norm
/// recovery from cell averages, with continuum reference values.
///
/// The energy at level m is
///   E_m(f, g) = M_P * sum_p A_p * sum over unordered p-neighbor cell pairs
///               (B_w'(f) - B_w(f)) * (B_w'(g) - B_w(g)),
/// each adjacency counted once, pairs with an endpoint outside the square
/// simply absent. The discrete Laplacian on an interior cell is
///   M_P * 4^m * (sum_p A_p * sum of neighbor averages - B_w),
/// a zero-sum stencil since 8 * sum c_p A_p = 1; non-interior cells carry an
/// explicit undefined marker.

#include <optional>
#include <vector>

#include "dyadic/expr.hpp"
#include "dyadic/grid.hpp"
#include "dyadic/stencil.hpp"

namespace dyadic {

/// E_m at the finest level of the inputs. Throws Errc::level_mismatch when
/// the grids disagree.
double energy(const CellAverages& f, const CellAverages& g,
              const StencilFamily& stencil);

/// E_m from the aggregated level-m values of finer grids.
double energy_at_level(const CellAverages& f, const CellAverages& g,
                       const StencilFamily& stencil, int level);

struct EnergyResult {
  int m_lo = 0;
  int m_hi = 0;
  std::vector<double> values;  // E_m for m = m_lo .. m_hi
  std::vector<double> errors;  // |E_m - reference|
  double reference = 0;
};

/// One finest-level quadrature pass per function; coarser energies reuse the
/// aggregated averages.
EnergyResult energy_sweep(const ExprPtr& f, const ExprPtr& g,
                          const StencilFamily& stencil, int m_lo, int m_hi,
                          int quad_order, int threads = 1);

/// Integral of grad f . grad g over the unit square by composite
/// Gauss-Legendre on a 2^subdiv x 2^subdiv grid, gradients from eval_jet2.
double dirichlet_reference(const ExprPtr& f, const ExprPtr& g,
                           int quad_order = 12, int subdiv = 5);

struct LaplacianField {
  int level = 0;
  StencilFamily stencil;
  InteriorMask mask;
  std::vector<double> values;  // row-major; NaN outside the mask

  std::optional<double> at(int i, int j) const;
};

/// Throws Errc::empty_interior when no cell has all its neighbors inside.
LaplacianField discrete_laplacian(const CellAverages& f,
                                  const StencilFamily& stencil);

/// Pre-limit gradient-norm recovery at one interior cell:
/// (1/2) * M_P * l^-2 * sum_p A_p * sum over p-neighbors (B_w' - B_w)^2.
/// Throws Errc::boundary_cell for cells outside the interior mask.
double gradient_norm_estimate(const CellAverages& f, int i, int j,
                              const StencilFamily& stencil);
double gradient_norm_estimate(const CellAverages& f, const CellAddress& cell,
                              const StencilFamily& stencil);

}  // namespace dyadic

#include "dyadic/forms.hpp"

#include <cmath>
#include <limits>

#include "dyadic/quadrature.hpp"
#include "dyadic/util.hpp"

namespace dyadic {

namespace {

// Offsets that select each unordered neighbor pair exactly once: the
// lexicographically positive half of every sign/axis choice.
std::vector<std::array<int, 2>> positive_offsets(StencilPair p) {
  std::vector<std::array<int, 2>> out;
  for (const auto& d : neighbor_offsets(p)) {
    if (d[0] > 0 || (d[0] == 0 && d[1] > 0)) out.push_back(d);
  }
  return out;
}

}  // namespace

double energy_at_level(const CellAverages& f, const CellAverages& g,
                       const StencilFamily& stencil, int level) {
  const std::span<const GridReal> bf = f.level_values(level);
  const std::span<const GridReal> bg = g.level_values(level);
  const int n = 1 << level;

  GridReal total = 0;
  std::vector<GridReal> row_sums;
  row_sums.reserve(static_cast<std::size_t>(n));
  for (std::size_t pi = 0; pi < stencil.pairs().size(); ++pi) {
    const StencilPair p = stencil.pairs()[pi];
    GridReal pair_acc = 0;
    for (const auto& [d1, d2] : positive_offsets(p)) {
      row_sums.clear();
      for (int j = 0; j < n; ++j) {
        const int jj = j + d2;
        if (jj < 0 || jj >= n) continue;
        GridReal row = 0;
        const int i_lo = std::max(0, -d1);
        const int i_hi = std::min(n, n - d1);
        const std::size_t base = static_cast<std::size_t>(j) * n;
        const std::size_t nbase = static_cast<std::size_t>(jj) * n;
        for (int i = i_lo; i < i_hi; ++i) {
          const GridReal df = bf[nbase + static_cast<std::size_t>(i + d1)] -
                              bf[base + static_cast<std::size_t>(i)];
          const GridReal dg = bg[nbase + static_cast<std::size_t>(i + d1)] -
                              bg[base + static_cast<std::size_t>(i)];
          row += df * dg;
        }
        row_sums.push_back(row);
      }
      pair_acc += pairwise_sum(std::span<const GridReal>(row_sums));
    }
    total += rational_cast<GridReal>(stencil.coefficients()[pi]) * pair_acc;
  }
  total *= rational_cast<GridReal>(stencil.renorm());
  return static_cast<double>(total);
}

double energy(const CellAverages& f, const CellAverages& g,
              const StencilFamily& stencil) {
  if (f.level() != g.level()) {
    throw Error(Errc::level_mismatch,
                "energy requires both grids at the same level");
  }
  return energy_at_level(f, g, stencil, f.level());
}

EnergyResult energy_sweep(const ExprPtr& f, const ExprPtr& g,
                          const StencilFamily& stencil, int m_lo, int m_hi,
                          int quad_order, int threads) {
  if (m_lo < 0 || m_hi < m_lo) {
    throw Error(Errc::invalid_argument, "bad level range");
  }
  const CellAverages af = CellAverages::compute(f, m_hi, quad_order, threads);
  const CellAverages ag =
      tree_equal(f, g) ? af : CellAverages::compute(g, m_hi, quad_order, threads);
  EnergyResult out;
  out.m_lo = m_lo;
  out.m_hi = m_hi;
  out.reference = dirichlet_reference(f, g, quad_order);
  for (int m = m_lo; m <= m_hi; ++m) {
    out.values.push_back(energy_at_level(af, ag, stencil, m));
    out.errors.push_back(std::fabs(out.values.back() - out.reference));
  }
  return out;
}

double dirichlet_reference(const ExprPtr& f, const ExprPtr& g, int quad_order,
                           int subdiv) {
  const QuadRule<double> rule = gauss_legendre<double>(quad_order);
  const int n = 1 << subdiv;
  const double side = 1.0 / n;
  const bool same = tree_equal(f, g);
  std::vector<double> cell_sums;
  cell_sums.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double cy = (j + 0.5) * side;
    for (int i = 0; i < n; ++i) {
      const double cx = (i + 0.5) * side;
      double acc = 0;
      for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
        const double x = cx + 0.5 * side * rule.nodes[a];
        double row = 0;
        for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
          const double y = cy + 0.5 * side * rule.nodes[b];
          const Jet2 jf = eval_jet2(f, {x, y});
          if (same) {
            row += rule.weights[b] *
                   (jf.grad[0] * jf.grad[0] + jf.grad[1] * jf.grad[1]);
          } else {
            const Jet2 jg = eval_jet2(g, {x, y});
            row += rule.weights[b] *
                   (jf.grad[0] * jg.grad[0] + jf.grad[1] * jg.grad[1]);
          }
        }
        acc += rule.weights[a] * row;
      }
      // Mean over the cell times its measure.
      cell_sums.push_back(acc / 4 * side * side);
    }
  }
  return pairwise_sum(std::span<const double>(cell_sums));
}

LaplacianField discrete_laplacian(const CellAverages& f,
                                  const StencilFamily& stencil) {
  const int m = f.level();
  LaplacianField field;
  field.level = m;
  field.mask = InteriorMask::compute(m, stencil.pairs());
  if (field.mask.count() == 0) {
    throw Error(Errc::empty_interior,
                "no interior cells at level " + std::to_string(m));
  }
  const int n = 1 << m;
  field.values.assign(static_cast<std::size_t>(n) * n,
                      std::numeric_limits<double>::quiet_NaN());

  const std::span<const GridReal> b = f.level_values(m);
  const GridReal scale =
      rational_cast<GridReal>(stencil.renorm()) * std::ldexp(1.0L, 2 * m);

  std::vector<GridReal> coeffs;
  std::vector<std::vector<std::array<int, 2>>> offsets;
  for (std::size_t pi = 0; pi < stencil.pairs().size(); ++pi) {
    coeffs.push_back(rational_cast<GridReal>(stencil.coefficients()[pi]));
    offsets.push_back(neighbor_offsets(stencil.pairs()[pi]));
  }

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (!field.mask.contains(i, j)) continue;
      const GridReal center = b[static_cast<std::size_t>(j) * n + i];
      // Difference form of the zero-sum stencil: exact in real arithmetic
      // because 8 * sum c_p A_p = 1, and it cancels the O(1) part of the
      // averages before the 4^m amplification.
      GridReal acc = 0;
      for (std::size_t pi = 0; pi < coeffs.size(); ++pi) {
        GridReal local = 0;
        for (const auto& [d1, d2] : offsets[pi]) {
          local += b[static_cast<std::size_t>(j + d2) * n + (i + d1)] - center;
        }
        acc += coeffs[pi] * local;
      }
      field.values[static_cast<std::size_t>(j) * n + i] =
          static_cast<double>(scale * acc);
    }
  }
  return field;
}

std::optional<double> LaplacianField::at(int i, int j) const {
  if (!mask.contains(i, j)) return std::nullopt;
  return values[static_cast<std::size_t>(j) * (1 << level) + i];
}

double gradient_norm_estimate(const CellAverages& f, int i, int j,
                              const StencilFamily& stencil) {
  const int m = f.level();
  const InteriorMask mask = InteriorMask::compute(m, stencil.pairs());
  if (!mask.contains(i, j)) {
    throw Error(Errc::boundary_cell,
                "cell (" + std::to_string(i) + "," + std::to_string(j) +
                    ") has neighbors outside the square");
  }
  const int n = 1 << m;
  const std::span<const GridReal> b = f.level_values(m);
  const GridReal center = b[static_cast<std::size_t>(j) * n + i];
  GridReal acc = 0;
  for (std::size_t pi = 0; pi < stencil.pairs().size(); ++pi) {
    GridReal local = 0;
    for (const auto& [d1, d2] : neighbor_offsets(stencil.pairs()[pi])) {
      const GridReal diff =
          b[static_cast<std::size_t>(j + d2) * n + (i + d1)] - center;
      local += diff * diff;
    }
    acc += rational_cast<GridReal>(stencil.coefficients()[pi]) * local;
  }
  const GridReal inv_l2 = std::ldexp(1.0L, 2 * m);
  return static_cast<double>(rational_cast<GridReal>(stencil.renorm()) / 2 *
                             inv_l2 * acc);
}

double gradient_norm_estimate(const CellAverages& f, const CellAddress& cell,
                              const StencilFamily& stencil) {
  const CellCoord c = word_to_coord(cell);
  if (c.level != f.level()) {
    throw Error(Errc::level_mismatch,
                "cell word length does not match the grid level");
  }
  return gradient_norm_estimate(f, c.i, c.j, stencil);
}

}  // namespace dyadic

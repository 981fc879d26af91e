#pragma once

/// Dyadic decomposition of the unit square.
///
/// A level-m cell is addressed either by a word over {1,2,3,4} (digit ->
/// quadrant: 1 lower-left, 2 lower-right, 3 upper-right, 4 upper-left, with
/// the first digit selecting the coarsest quadrant) or by (level, column i,
/// row j) with 0 <= i, j < 2^m, i increasing to the right and j upward.
///
/// Cell averages are carried in long double: the discrete Laplacian divides
/// stencil combinations by the squared side length, which amplifies storage
/// rounding by 4^m, and 80-bit storage keeps that amplified noise well under
/// the tolerances at every desk-scale level.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "dyadic/expr.hpp"
#include "dyadic/stencil.hpp"

namespace dyadic {

using GridReal = long double;

struct CellAddress {
  std::vector<std::uint8_t> word;  // digits in {1,2,3,4}; empty = whole square
};

struct CellCoord {
  int level = 0;
  int i = 0;
  int j = 0;
  friend bool operator==(const CellCoord&, const CellCoord&) = default;
};

/// Throws Errc::invalid_digit on digits outside {1,2,3,4}.
CellCoord word_to_coord(const CellAddress& address);
CellAddress coord_to_word(CellCoord coord);

/// Center and side length of the addressed cell.
struct CellGeometry {
  std::array<double, 2> center{0.5, 0.5};
  double side = 1.0;
};
CellGeometry word_to_cell(const CellAddress& address);
CellGeometry coord_geometry(CellCoord coord);

/// All cell averages of a function at level m, plus every coarser level.
/// The finest level is q x q Gauss-Legendre per cell; each parent is the
/// exact mean of its four children, so the subdivision identity
/// parent = (1/4) * sum(children) holds by construction.
class CellAverages {
 public:
  static CellAverages compute(const ExprPtr& f, int level, int quad_order,
                              int threads = 1);

  int level() const { return level_; }
  int quad_order() const { return quad_order_; }

  GridReal value(int level, int i, int j) const;
  std::span<const GridReal> level_values(int level) const;  // row-major j*n+i

 private:
  CellAverages() = default;
  int level_ = 0;
  int quad_order_ = 0;
  std::vector<std::vector<GridReal>> levels_;
};

/// Cells of a level whose every p-neighbor, over all offsets of all pairs,
/// stays inside the unit square.
class InteriorMask {
 public:
  InteriorMask() = default;  // empty; contains() is false everywhere

  static InteriorMask compute(int level, std::span<const StencilPair> pairs);

  int level() const { return level_; }
  bool contains(int i, int j) const;
  int count() const { return count_; }

 private:
  int level_ = 0;
  int count_ = 0;
  std::vector<std::uint8_t> flags_;  // row-major j*n+i
};

}  // namespace dyadic

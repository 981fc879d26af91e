#include "dyadic/grid.hpp"

#include <string>

#include "dyadic/quadrature.hpp"
#include "dyadic/util.hpp"

namespace dyadic {

namespace {

// digit -> (di, dj) per the corner order: 1 lower-left, 2 lower-right,
// 3 upper-right, 4 upper-left.
constexpr std::array<std::array<int, 2>, 4> kQuadrant = {
    {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

}  // namespace

CellCoord word_to_coord(const CellAddress& address) {
  CellCoord c;
  c.level = static_cast<int>(address.word.size());
  for (const std::uint8_t digit : address.word) {
    if (digit < 1 || digit > 4) {
      throw Error(Errc::invalid_digit,
                  "cell word digit must be in {1,2,3,4}, got " +
                      std::to_string(static_cast<int>(digit)));
    }
    const auto& [di, dj] = kQuadrant[digit - 1];
    c.i = 2 * c.i + di;
    c.j = 2 * c.j + dj;
  }
  return c;
}

CellAddress coord_to_word(CellCoord coord) {
  if (coord.level < 0 || coord.i < 0 || coord.j < 0 ||
      coord.i >= (1 << coord.level) || coord.j >= (1 << coord.level)) {
    throw Error(Errc::invalid_argument, "cell coordinates out of range");
  }
  CellAddress address;
  address.word.resize(static_cast<std::size_t>(coord.level));
  for (int t = coord.level - 1; t >= 0; --t) {
    const int di = coord.i & 1;
    const int dj = coord.j & 1;
    coord.i >>= 1;
    coord.j >>= 1;
    std::uint8_t digit = 0;
    for (std::uint8_t d = 0; d < 4; ++d) {
      if (kQuadrant[d][0] == di && kQuadrant[d][1] == dj) digit = d + 1;
    }
    address.word[static_cast<std::size_t>(t)] = digit;
  }
  return address;
}

CellGeometry coord_geometry(CellCoord coord) {
  CellGeometry g;
  g.side = std::ldexp(1.0, -coord.level);
  g.center = {(coord.i + 0.5) * g.side, (coord.j + 0.5) * g.side};
  return g;
}

CellGeometry word_to_cell(const CellAddress& address) {
  return coord_geometry(word_to_coord(address));
}

CellAverages CellAverages::compute(const ExprPtr& f, int level, int quad_order,
                                   int threads) {
  if (level < 0) {
    throw Error(Errc::invalid_argument, "grid level must be >= 0");
  }
  CellAverages out;
  out.level_ = level;
  out.quad_order_ = quad_order;
  out.levels_.resize(static_cast<std::size_t>(level) + 1);

  const QuadRule<GridReal> rule = gauss_legendre<GridReal>(quad_order);
  const int n = 1 << level;
  const GridReal side = GridReal(1) / n;
  auto& finest = out.levels_[static_cast<std::size_t>(level)];
  finest.resize(static_cast<std::size_t>(n) * n);
  const Expr& fe = *f;
  parallel_for(0, n, threads, [&](int j) {
    const GridReal cy = (GridReal(j) + GridReal(1) / 2) * side;
    for (int i = 0; i < n; ++i) {
      const GridReal cx = (GridReal(i) + GridReal(1) / 2) * side;
      finest[static_cast<std::size_t>(j) * n + i] =
          square_average(fe, cx, cy, side, rule);
    }
  });

  for (int m = level - 1; m >= 0; --m) {
    const int nm = 1 << m;
    auto& coarse = out.levels_[static_cast<std::size_t>(m)];
    const auto& fine = out.levels_[static_cast<std::size_t>(m) + 1];
    coarse.resize(static_cast<std::size_t>(nm) * nm);
    for (int j = 0; j < nm; ++j) {
      for (int i = 0; i < nm; ++i) {
        const std::size_t base =
            static_cast<std::size_t>(2 * j) * (2 * nm) + 2 * i;
        const GridReal sum = fine[base] + fine[base + 1] +
                             fine[base + static_cast<std::size_t>(2 * nm)] +
                             fine[base + static_cast<std::size_t>(2 * nm) + 1];
        coarse[static_cast<std::size_t>(j) * nm + i] = sum / 4;
      }
    }
  }
  return out;
}

GridReal CellAverages::value(int level, int i, int j) const {
  return level_values(level)[static_cast<std::size_t>(j) * (1 << level) + i];
}

std::span<const GridReal> CellAverages::level_values(int level) const {
  if (level < 0 || level > level_) {
    throw Error(Errc::invalid_argument, "no such grid level");
  }
  return levels_[static_cast<std::size_t>(level)];
}

InteriorMask InteriorMask::compute(int level,
                                   std::span<const StencilPair> pairs) {
  if (level < 0) {
    throw Error(Errc::invalid_argument, "grid level must be >= 0");
  }
  InteriorMask mask;
  mask.level_ = level;
  const int n = 1 << level;
  mask.flags_.assign(static_cast<std::size_t>(n) * n, 1);

  std::vector<std::array<int, 2>> offsets;
  for (const StencilPair& p : pairs) {
    const auto local = neighbor_offsets(p);
    offsets.insert(offsets.end(), local.begin(), local.end());
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      for (const auto& [d1, d2] : offsets) {
        const int ii = i + d1, jj = j + d2;
        if (ii < 0 || jj < 0 || ii >= n || jj >= n) {
          mask.flags_[static_cast<std::size_t>(j) * n + i] = 0;
          break;
        }
      }
    }
  }
  for (const std::uint8_t f : mask.flags_) mask.count_ += f;
  return mask;
}

bool InteriorMask::contains(int i, int j) const {
  if (flags_.empty()) return false;
  const int n = 1 << level_;
  if (i < 0 || j < 0 || i >= n || j >= n) return false;
  return flags_[static_cast<std::size_t>(j) * n + i] != 0;
}

}  // namespace dyadic

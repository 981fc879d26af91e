#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "dyadic/grid.hpp"
#include "dyadic/quadrature.hpp"

using namespace dyadic;

namespace {

// Oracle for cell geometry: compose the corner contractions digit by digit.
std::array<double, 2> compose_maps(const std::vector<std::uint8_t>& word) {
  static constexpr std::array<std::array<double, 2>, 4> corners = {
      {{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  std::array<double, 2> p{0.5, 0.5};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const auto& q = corners[*it - 1];
    p = {(p[0] + q[0]) / 2, (p[1] + q[1]) / 2};
  }
  return p;
}

}  // namespace

TEST_CASE("word geometry") {
  CHECK(word_to_cell({{}}).center == std::array<double, 2>{0.5, 0.5});
  CHECK(word_to_cell({{}}).side == 1.0);
  CHECK(word_to_cell({{1}}).center == std::array<double, 2>{0.25, 0.25});
  CHECK(word_to_cell({{1}}).side == 0.5);
  CHECK(word_to_cell({{3, 3}}).center == std::array<double, 2>{0.875, 0.875});
  CHECK(word_to_cell({{3, 3}}).side == 0.25);
  CHECK_THROWS_AS(word_to_coord({{5}}), Error);
  CHECK_THROWS_AS(word_to_coord({{0}}), Error);
}

TEST_CASE("word/coordinate bijection through level 6") {
  for (int m = 0; m <= 6; ++m) {
    const int n = 1 << m;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const CellAddress w = coord_to_word({m, i, j});
        CHECK(word_to_coord(w) == CellCoord{m, i, j});
        // Geometry agrees with the composed contraction maps.
        const auto composed = compose_maps(w.word);
        const CellGeometry geo = word_to_cell(w);
        CHECK(geo.center[0] == doctest::Approx(composed[0]).epsilon(1e-15));
        CHECK(geo.center[1] == doctest::Approx(composed[1]).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("square averages: closed forms") {
  const QuadRule<double> rule = gauss_legendre<double>(6);
  const ExprPtr one = parse("1");
  const ExprPtr fx = parse("x");
  const ExprPtr fx2 = parse("x^2");
  CHECK(square_average(*one, 0.3, 0.4, 0.2, rule) == doctest::Approx(1.0));
  CHECK(square_average(*fx, 0.3, 0.9, 0.125, rule) ==
        doctest::Approx(0.3).epsilon(1e-15));
  // Mean of x^2 over a square centered at the origin is l^2/12.
  for (const double l : {0.5, 0.25, 0.1}) {
    CHECK(square_average(*fx2, 0.0, 0.0, l, rule) ==
          doctest::Approx(l * l / 12).epsilon(1e-14));
  }
}

TEST_CASE("quadrature exactness on monomials") {
  for (const int q : {2, 3, 5, 8}) {
    const QuadRule<double> rule = gauss_legendre<double>(q);
    for (int a = 0; a <= 2 * q - 1; ++a) {
      for (int b = 0; b <= 2 * q - 1; b += 3) {
        const ExprPtr mono =
            parse("x^" + std::to_string(a) + "*y^" + std::to_string(b));
        const double cx = 0.4, cy = 0.55, l = 0.3;
        auto mean_1d = [l](double c, int k) {
          return (std::pow(c + l / 2, k + 1) - std::pow(c - l / 2, k + 1)) /
                 ((k + 1) * l);
        };
        const double want = mean_1d(cx, a) * mean_1d(cy, b);
        const double got = square_average(*mono, cx, cy, l, rule);
        CHECK(std::fabs(got - want) <= 1e-13 * std::max(1.0, std::fabs(want)));
      }
    }
  }
}

TEST_CASE("grid averages: hand values and aggregation") {
  const CellAverages ones = CellAverages::compute(parse("1"), 3, 4);
  for (int m = 0; m <= 3; ++m) {
    const int n = 1 << m;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        CHECK(static_cast<double>(ones.value(m, i, j)) == doctest::Approx(1.0));
      }
    }
  }

  const CellAverages ax = CellAverages::compute(parse("x"), 1, 6);
  CHECK(static_cast<double>(ax.value(1, 0, 0)) ==
        doctest::Approx(0.25).epsilon(1e-15));
  CHECK(static_cast<double>(ax.value(1, 1, 0)) ==
        doctest::Approx(0.75).epsilon(1e-15));
  CHECK(static_cast<double>(ax.value(1, 1, 1)) ==
        doctest::Approx(0.75).epsilon(1e-15));

  // Quadratic: every cell average is c1^2 + c2^2 + l^2/6.
  const CellAverages aq = CellAverages::compute(parse("x^2+y^2"), 2, 6);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      const CellGeometry geo = coord_geometry({2, i, j});
      const double want = geo.center[0] * geo.center[0] +
                          geo.center[1] * geo.center[1] +
                          geo.side * geo.side / 6;
      CHECK(static_cast<double>(aq.value(2, i, j)) ==
            doctest::Approx(want).epsilon(1e-15));
    }
  }

  // Parents are the exact mean of their children (defined that way), and
  // they also match direct quadrature of the parent cell.
  const ExprPtr f = parse("sin(x)*exp(y)");
  const CellAverages af = CellAverages::compute(f, 4, 12, 2);
  const QuadRule<GridReal> rule = gauss_legendre<GridReal>(12);
  for (int m = 0; m < 4; ++m) {
    const int n = 1 << m;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const GridReal mean = (af.value(m + 1, 2 * i, 2 * j) +
                               af.value(m + 1, 2 * i + 1, 2 * j) +
                               af.value(m + 1, 2 * i, 2 * j + 1) +
                               af.value(m + 1, 2 * i + 1, 2 * j + 1)) /
                              4;
        CHECK(af.value(m, i, j) == mean);
        const GridReal side = GridReal(1) / n;
        const GridReal direct = square_average(
            *f, (GridReal(i) + GridReal(1) / 2) * side,
            (GridReal(j) + GridReal(1) / 2) * side, side, rule);
        CHECK(std::fabs(static_cast<double>(af.value(m, i, j) - direct)) <=
              1e-13);
      }
    }
  }
}

TEST_CASE("neighbor average sums: vanishing laws and the degree-4 value") {
  const QuadRule<long double> rule = gauss_legendre<long double>(12);
  const long double cx = 0.5L, cy = 0.5L, l = 0.125L;
  for (const StencilPair p : {StencilPair{0, 1}, {1, 1}, {0, 2}, {1, 2}}) {
    for (int n = 1; n <= 8; ++n) {
      const ExprPtr g = harmonic_basis({BasisKind::im_part, n, {0.5, 0.5}});
      CHECK(std::fabs(static_cast<double>(
                neighbor_average_sum(*g, cx, cy, l, p, rule))) <= 1e-12);
      if (n % 4 != 0) {
        const ExprPtr f = harmonic_basis({BasisKind::re_part, n, {0.5, 0.5}});
        CHECK(std::fabs(static_cast<double>(
                  neighbor_average_sum(*f, cx, cy, l, p, rule))) <= 1e-12);
      }
    }
  }
  // Degree 4 with the unit-offset class: 1888/720 * (l/2)^4.
  const ExprPtr f4 = harmonic_basis({BasisKind::re_part, 4, {0.5, 0.5}});
  const double got = static_cast<double>(
      neighbor_average_sum(*f4, cx, cy, l, StencilPair{0, 1}, rule));
  const double want = 1888.0 / 720.0 * std::pow(0.0625, 4);
  CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("interior masks") {
  const StencilPair unit{0, 1};
  CHECK(InteriorMask::compute(1, {&unit, 1}).count() == 0);
  const InteriorMask m2 = InteriorMask::compute(2, {&unit, 1});
  CHECK(m2.count() == 4);
  CHECK(m2.contains(1, 1));
  CHECK(m2.contains(2, 2));
  CHECK(!m2.contains(0, 1));
  CHECK(InteriorMask::compute(3, {&unit, 1}).count() == 36);
  for (int m = 1; m <= 6; ++m) {
    const int expect = (1 << m) - 2;
    CHECK(InteriorMask::compute(m, {&unit, 1}).count() == expect * expect);
  }
  // A two-cell reach shrinks the band by two on each side.
  const std::vector<StencilPair> far = {{0, 1}, {0, 2}};
  CHECK(InteriorMask::compute(3, far).count() == 16);
}

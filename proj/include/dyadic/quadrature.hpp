#pragma once

/// Tensor-product Gauss-Legendre averaging over axis-aligned squares,
/// generic in the real type (double, long double, or a boost multiprecision
/// float). A q x q rule averages polynomials of degree <= 2q-1 per variable
/// exactly up to rounding.

#include <cmath>
#include <limits>
#include <vector>

#include "dyadic/errors.hpp"
#include "dyadic/expr.hpp"
#include "dyadic/stencil.hpp"

namespace dyadic {

template <class Real>
struct QuadRule {
  std::vector<Real> nodes;    // on [-1, 1], ascending
  std::vector<Real> weights;  // sum to 2
};

/// Nodes by Newton iteration on the Legendre recurrence, to the precision of
/// Real. q in [1, 64].
template <class Real>
QuadRule<Real> gauss_legendre(int q) {
  if (q < 1 || q > 64) {
    throw Error(Errc::invalid_argument,
                "quadrature order must be in [1, 64]");
  }
  QuadRule<Real> rule;
  rule.nodes.assign(static_cast<std::size_t>(q), Real(0));
  rule.weights.assign(static_cast<std::size_t>(q), Real(0));
  using std::abs;
  using std::acos;
  using std::cos;
  const Real pi = acos(Real(-1));
  const Real eps = std::numeric_limits<Real>::epsilon();
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess for the i-th root (descending order).
    Real x = cos(pi * (Real(i) + Real(3) / 4) / (Real(q) + Real(1) / 2));
    Real dp(0);
    for (int iter = 0; iter < 100; ++iter) {
      Real p1(1), p2(0);
      for (int j = 0; j < q; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((Real(2 * j + 1) * x * p2) - Real(j) * p3) / Real(j + 1);
      }
      dp = Real(q) * (x * p1 - p2) / (x * x - 1);
      const Real dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= 8 * eps) break;
    }
    // Recompute the derivative at the converged node for the weight.
    {
      Real p1(1), p2(0);
      for (int j = 0; j < q; ++j) {
        const Real p3 = p2;
        p2 = p1;
        p1 = ((Real(2 * j + 1) * x * p2) - Real(j) * p3) / Real(j + 1);
      }
      dp = Real(q) * (x * p1 - p2) / (x * x - 1);
    }
    const Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(q - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(q - 1 - i)] = w;
  }
  return rule;
}

/// Mean of f over the square with the given center and side. Fixed serial
/// accumulation order; deterministic.
template <class Real>
Real square_average(const Expr& f, const Real& cx, const Real& cy,
                    const Real& side, const QuadRule<Real>& rule) {
  const Real h = side / 2;
  Real acc(0);
  const std::size_t q = rule.nodes.size();
  for (std::size_t a = 0; a < q; ++a) {
    const Real x = cx + h * rule.nodes[a];
    Real row(0);
    for (std::size_t b = 0; b < q; ++b) {
      const Real y = cy + h * rule.nodes[b];
      row += rule.weights[b] * eval(f, x, y);
    }
    acc += rule.weights[a] * row;
  }
  return acc / 4;
}

/// Sum of square averages over all p-neighbors of the square at (cx, cy).
/// 8*multiplicity(p) terms, in the lexicographic offset order.
template <class Real>
Real neighbor_average_sum(const Expr& f, const Real& cx, const Real& cy,
                          const Real& side, StencilPair p,
                          const QuadRule<Real>& rule) {
  Real acc(0);
  for (const auto& [d1, d2] : neighbor_offsets(p)) {
    acc += square_average(f, Real(cx + Real(d1) * side),
                          Real(cy + Real(d2) * side), side, rule);
  }
  return acc;
}

}  // namespace dyadic

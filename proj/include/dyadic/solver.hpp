#pragma once

/// Exact solver for the moment constraints that pin a prescribed mean value
/// level: sum_p A_p * T_p^(k) = T_(0,0)^(k) for k = 0 .. N-1. Row k = 0 is
/// the normalization 8*sum c_p*A_p = 1 (T_p^(0) = 16*c_p). Solving is
/// fraction-free Gaussian elimination on the integer-cleared system, so every
/// classification (unique / affine family / infeasible) is exact.

#include <span>
#include <string>
#include <vector>

#include "dyadic/stencil.hpp"

namespace dyadic {

enum class SolutionKind { unique, affine_family, infeasible };

struct SolutionSet {
  SolutionKind kind = SolutionKind::infeasible;
  int target_level = 0;
  std::vector<StencilPair> pairs;

  /// A solution with every free coefficient set to zero. Empty if infeasible.
  std::vector<Rational> particular;

  /// Basis of the homogeneous solution space; empty unless kind ==
  /// affine_family. particular + any combination stays a solution.
  std::vector<std::vector<Rational>> null_basis;

  /// mean_value_level of `particular`; >= target_level by construction.
  LevelResult realized_level;
};

/// Builds and solves the N-row moment system for the given pairs.
/// Preconditions: pairs canonical, distinct, p2 >= 1; N >= 1. Infeasibility
/// is a result (kind == infeasible), not an error. Solutions are verified by
/// exact back-substitution before being returned.
SolutionSet solve_level(const std::vector<StencilPair>& pairs, int N);

/// Largest N <= n_cap with solve_level(pairs, N) feasible. Feasibility is
/// monotone (the N-row system contains the (N-1)-row one), so this is a
/// linear scan.
int max_level(const std::vector<StencilPair>& pairs, int n_cap);

/// The least-euclidean-norm member of the solution set, exact. For a unique
/// solution this is the particular one.
std::vector<Rational> min_norm_member(const SolutionSet& solution);

std::string to_json_string(const SolutionSet& solution, int indent = 2);

}  // namespace dyadic

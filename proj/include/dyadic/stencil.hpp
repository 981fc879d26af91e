#pragma once

/// Exact constants for square cell-average stencils.
///
/// An offset class p = (p1, p2) with 0 <= p1 <= p2 identifies the squares of
/// side l whose center differs from a given square's center by (±p1*l, ±p2*l)
/// or (±p2*l, ±p1*l). There are 8*multiplicity(p) of them. `moment(p, k)` is
/// the exact coefficient with which the 4k-th center derivative of a harmonic
/// function enters the sum of averages over the p-neighbors; a coefficient
/// family {A_p} cancels these moments for all k below its mean value level,
/// which makes the averaged-neighbor defect shrink like l^(4*level).
///
/// Everything here is exact rational arithmetic; the only floating-point
/// routine is moment_sine_form, kept as an independent cross-check.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dyadic/rational.hpp"

namespace dyadic {

struct StencilPair {
  int p1 = 0;
  int p2 = 0;
  friend auto operator<=>(const StencilPair&, const StencilPair&) = default;
};

/// Sorts the two components so that p1 <= p2.
StencilPair make_canonical(int a, int b);

bool is_canonical(StencilPair p);

/// c_p: 1/8 for (0,0), 1/2 for (0,n) and (n,n), 1 for 0 < p1 < p2.
/// 8*multiplicity(p) is the number of p-neighbors of any fixed square.
Rational multiplicity(StencilPair p);

/// All center displacements (d1, d2), in units of the side length, whose
/// absolute values form the multiset {p1, p2}. Sorted lexicographically;
/// size is 8*multiplicity(p).
std::vector<std::array<int, 2>> neighbor_offsets(StencilPair p);

/// T_p^(k), exactly: 2*c_p*(Im z1^(4k+2) - Im z2^(4k+2) + Im z3^(4k+2)
/// - Im z4^(4k+2)) for the four complex integers z with real part 2*p1±1 and
/// imaginary part 2*p2±1. Exact integer powers; no trigonometry involved.
Rational moment(StencilPair p, int k);

/// 8*c_p*((2*p1+1)^2 + (2*p2+1)^2)^(2k+1); |moment(p, k)| never exceeds it.
Rational moment_bound(StencilPair p, int k);

/// The trigonometric form of T_p^(k) evaluated in double precision. Slower
/// and inexact; used only to cross-check `moment`.
double moment_sine_form(StencilPair p, int k);

/// M_P = 1 / (2 * sum over p of (p1^2+p2^2)*c_p*A_p). Throws
/// Errc::zero_denominator when the sum vanishes (a degenerate family with no
/// gradient normalization).
Rational renorm_constant(std::span<const StencilPair> pairs,
                         std::span<const Rational> coefficients);

struct LevelResult {
  int level = 0;
  /// False when every checked constraint held, so the true level is exactly
  /// "at least `level`" (= k_max + 1) rather than known.
  bool exact = true;

  friend bool operator==(const LevelResult&, const LevelResult&) = default;
};

/// Least k <= k_max with sum_p A_p*T_p^(k) != T_(0,0)^(k), by exact rational
/// comparison. Since T_p^(0) = 16*c_p, a family violating the normalization
/// 8*sum c_p*A_p = 1 reports level 0.
LevelResult mean_value_level(std::span<const StencilPair> pairs,
                             std::span<const Rational> coefficients,
                             int k_max = 16);

/// T_(0,0)^(k) - sum_p A_p*T_p^(k): the exact constant multiplying the 4k-th
/// center derivative in the mean value defect expansion.
Rational moment_defect(std::span<const StencilPair> pairs,
                       std::span<const Rational> coefficients, int k);

/// A validated offset family: distinct canonical pairs with p2 >= 1, exact
/// coefficients satisfying the normalization 8*sum c_p*A_p = 1, the
/// renormalization constant, and the realized mean value level.
class StencilFamily {
 public:
  static StencilFamily create(std::vector<StencilPair> pairs,
                              std::vector<Rational> coefficients,
                              int k_max = 16);

  std::span<const StencilPair> pairs() const { return pairs_; }
  std::span<const Rational> coefficients() const { return coefficients_; }
  const Rational& renorm() const { return renorm_; }
  LevelResult level() const { return level_; }

  /// {"pairs": [[0,1],...], "coefficients": ["1/5",...], "renorm": "10/3",
  ///  "level": 2}. Rationals are "num/den" strings.
  std::string to_json_string(int indent = 2) const;

  /// Parses and fully revalidates (normalization, renorm, level). Throws
  /// Errc::invalid_argument with diagnostics on any mismatch.
  static StencilFamily from_json_string(std::string_view text);

  static StencilFamily load_file(const std::string& path);
  void save_file(const std::string& path) const;

 private:
  StencilFamily() = default;
  std::vector<StencilPair> pairs_;
  std::vector<Rational> coefficients_;
  Rational renorm_;
  LevelResult level_;
};

/// Validation shared by StencilFamily and the coefficient solver: canonical,
/// distinct, p2 >= 1. Throws Errc::non_canonical_pair / Errc::duplicate_pair.
void validate_family_pairs(std::span<const StencilPair> pairs);

}  // namespace dyadic

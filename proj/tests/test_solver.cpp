#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dyadic/solver.hpp"

using namespace dyadic;

namespace {

Rational rat(long n, long d) { return Rational(n) / Rational(d); }

}  // namespace

TEST_CASE("single pair, level 1: the classical average") {
  const SolutionSet s = solve_level({{0, 1}}, 1);
  REQUIRE(s.kind == SolutionKind::unique);
  CHECK(s.particular == std::vector<Rational>{rat(1, 4)});
  CHECK(s.realized_level == LevelResult{1, true});
  CHECK(renorm_constant(s.pairs, s.particular) == Rational(4));
  CHECK(min_norm_member(s) == s.particular);
}

TEST_CASE("two pairs, level 1: an affine family") {
  const SolutionSet s = solve_level({{0, 1}, {1, 1}}, 1);
  REQUIRE(s.kind == SolutionKind::affine_family);
  REQUIRE(s.null_basis.size() == 1);
  CHECK(s.particular[0] + s.particular[1] == rat(1, 4));
  CHECK(s.null_basis[0][0] + s.null_basis[0][1] == 0);
  CHECK(min_norm_member(s) == std::vector<Rational>{rat(1, 8), rat(1, 8)});

  // Random members satisfy the normalization row exactly and keep level >= 1.
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-40, 40);
  std::uniform_int_distribution<int> den(1, 12);
  for (int trial = 0; trial < 5; ++trial) {
    const Rational t = rat(num(rng), den(rng));
    std::vector<Rational> member = s.particular;
    for (std::size_t i = 0; i < member.size(); ++i) {
      member[i] += t * s.null_basis[0][i];
    }
    Rational norm = 0;
    for (std::size_t i = 0; i < member.size(); ++i) {
      norm += multiplicity(s.pairs[i]) * member[i];
    }
    CHECK(Rational(8) * norm == 1);
    CHECK(mean_value_level(s.pairs, member, 4).level >= 1);
  }
}

TEST_CASE("worked unique systems") {
  const SolutionSet n2 = solve_level({{0, 1}, {1, 1}}, 2);
  REQUIRE(n2.kind == SolutionKind::unique);
  CHECK(n2.particular == std::vector<Rational>{rat(1, 5), rat(1, 20)});
  CHECK(n2.realized_level == LevelResult{2, true});

  const SolutionSet n3 = solve_level({{0, 1}, {1, 1}, {0, 2}}, 3);
  REQUIRE(n3.kind == SolutionKind::unique);
  CHECK(n3.particular ==
        std::vector<Rational>{rat(16, 75), rat(1, 25), rat(-1, 300)});
  CHECK(renorm_constant(n3.pairs, n3.particular) == rat(25, 7));
  CHECK(n3.realized_level == LevelResult{3, true});

  const SolutionSet n4 = solve_level({{0, 1}, {1, 1}, {0, 2}, {1, 2}}, 4);
  REQUIRE(n4.kind == SolutionKind::unique);
  CHECK(n4.particular ==
        std::vector<Rational>{rat(38, 183), rat(103, 2379), rat(-17, 9516),
                              rat(1, 2379)});
  CHECK(renorm_constant(n4.pairs, n4.particular) == rat(793, 231));
  CHECK(n4.realized_level == LevelResult{4, true});
}

TEST_CASE("infeasible: one pair cannot reach level 2") {
  CHECK(solve_level({{0, 1}}, 2).kind == SolutionKind::infeasible);
}

TEST_CASE("max feasible level") {
  CHECK(max_level({{0, 1}}, 4) == 1);
  CHECK(max_level({{0, 1}, {1, 1}}, 4) == 2);
  CHECK(max_level({{0, 1}, {1, 1}, {0, 2}}, 5) == 3);
  CHECK(max_level({{0, 1}, {1, 1}, {0, 2}, {1, 2}}, 6) == 4);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(solve_level({{1, 0}}, 1), Error);            // not canonical
  CHECK_THROWS_AS(solve_level({{0, 0}}, 1), Error);            // self pair
  CHECK_THROWS_AS(solve_level({{0, 1}, {0, 1}}, 1), Error);    // duplicate
  CHECK_THROWS_AS(solve_level({{0, 1}}, 0), Error);            // bad target
}

TEST_CASE("solution set JSON") {
  const std::string unique = to_json_string(solve_level({{0, 1}}, 1));
  CHECK(unique.find("\"unique\"") != std::string::npos);
  CHECK(unique.find("\"1/4\"") != std::string::npos);
  const std::string fam = to_json_string(solve_level({{0, 1}, {1, 1}}, 1));
  CHECK(fam.find("\"affine_family\"") != std::string::npos);
  CHECK(fam.find("\"min_norm\"") != std::string::npos);
  const std::string bad = to_json_string(solve_level({{0, 1}}, 3));
  CHECK(bad.find("\"infeasible\"") != std::string::npos);
}

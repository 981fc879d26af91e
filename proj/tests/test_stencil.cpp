#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "dyadic/stencil.hpp"

using namespace dyadic;

namespace {

Rational rat(long n, long d) { return Rational(n) / Rational(d); }

// Independent oracle for the exact moments: complex-integer powers evaluated
// by plain repeated multiplication over long long (valid for the small
// exponents these frozen values need), entirely separate from gauss_pow.
long long im_pow_ll(long long re, long long im, int n) {
  long long ar = 1, ai = 0;
  for (int i = 0; i < n; ++i) {
    const long long nr = ar * re - ai * im;
    const long long ni = ar * im + ai * re;
    ar = nr;
    ai = ni;
  }
  return ai;
}

long long moment_oracle_times_cp_inverse(StencilPair p, int k) {
  const int n = 4 * k + 2;
  return im_pow_ll(2 * p.p1 + 1, 2 * p.p2 + 1, n) -
         im_pow_ll(2 * p.p1 - 1, 2 * p.p2 + 1, n) +
         im_pow_ll(2 * p.p1 - 1, 2 * p.p2 - 1, n) -
         im_pow_ll(2 * p.p1 + 1, 2 * p.p2 - 1, n);
}

}  // namespace

TEST_CASE("rational plumbing") {
  CHECK(to_string(rat(2, 4)) == "1/2");
  CHECK(to_string(rat(-3, 9)) == "-1/3");
  CHECK(to_string(Rational(7)) == "7");
  CHECK(parse_rational("10/3") == rat(10, 3));
  CHECK(parse_rational("-17/9516") == rat(-17, 9516));
  CHECK(parse_rational(" 4 ") == Rational(4));
  CHECK(parse_rational("3/-9") == rat(-1, 3));
  CHECK(denominator(parse_rational("3/-9")) > 0);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(to_double(rat(1, 4)) == 0.25);
}

TEST_CASE("multiplicity constants") {
  CHECK(multiplicity({0, 0}) == rat(1, 8));
  CHECK(multiplicity({0, 1}) == rat(1, 2));
  CHECK(multiplicity({1, 1}) == rat(1, 2));
  CHECK(multiplicity({1, 2}) == Rational(1));
  CHECK(multiplicity({0, 3}) == rat(1, 2));
  CHECK(multiplicity({2, 5}) == Rational(1));
  CHECK_THROWS_AS(multiplicity({2, 1}), Error);
}

TEST_CASE("neighbor offsets") {
  using Offs = std::vector<std::array<int, 2>>;
  CHECK(neighbor_offsets({0, 0}) == Offs{{0, 0}});
  CHECK(neighbor_offsets({0, 1}) ==
        Offs{{-1, 0}, {0, -1}, {0, 1}, {1, 0}});
  CHECK(neighbor_offsets({1, 2}).size() == 8);
  CHECK(neighbor_offsets({1, 1}) ==
        Offs{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});

  // Count law: 8 * multiplicity, all canonical pairs through p2 = 5.
  for (int p2 = 0; p2 <= 5; ++p2) {
    for (int p1 = 0; p1 <= p2; ++p1) {
      const StencilPair p{p1, p2};
      CHECK(Rational(static_cast<long>(neighbor_offsets(p).size())) ==
            Rational(8) * multiplicity(p));
    }
  }
}

TEST_CASE("self moments follow the alternating power pattern") {
  Rational sign(1);
  BigInt pow2(2);
  for (int k = 0; k <= 12; ++k) {
    CHECK(moment({0, 0}, k) == sign * Rational(pow2));
    sign = -sign;
    pow2 *= 4;
  }
}

TEST_CASE("frozen first moments") {
  CHECK(moment({0, 1}, 1) == Rational(1888));
  CHECK(moment({1, 1}, 1) == Rational(-7712));
  CHECK(moment({0, 2}, 1) == Rational(30688));
  CHECK(moment({0, 1}, 2) == Rational(-15232));
  CHECK(moment({1, 1}, 2) == Rational(1904768));
  CHECK(moment({0, 2}, 2) == Rational(21872768));

  // Level-2 family cross-check.
  CHECK(rat(1, 5) * moment({0, 1}, 1) + rat(1, 20) * moment({1, 1}, 1) ==
        Rational(-8));

  // Independent long-long oracle, moderate sizes only.
  for (int p2 = 1; p2 <= 2; ++p2) {
    for (int p1 = 0; p1 <= p2; ++p1) {
      for (int k = 0; k <= 2; ++k) {
        const StencilPair p{p1, p2};
        CHECK(moment(p, k) ==
              Rational(2) * multiplicity(p) *
                  Rational(moment_oracle_times_cp_inverse(p, k)));
      }
    }
  }
}

TEST_CASE("zeroth moment is 16 c_p") {
  for (int p2 = 0; p2 <= 5; ++p2) {
    for (int p1 = 0; p1 <= p2; ++p1) {
      CHECK(moment({p1, p2}, 0) == Rational(16) * multiplicity({p1, p2}));
    }
  }
}

TEST_CASE("moment bound") {
  CHECK(moment_bound({0, 0}, 0) == Rational(2));
  CHECK(moment_bound({0, 1}, 1) == Rational(4000));
  CHECK(moment_bound({1, 1}, 1) == Rational(23328));
  CHECK(abs(moment({0, 0}, 0)) == moment_bound({0, 0}, 0));  // saturated

  for (int p2 = 0; p2 <= 5; ++p2) {
    for (int p1 = 0; p1 <= p2; ++p1) {
      for (int k = 0; k <= 10; ++k) {
        CHECK(abs(moment({p1, p2}, k)) <= moment_bound({p1, p2}, k));
      }
    }
  }
}

TEST_CASE("trigonometric form agrees with the exact moments") {
  for (int p2 = 1; p2 <= 3; ++p2) {
    for (int p1 = 0; p1 <= p2; ++p1) {
      for (int k = 0; k <= 4; ++k) {
        const double exact = to_double(moment({p1, p2}, k));
        const double trig = moment_sine_form({p1, p2}, k);
        CHECK(std::fabs(trig - exact) <=
              1e-9 * std::max(1.0, std::fabs(exact)));
      }
    }
  }
}

TEST_CASE("renormalization constants") {
  CHECK(renorm_constant(std::vector<StencilPair>{{0, 1}},
                        std::vector<Rational>{rat(1, 4)}) == Rational(4));
  CHECK(renorm_constant(std::vector<StencilPair>{{0, 1}, {1, 1}},
                        std::vector<Rational>{rat(1, 5), rat(1, 20)}) ==
        rat(10, 3));
  CHECK(renorm_constant(
            std::vector<StencilPair>{{0, 1}, {1, 1}, {0, 2}, {1, 2}},
            std::vector<Rational>{rat(38, 183), rat(103, 2379),
                                  rat(-17, 9516), rat(1, 2379)}) ==
        rat(793, 231));

  // sum |p|^2 c_p A_p = 1/2 - 1/2 = 0: degenerate.
  CHECK_THROWS_AS(
      renorm_constant(std::vector<StencilPair>{{0, 1}, {0, 2}},
                      std::vector<Rational>{Rational(1), rat(-1, 4)}),
      Error);
}

TEST_CASE("mean value level") {
  const std::vector<StencilPair> one = {{0, 1}};
  CHECK(mean_value_level(one, std::vector<Rational>{rat(1, 4)}, 4) ==
        LevelResult{1, true});
  CHECK(mean_value_level(std::vector<StencilPair>{{0, 1}, {1, 1}},
                         std::vector<Rational>{rat(1, 5), rat(1, 20)}, 4) ==
        LevelResult{2, true});
  // Normalization violated: level 0.
  CHECK(mean_value_level(one, std::vector<Rational>{rat(1, 8)}, 4) ==
        LevelResult{0, true});
  // Exhausted cap reports a lower bound.
  const LevelResult capped =
      mean_value_level(one, std::vector<Rational>{rat(1, 4)}, 0);
  CHECK(capped.level == 1);
  CHECK(!capped.exact);
}

TEST_CASE("family construction and serialization") {
  StencilFamily fam = StencilFamily::create({{0, 1}, {1, 1}},
                                            {rat(1, 5), rat(1, 20)});
  CHECK(fam.renorm() == rat(10, 3));
  CHECK(fam.level() == LevelResult{2, true});

  // Normalization is checked exactly.
  CHECK_THROWS_AS(StencilFamily::create({{0, 1}}, {rat(1, 8)}), Error);
  // The self pair is rejected inside families.
  CHECK_THROWS_AS(StencilFamily::create({{0, 0}}, {rat(1, 1)}), Error);
  CHECK_THROWS_AS(
      StencilFamily::create({{0, 1}, {0, 1}}, {rat(1, 8), rat(1, 8)}), Error);

  const std::string json = fam.to_json_string();
  const StencilFamily back = StencilFamily::from_json_string(json);
  CHECK(back.renorm() == fam.renorm());
  CHECK(std::vector<Rational>(back.coefficients().begin(),
                              back.coefficients().end()) ==
        std::vector<Rational>(fam.coefficients().begin(),
                              fam.coefficients().end()));

  CHECK_THROWS_AS(StencilFamily::from_json_string("{not json"), Error);
  CHECK_THROWS_AS(StencilFamily::from_json_string("{\"pairs\": [[0,1]]}"),
                  Error);
  // Declared metadata must match the recomputation.
  CHECK_THROWS_AS(StencilFamily::from_json_string(
                      R"({"pairs": [[0,1]], "coefficients": ["1/4"],
                          "renorm": "5"})"),
                  Error);
  CHECK_THROWS_AS(StencilFamily::from_json_string(
                      R"({"pairs": [[0,1]], "coefficients": ["1/4"],
                          "level": 3})"),
                  Error);
}

TEST_CASE("canonicalization") {
  CHECK(make_canonical(2, 1) == StencilPair{1, 2});
  CHECK(make_canonical(0, 0) == StencilPair{0, 0});
  CHECK_THROWS_AS(make_canonical(-1, 2), Error);
  CHECK_THROWS_AS(moment({3, 1}, 0), Error);
}

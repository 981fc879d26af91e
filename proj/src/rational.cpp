#include "dyadic/rational.hpp"

#include <utility>

namespace dyadic {

std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

namespace {

BigInt parse_bigint(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) ++i;
  if (i == text.size()) {
    throw Error(Errc::invalid_argument, "empty integer in rational literal");
  }
  for (; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw Error(Errc::invalid_argument,
                  "bad character in rational literal: '" +
                      std::string(text) + "'");
    }
  }
  return BigInt(std::string(text));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_bigint(text));
  }
  const BigInt num = parse_bigint(trim(text.substr(0, slash)));
  const BigInt den = parse_bigint(trim(text.substr(slash + 1)));
  if (den == 0) {
    throw Error(Errc::zero_denominator,
                "zero denominator in rational literal: '" + std::string(text) +
                    "'");
  }
  return Rational(num) / Rational(den);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

GaussInt gauss_mul(const GaussInt& a, const GaussInt& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussInt gauss_pow(GaussInt base, unsigned exponent) {
  GaussInt acc{1, 0};
  while (exponent != 0) {
    if (exponent & 1u) acc = gauss_mul(acc, base);
    exponent >>= 1u;
    if (exponent != 0) base = gauss_mul(base, base);
  }
  return acc;
}

}  // namespace dyadic

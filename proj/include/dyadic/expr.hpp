#pragma once

/// Scalar functions of two variables: a small parsed mini-language plus
/// second-order forward-mode jets.
///
/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := atom ('^' integer)?
///   atom   := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')' | '-' atom
///
/// Functions: sin, cos, exp, log, atan, sqrt. Exponents are literal integers
/// (possibly negative); general powers go through exp/log explicitly. Trees
/// are immutable after parsing and safe to evaluate from many threads.

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>

#include "dyadic/errors.hpp"

namespace dyadic {

enum class FuncId { sin, cos, exp, log, atan, sqrt };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  enum class Kind : unsigned char {
    constant,
    var_x,
    var_y,
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    call,
  };

  Kind kind;
  double value = 0;   // constant
  int exponent = 0;   // pow
  FuncId func{};      // call
  ExprPtr a, b;

  static ExprPtr constant(double v);
  static ExprPtr var_x();
  static ExprPtr var_y();
  static ExprPtr add(ExprPtr l, ExprPtr r);
  static ExprPtr sub(ExprPtr l, ExprPtr r);
  static ExprPtr mul(ExprPtr l, ExprPtr r);
  static ExprPtr div(ExprPtr l, ExprPtr r);
  static ExprPtr pow(ExprPtr base, int exponent);
  static ExprPtr neg(ExprPtr operand);
  static ExprPtr call(FuncId f, ExprPtr arg);
};

/// Throws Errc::syntax (with byte offset), Errc::unknown_function, or
/// Errc::non_integer_exponent.
ExprPtr parse(std::string_view text);

/// Canonical text form; parse(to_string(e)) reproduces the tree exactly.
std::string to_string(const ExprPtr& e);

bool tree_equal(const ExprPtr& a, const ExprPtr& b);

/// Value, gradient, and Hessian at a point. Hessian symmetric by storage.
struct Jet2 {
  double value = 0;
  std::array<double, 2> grad{0, 0};
  std::array<std::array<double, 2>, 2> hess{{{0, 0}, {0, 0}}};
  double laplacian() const { return hess[0][0] + hess[1][1]; }
};

Jet2 eval_jet2(const ExprPtr& e, std::array<double, 2> point);

namespace detail {

template <class Real>
Real pow_int(Real base, int exponent) {
  if (exponent == 0) return Real(1);
  if (exponent < 0) {
    if (base == 0) {
      throw Error(Errc::domain, "zero raised to a negative power");
    }
    return Real(1) / pow_int(base, -exponent);
  }
  Real acc(1);
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) acc *= base;
    e >>= 1u;
    if (e != 0) base *= base;
  }
  return acc;
}

}  // namespace detail

/// Generic evaluation; Real is double, long double, or a boost
/// multiprecision float. Domain violations (log/sqrt of a negative, division
/// by zero) throw Errc::domain.
template <class Real>
Real eval(const Expr& e, const Real& x, const Real& y) {
  switch (e.kind) {
    case Expr::Kind::constant:
      return Real(e.value);
    case Expr::Kind::var_x:
      return x;
    case Expr::Kind::var_y:
      return y;
    case Expr::Kind::add:
      return eval(*e.a, x, y) + eval(*e.b, x, y);
    case Expr::Kind::sub:
      return eval(*e.a, x, y) - eval(*e.b, x, y);
    case Expr::Kind::mul:
      return eval(*e.a, x, y) * eval(*e.b, x, y);
    case Expr::Kind::div: {
      const Real den = eval(*e.b, x, y);
      if (den == 0) throw Error(Errc::domain, "division by zero");
      return eval(*e.a, x, y) / den;
    }
    case Expr::Kind::pow:
      return detail::pow_int(eval(*e.a, x, y), e.exponent);
    case Expr::Kind::neg:
      return -eval(*e.a, x, y);
    case Expr::Kind::call: {
      const Real u = eval(*e.a, x, y);
      using std::sin;
      using std::cos;
      using std::exp;
      using std::log;
      using std::atan;
      using std::sqrt;
      switch (e.func) {
        case FuncId::sin: return sin(u);
        case FuncId::cos: return cos(u);
        case FuncId::exp: return exp(u);
        case FuncId::log:
          if (u <= 0) throw Error(Errc::domain, "log of a non-positive value");
          return log(u);
        case FuncId::atan: return atan(u);
        case FuncId::sqrt:
          if (u < 0) throw Error(Errc::domain, "sqrt of a negative value");
          return sqrt(u);
      }
      throw Error(Errc::invalid_argument, "corrupt function id");
    }
  }
  throw Error(Errc::invalid_argument, "corrupt expression node");
}

template <class Real>
Real eval(const ExprPtr& e, const Real& x, const Real& y) {
  return eval(*e, x, y);
}

enum class BasisKind { re_part, im_part };

/// Harmonic polynomial basis about a center: degree-n real/imaginary parts of
/// ((x - c1) + i*(y - c2))^n / n!, expanded into an ordinary expression tree.
struct HarmonicBasisSpec {
  BasisKind kind = BasisKind::re_part;
  int degree = 1;
  std::array<double, 2> center{0, 0};
};

/// Throws Errc::invalid_degree for degree < 1.
ExprPtr harmonic_basis(const HarmonicBasisSpec& spec);

}  // namespace dyadic

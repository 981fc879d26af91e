#include "dyadic/expr.hpp"

#include <charconv>
#include <utility>

#include "dyadic/util.hpp"

namespace dyadic {

namespace {

ExprPtr make(Expr&& e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::constant(double v) {
  Expr e{};
  e.kind = Kind::constant;
  e.value = v;
  return make(std::move(e));
}
ExprPtr Expr::var_x() {
  Expr e{};
  e.kind = Kind::var_x;
  return make(std::move(e));
}
ExprPtr Expr::var_y() {
  Expr e{};
  e.kind = Kind::var_y;
  return make(std::move(e));
}
ExprPtr Expr::add(ExprPtr l, ExprPtr r) {
  Expr e{};
  e.kind = Kind::add;
  e.a = std::move(l);
  e.b = std::move(r);
  return make(std::move(e));
}
ExprPtr Expr::sub(ExprPtr l, ExprPtr r) {
  Expr e{};
  e.kind = Kind::sub;
  e.a = std::move(l);
  e.b = std::move(r);
  return make(std::move(e));
}
ExprPtr Expr::mul(ExprPtr l, ExprPtr r) {
  Expr e{};
  e.kind = Kind::mul;
  e.a = std::move(l);
  e.b = std::move(r);
  return make(std::move(e));
}
ExprPtr Expr::div(ExprPtr l, ExprPtr r) {
  Expr e{};
  e.kind = Kind::div;
  e.a = std::move(l);
  e.b = std::move(r);
  return make(std::move(e));
}
ExprPtr Expr::pow(ExprPtr base, int exponent) {
  Expr e{};
  e.kind = Kind::pow;
  e.a = std::move(base);
  e.exponent = exponent;
  return make(std::move(e));
}
ExprPtr Expr::neg(ExprPtr operand) {
  // Fold a negated literal into the constant so printing stays reversible.
  if (operand->kind == Kind::constant) {
    return constant(-operand->value);
  }
  Expr e{};
  e.kind = Kind::neg;
  e.a = std::move(operand);
  return make(std::move(e));
}
ExprPtr Expr::call(FuncId f, ExprPtr arg) {
  Expr e{};
  e.kind = Kind::call;
  e.func = f;
  e.a = std::move(arg);
  return make(std::move(e));
}

// ---------------------------------------------------------------------------
// Parser (recursive descent, byte offsets in errors)
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() &&
           (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
            src[pos] == '\r')) {
      ++pos;
    }
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  [[noreturn]] void fail(Errc code, const std::string& msg, std::size_t at) {
    throw Error(code, msg + " at offset " + std::to_string(at), at);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos;
        lhs = Expr::add(std::move(lhs), parse_term());
      } else if (c == '-') {
        ++pos;
        lhs = Expr::sub(std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos;
        lhs = Expr::mul(std::move(lhs), parse_factor());
      } else if (c == '/') {
        ++pos;
        lhs = Expr::div(std::move(lhs), parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    ExprPtr base = parse_atom();
    if (peek() == '^') {
      ++pos;
      return Expr::pow(std::move(base), parse_int_exponent());
    }
    return base;
  }

  ExprPtr parse_atom() {
    const char c = peek();
    const std::size_t at = pos;
    if (c == '\0') fail(Errc::syntax, "unexpected end of input", at);
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expr();
      if (peek() != ')') fail(Errc::syntax, "expected ')'", pos);
      ++pos;
      return inner;
    }
    if (c == '-') {
      ++pos;
      return Expr::neg(parse_atom());
    }
    if ((c >= '0' && c <= '9') || c == '.') {
      return Expr::constant(parse_number());
    }
    if (c >= 'a' && c <= 'z') {
      std::size_t end = pos;
      while (end < src.size() && src[end] >= 'a' && src[end] <= 'z') ++end;
      const std::string_view name = src.substr(pos, end - pos);
      if (name == "x" ) {
        pos = end;
        return Expr::var_x();
      }
      if (name == "y") {
        pos = end;
        return Expr::var_y();
      }
      pos = end;
      if (peek() != '(') {
        fail(Errc::syntax, "unknown variable '" + std::string(name) + "'", at);
      }
      FuncId f;
      if (name == "sin") f = FuncId::sin;
      else if (name == "cos") f = FuncId::cos;
      else if (name == "exp") f = FuncId::exp;
      else if (name == "log") f = FuncId::log;
      else if (name == "atan") f = FuncId::atan;
      else if (name == "sqrt") f = FuncId::sqrt;
      else fail(Errc::unknown_function,
                "unknown function '" + std::string(name) + "'", at);
      ++pos;  // '('
      ExprPtr arg = parse_expr();
      if (peek() != ')') fail(Errc::syntax, "expected ')'", pos);
      ++pos;
      return Expr::call(f, std::move(arg));
    }
    fail(Errc::syntax, std::string("unexpected character '") + c + "'", at);
  }

  double parse_number() {
    skip_ws();
    const std::size_t at = pos;
    double v = 0;
    const auto res =
        std::from_chars(src.data() + pos, src.data() + src.size(), v);
    if (res.ec != std::errc{}) {
      fail(Errc::syntax, "malformed number", at);
    }
    pos = static_cast<std::size_t>(res.ptr - src.data());
    return v;
  }

  int parse_int_exponent() {
    skip_ws();
    const std::size_t at = pos;
    std::size_t probe = pos;
    if (probe < src.size() && src[probe] == '-') ++probe;
    std::size_t digits_end = probe;
    while (digits_end < src.size() && src[digits_end] >= '0' &&
           src[digits_end] <= '9') {
      ++digits_end;
    }
    const bool has_digits = digits_end > probe;
    const bool fractional =
        has_digits && digits_end < src.size() &&
        (src[digits_end] == '.' || src[digits_end] == 'e' ||
         src[digits_end] == 'E');
    if (!has_digits || fractional) {
      fail(Errc::non_integer_exponent,
           "exponent must be a literal integer", at);
    }
    int v = 0;
    const auto res =
        std::from_chars(src.data() + pos, src.data() + digits_end, v);
    if (res.ec != std::errc{}) {
      fail(Errc::non_integer_exponent, "exponent out of range", at);
    }
    pos = digits_end;
    return v;
  }
};

}  // namespace

ExprPtr parse(std::string_view text) {
  Parser p{text};
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) {
    p.fail(Errc::syntax, "unexpected trailing input", p.pos);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

// Grammar levels, loosest to tightest. Unary minus lives at atom level, so a
// negation binds tighter than '^'.
enum Prec { prec_add = 1, prec_mul = 2, prec_pow = 3, prec_atom = 4 };

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
      return prec_add;
    case Expr::Kind::mul:
    case Expr::Kind::div:
      return prec_mul;
    case Expr::Kind::pow:
      return prec_pow;
    default:
      return prec_atom;
  }
}

const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::sin: return "sin";
    case FuncId::cos: return "cos";
    case FuncId::exp: return "exp";
    case FuncId::log: return "log";
    case FuncId::atan: return "atan";
    case FuncId::sqrt: return "sqrt";
  }
  return "?";
}

void print(const Expr& e, int parent_prec, std::string& out) {
  const int prec = precedence(e);
  const bool wrap = prec < parent_prec;
  if (wrap) out += '(';
  switch (e.kind) {
    case Expr::Kind::constant:
      out += format_double(e.value);
      break;
    case Expr::Kind::var_x:
      out += 'x';
      break;
    case Expr::Kind::var_y:
      out += 'y';
      break;
    case Expr::Kind::add:
      print(*e.a, prec_add, out);
      out += " + ";
      print(*e.b, prec_add + 1, out);
      break;
    case Expr::Kind::sub:
      print(*e.a, prec_add, out);
      out += " - ";
      print(*e.b, prec_add + 1, out);
      break;
    case Expr::Kind::mul:
      print(*e.a, prec_mul, out);
      out += "*";
      print(*e.b, prec_mul + 1, out);
      break;
    case Expr::Kind::div:
      print(*e.a, prec_mul, out);
      out += "/";
      print(*e.b, prec_mul + 1, out);
      break;
    case Expr::Kind::pow:
      print(*e.a, prec_atom, out);
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case Expr::Kind::neg:
      out += '-';
      print(*e.a, prec_atom, out);
      break;
    case Expr::Kind::call:
      out += func_name(e.func);
      out += '(';
      print(*e.a, prec_add, out);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace

std::string to_string(const ExprPtr& e) {
  std::string out;
  print(*e, prec_add, out);
  return out;
}

bool tree_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::constant:
      return a->value == b->value;
    case Expr::Kind::var_x:
    case Expr::Kind::var_y:
      return true;
    case Expr::Kind::pow:
      return a->exponent == b->exponent && tree_equal(a->a, b->a);
    case Expr::Kind::neg:
      return tree_equal(a->a, b->a);
    case Expr::Kind::call:
      return a->func == b->func && tree_equal(a->a, b->a);
    default:
      return tree_equal(a->a, b->a) && tree_equal(a->b, b->b);
  }
}

// ---------------------------------------------------------------------------
// Second-order jets
// ---------------------------------------------------------------------------

namespace {

struct J {
  double v = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
};

J jconst(double v) { return {v, 0, 0, 0, 0, 0}; }

J jadd(const J& a, const J& b) {
  return {a.v + b.v,   a.dx + b.dx,   a.dy + b.dy,
          a.dxx + b.dxx, a.dxy + b.dxy, a.dyy + b.dyy};
}

J jsub(const J& a, const J& b) {
  return {a.v - b.v,   a.dx - b.dx,   a.dy - b.dy,
          a.dxx - b.dxx, a.dxy - b.dxy, a.dyy - b.dyy};
}

J jmul(const J& a, const J& b) {
  J r;
  r.v = a.v * b.v;
  r.dx = a.dx * b.v + a.v * b.dx;
  r.dy = a.dy * b.v + a.v * b.dy;
  r.dxx = a.dxx * b.v + 2 * a.dx * b.dx + a.v * b.dxx;
  r.dxy = a.dxy * b.v + a.dx * b.dy + a.dy * b.dx + a.v * b.dxy;
  r.dyy = a.dyy * b.v + 2 * a.dy * b.dy + a.v * b.dyy;
  return r;
}

J jneg(const J& a) { return {-a.v, -a.dx, -a.dy, -a.dxx, -a.dxy, -a.dyy}; }

// Chain rule for a scalar map applied to a jet: value f, and the first and
// second derivatives of f at u.v.
J jchain(const J& u, double f, double fp, double fpp) {
  J r;
  r.v = f;
  r.dx = fp * u.dx;
  r.dy = fp * u.dy;
  r.dxx = fpp * u.dx * u.dx + fp * u.dxx;
  r.dxy = fpp * u.dx * u.dy + fp * u.dxy;
  r.dyy = fpp * u.dy * u.dy + fp * u.dyy;
  return r;
}

J jdiv(const J& a, const J& b) {
  if (b.v == 0) throw Error(Errc::domain, "division by zero");
  const double inv = 1.0 / b.v;
  const J recip = jchain(b, inv, -inv * inv, 2 * inv * inv * inv);
  return jmul(a, recip);
}

double powi(double base, int e) {
  if (e < 0) return 1.0 / powi(base, -e);
  double acc = 1;
  for (unsigned n = static_cast<unsigned>(e); n != 0; n >>= 1u) {
    if (n & 1u) acc *= base;
    base *= base;
  }
  return acc;
}

J jpow(const J& u, int n) {
  if (n == 0) return jconst(1);
  if (n == 1) return u;
  if (u.v == 0 && n < 0) {
    throw Error(Errc::domain, "zero raised to a negative power");
  }
  const double f = powi(u.v, n);
  const double fp = n * powi(u.v, n - 1);
  const double fpp = static_cast<double>(n) * (n - 1) * powi(u.v, n - 2);
  return jchain(u, f, fp, fpp);
}

J jcall(FuncId f, const J& u) {
  switch (f) {
    case FuncId::sin:
      return jchain(u, std::sin(u.v), std::cos(u.v), -std::sin(u.v));
    case FuncId::cos:
      return jchain(u, std::cos(u.v), -std::sin(u.v), -std::cos(u.v));
    case FuncId::exp: {
      const double e = std::exp(u.v);
      return jchain(u, e, e, e);
    }
    case FuncId::log:
      if (u.v <= 0) throw Error(Errc::domain, "log of a non-positive value");
      return jchain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
    case FuncId::atan: {
      const double d = 1.0 + u.v * u.v;
      return jchain(u, std::atan(u.v), 1.0 / d, -2.0 * u.v / (d * d));
    }
    case FuncId::sqrt: {
      if (u.v < 0) throw Error(Errc::domain, "sqrt of a negative value");
      const double s = std::sqrt(u.v);
      return jchain(u, s, 0.5 / s, -0.25 / (s * u.v));
    }
  }
  throw Error(Errc::invalid_argument, "corrupt function id");
}

J jet_eval(const Expr& e, double x, double y) {
  switch (e.kind) {
    case Expr::Kind::constant: return jconst(e.value);
    case Expr::Kind::var_x: return {x, 1, 0, 0, 0, 0};
    case Expr::Kind::var_y: return {y, 0, 1, 0, 0, 0};
    case Expr::Kind::add: return jadd(jet_eval(*e.a, x, y), jet_eval(*e.b, x, y));
    case Expr::Kind::sub: return jsub(jet_eval(*e.a, x, y), jet_eval(*e.b, x, y));
    case Expr::Kind::mul: return jmul(jet_eval(*e.a, x, y), jet_eval(*e.b, x, y));
    case Expr::Kind::div: return jdiv(jet_eval(*e.a, x, y), jet_eval(*e.b, x, y));
    case Expr::Kind::pow: return jpow(jet_eval(*e.a, x, y), e.exponent);
    case Expr::Kind::neg: return jneg(jet_eval(*e.a, x, y));
    case Expr::Kind::call: return jcall(e.func, jet_eval(*e.a, x, y));
  }
  throw Error(Errc::invalid_argument, "corrupt expression node");
}

}  // namespace

Jet2 eval_jet2(const ExprPtr& e, std::array<double, 2> point) {
  const J j = jet_eval(*e, point[0], point[1]);
  Jet2 out;
  out.value = j.v;
  out.grad = {j.dx, j.dy};
  out.hess = {{{j.dxx, j.dxy}, {j.dxy, j.dyy}}};
  return out;
}

// ---------------------------------------------------------------------------
// Harmonic polynomial basis
// ---------------------------------------------------------------------------

namespace {

// Exact through 20! in long double (64-bit mantissa).
long double factorial_ld(int n) {
  long double acc = 1;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

ExprPtr monomial(const ExprPtr& base, int power) {
  if (power == 1) return base;
  return Expr::pow(base, power);
}

}  // namespace

ExprPtr harmonic_basis(const HarmonicBasisSpec& spec) {
  if (spec.degree < 1) {
    throw Error(Errc::invalid_degree, "basis degree must be >= 1");
  }
  const int n = spec.degree;
  const ExprPtr dx = spec.center[0] == 0
                         ? Expr::var_x()
                         : Expr::sub(Expr::var_x(),
                                     Expr::constant(spec.center[0]));
  const ExprPtr dy = spec.center[1] == 0
                         ? Expr::var_y()
                         : Expr::sub(Expr::var_y(),
                                     Expr::constant(spec.center[1]));

  ExprPtr acc;
  const int j_max =
      spec.kind == BasisKind::re_part ? n / 2 : (n - 1) / 2;
  for (int j = 0; j <= j_max; ++j) {
    const int a = spec.kind == BasisKind::re_part ? n - 2 * j : n - 2 * j - 1;
    const int b = spec.kind == BasisKind::re_part ? 2 * j : 2 * j + 1;
    const double coeff =
        static_cast<double>((j % 2 == 0 ? 1.0L : -1.0L) /
                            (factorial_ld(a) * factorial_ld(b)));

    ExprPtr term;
    if (a > 0) term = monomial(dx, a);
    if (b > 0) {
      term = term ? Expr::mul(std::move(term), monomial(dy, b))
                  : monomial(dy, b);
    }
    if (coeff != 1.0) {
      term = term ? Expr::mul(Expr::constant(coeff), std::move(term))
                  : Expr::constant(coeff);
    } else if (!term) {
      term = Expr::constant(1.0);
    }
    acc = acc ? Expr::add(std::move(acc), std::move(term)) : std::move(term);
  }
  return acc;
}

}  // namespace dyadic

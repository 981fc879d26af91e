#include "dyadic/mvp.hpp"

#include <cmath>

#include "dyadic/quadrature.hpp"
#include "dyadic/util.hpp"

namespace dyadic {

namespace {

using std::abs;

double quad_floor(const QuadFloat& abs_mass) {
  // 64 units in the last place of the heaviest contribution; generous slack
  // over the handful of operations that combine the averages.
  static const QuadFloat eps = std::numeric_limits<QuadFloat>::epsilon();
  return static_cast<double>(QuadFloat(64) * eps * abs_mass);
}

long double factorial_ld(int n) {
  long double acc = 1;
  for (int i = 2; i <= n; ++i) acc *= i;
  return acc;
}

}  // namespace

DefectSample mean_value_defect(const ExprPtr& h, std::array<double, 2> x,
                               double l, const StencilFamily& stencil,
                               int quad_order, bool confine_unit_square) {
  if (l <= 0) throw Error(Errc::invalid_argument, "side must be positive");
  if (confine_unit_square) {
    int max_p2 = 0;
    for (const StencilPair& p : stencil.pairs()) max_p2 = std::max(max_p2, p.p2);
    const double reach = (max_p2 + 0.5) * l;
    if (x[0] - reach < 0 || x[0] + reach > 1 || x[1] - reach < 0 ||
        x[1] + reach > 1) {
      throw Error(Errc::neighbor_out_of_domain,
                  "a neighbor square leaves the unit square");
    }
  }

  const QuadRule<QuadFloat> rule = gauss_legendre<QuadFloat>(quad_order);
  const QuadFloat cx(x[0]), cy(x[1]), side(l);
  const Expr& he = *h;

  const QuadFloat self = square_average(he, cx, cy, side, rule);
  QuadFloat defect = self;
  QuadFloat abs_mass = abs(self);
  for (std::size_t pi = 0; pi < stencil.pairs().size(); ++pi) {
    const QuadFloat a = rational_cast<QuadFloat>(stencil.coefficients()[pi]);
    QuadFloat sum = 0;
    QuadFloat sum_abs = 0;
    for (const auto& [d1, d2] : neighbor_offsets(stencil.pairs()[pi])) {
      const QuadFloat v = square_average(
          he, QuadFloat(cx + QuadFloat(d1) * side),
          QuadFloat(cy + QuadFloat(d2) * side), side, rule);
      sum += v;
      sum_abs += abs(v);
    }
    defect -= a * sum;
    abs_mass += abs(a) * sum_abs;
  }

  DefectSample out;
  out.center = x;
  out.side = l;
  out.defect = static_cast<double>(defect);
  out.floor = quad_floor(abs_mass);
  return out;
}

HarmonicSpec sinexp_spec() {
  HarmonicSpec spec;
  spec.expr = parse("sin(x)*exp(y)");
  // d^(4k)/dx1^(4k) of sin(x1)e^(x2) is sin(x1)e^(x2) again; bounded by
  // e^(x2), padded by the neighbor reach for a certified-over-the-region
  // constant.
  spec.deriv_bound = [](int, std::array<double, 2> x, double l,
                        const StencilFamily& fam) {
    int max_p2 = 0;
    for (const StencilPair& p : fam.pairs()) max_p2 = std::max(max_p2, p.p2);
    return std::exp(x[1] + l * max_p2);
  };
  return spec;
}

HarmonicSpec basis_spec(const HarmonicBasisSpec& basis) {
  HarmonicSpec spec;
  spec.expr = harmonic_basis(basis);
  const int degree = basis.degree;
  const BasisKind kind = basis.kind;
  // Differentiating in x1 lowers the degree by one within the same kind, and
  // every basis polynomial of positive degree vanishes at its center; only
  // the re_part of degree exactly 4k contributes 1.
  spec.deriv_bound = [degree, kind](int k, std::array<double, 2>, double,
                                    const StencilFamily&) {
    return (kind == BasisKind::re_part && 4 * k == degree) ? 1.0 : 0.0;
  };
  return spec;
}

BoundBreakdown defect_bound(const HarmonicSpec& h, std::array<double, 2> x,
                            double l, const StencilFamily& stencil,
                            int truncation) {
  if (!h.deriv_bound) {
    throw Error(Errc::unbounded_derivatives,
                "test function carries no certified derivative bounds");
  }
  if (truncation < 1) {
    throw Error(Errc::invalid_argument, "truncation must be >= 1");
  }
  BigInt norm2_max = 0;
  for (const StencilPair& p : stencil.pairs()) {
    const BigInt n2 = BigInt(2 * p.p1 + 1) * (2 * p.p1 + 1) +
                      BigInt(2 * p.p2 + 1) * (2 * p.p2 + 1);
    norm2_max = std::max(norm2_max, n2);
  }
  const long double norm2 = norm2_max.convert_to<long double>();
  const long double half_l = static_cast<long double>(l) / 2;

  auto term = [&](int k) -> long double {
    const long double d = h.deriv_bound(k, x, l, stencil);
    if (d == 0) return 0;
    const long double stencil_mass =
        std::pow(2.0L, 2 * k + 1) + std::pow(norm2, 2 * k + 1);
    return d / factorial_ld(4 * k + 2) * stencil_mass *
           std::pow(half_l, 4.0L * k);
  };

  const int start = std::max(stencil.level().level, 1);
  const int last = std::max(truncation, start);
  BoundBreakdown out;
  long double partial = 0;
  for (int k = start; k <= last; ++k) partial += term(k);
  out.partial = static_cast<double>(partial);

  const long double t1 = term(last + 1);
  const long double t2 = term(last + 2);
  if (t1 > 0) {
    const long double ratio = t2 / t1;
    if (ratio < 0.5L) {
      out.tail = static_cast<double>(t1 / (1 - ratio));
    } else {
      out.tail = static_cast<double>(t1);
      out.tail_certified = false;
    }
  }
  return out;
}

OrderFit fit_order(std::span<const DefectSample> samples) {
  std::vector<double> ls, ds;
  bool any_above_zero = false;
  for (const DefectSample& s : samples) {
    if (std::fabs(s.defect) > 0) any_above_zero = true;
    if (std::fabs(s.defect) > 10 * s.floor) {
      ls.push_back(std::log(s.side));
      ds.push_back(std::log(std::fabs(s.defect)));
    }
  }
  if (ls.empty()) {
    throw Error(Errc::all_below_floor,
                any_above_zero
                    ? "all defects sit below the rounding floor"
                    : "all defects are exactly zero");
  }
  if (ls.size() < 3) {
    throw Error(Errc::insufficient_samples,
                "need at least 3 samples above the rounding floor, have " +
                    std::to_string(ls.size()));
  }
  const LineFit fit = least_squares(ls, ds);
  OrderFit out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.r2 = fit.r2;
  out.sides.reserve(ls.size());
  out.defects.reserve(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    out.sides.push_back(std::exp(ls[i]));
    out.defects.push_back(std::exp(ds[i]));
  }
  return out;
}

std::vector<SweepRow> exactness_sweep(const StencilFamily& stencil,
                                      std::array<double, 2> x, double l,
                                      int quad_order) {
  if (!stencil.level().exact) {
    throw Error(Errc::level_unknown,
                "family level is only a lower bound; cannot pick the sweep "
                "range");
  }
  const int N = stencil.level().level;
  if (N < 1) {
    throw Error(Errc::invalid_argument,
                "family has level 0 (normalization violated)");
  }
  std::vector<SweepRow> rows;
  for (int n = 1; n <= 4 * N; ++n) {
    for (const BasisKind kind : {BasisKind::re_part, BasisKind::im_part}) {
      SweepRow row;
      row.kind = kind;
      row.degree = n;
      const ExprPtr fn = harmonic_basis({kind, n, x});
      const DefectSample sample =
          mean_value_defect(fn, x, l, stencil, quad_order);
      row.measured = sample.defect;
      row.floor = sample.floor;
      if (kind == BasisKind::re_part && n % 4 == 0) {
        const int k = n / 4;
        row.closed_exact =
            moment_defect(stencil.pairs(), stencil.coefficients(), k);
        row.closed_value = static_cast<double>(
            rational_cast<long double>(row.closed_exact) /
            factorial_ld(n + 2) *
            std::pow(static_cast<long double>(l) / 2, 4.0L * k));
      }
      if (row.closed_exact == 0) {
        row.pass = std::fabs(row.measured) <= 1e-10;
      } else if (n == 4 * N) {
        row.pass = std::fabs(row.measured - row.closed_value) <=
                   1e-8 * std::fabs(row.closed_value) + row.floor;
      } else {
        // A nonzero closed form below degree 4N contradicts the level.
        row.pass = false;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace dyadic

#pragma once

/// Mean value defect lab: measures I(h,x,l) - sum_p A_p I_p(h,x,l), checks it
/// against the truncated theoretical bound, fits convergence orders on the
/// l-ladder, and sweeps the harmonic polynomial basis for the exactness law.
///
/// Defects are measured in 113-bit quadrature so that high-level families
/// (whose defects sit far below double rounding at moderate l) remain
/// resolvable; each sample carries its own rounding floor, computed from the
/// precision actually used and the absolute mass of the sum that produced it.
/// Samples below 10x their floor are treated as exact zeros by the order fit.

#include <array>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dyadic/expr.hpp"
#include "dyadic/stencil.hpp"

namespace dyadic {

using QuadFloat = boost::multiprecision::cpp_bin_float_quad;

struct DefectSample {
  std::array<double, 2> center{0.5, 0.5};
  double side = 0;
  double defect = 0;
  double bound = std::numeric_limits<double>::quiet_NaN();  // if computed
  double floor = 0;  // rounding floor of this measurement
};

/// Measures the defect of h on the square at x with side l under the family.
/// When confine_unit_square is set, any neighbor square leaving [0,1]^2
/// throws Errc::neighbor_out_of_domain (for functions defined only there).
DefectSample mean_value_defect(const ExprPtr& h, std::array<double, 2> x,
                               double l, const StencilFamily& stencil,
                               int quad_order,
                               bool confine_unit_square = false);

/// A test function together with certified bounds on the center derivatives
/// |d^(4k) h / dx1^(4k) (x)| that enter the defect bound. A default-null
/// bound function makes defect_bound throw Errc::unbounded_derivatives.
struct HarmonicSpec {
  ExprPtr expr;
  std::function<double(int k, std::array<double, 2> x, double l,
                       const StencilFamily&)>
      deriv_bound;
};

/// sin(x)*exp(y) with the derivative bound exp(x2 + l*p2max).
HarmonicSpec sinexp_spec();

/// Basis polynomial centered where it is evaluated: the only nonzero center
/// derivative bound is 1 at 4k == degree (re_part kind); zero otherwise.
HarmonicSpec basis_spec(const HarmonicBasisSpec& spec);

struct BoundBreakdown {
  double partial = 0;        // terms k = level .. K
  double tail = 0;           // geometric estimate beyond K
  bool tail_certified = true;
  double total() const { return partial + tail; }
};

/// Truncated defect bound: sum_{k=N}^{K} |d^(4k)h(x)| / (4k+2)! *
/// (2^(2k+1) + ||P||^(4k+2)) * (l/2)^(4k), with ||P|| = max_p |2p + (1,1)|,
/// plus a ratio-test tail estimate.
BoundBreakdown defect_bound(const HarmonicSpec& h, std::array<double, 2> x,
                            double l, const StencilFamily& stencil,
                            int truncation = 6);

struct OrderFit {
  std::vector<double> sides;    // samples used by the fit
  std::vector<double> defects;
  double slope = 0;
  double intercept = 0;
  double r2 = 1;
};

/// Least squares on (log l, log |defect|) over samples above 10x their
/// rounding floor. Throws Errc::all_below_floor when nothing survives
/// (exactness; defer to exactness_sweep) and Errc::insufficient_samples when
/// fewer than 3 do.
OrderFit fit_order(std::span<const DefectSample> samples);

struct SweepRow {
  BasisKind kind = BasisKind::re_part;
  int degree = 0;
  double measured = 0;
  Rational closed_exact;  // exact defect constant; 0 for annihilated rows
  double closed_value = 0;
  double floor = 0;
  bool pass = false;
};

/// For n = 1 .. 4N, both basis kinds, centered at x: measured defect, the
/// closed-form value from the exact moment defect, and the per-row verdict
/// (<= 1e-10 for annihilated rows; closed-form match for degree 4N).
/// Throws Errc::level_unknown when the family level is only a lower bound.
std::vector<SweepRow> exactness_sweep(const StencilFamily& stencil,
                                      std::array<double, 2> x, double l,
                                      int quad_order);

}  // namespace dyadic

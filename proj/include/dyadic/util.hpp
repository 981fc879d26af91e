#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace dyadic {

/// Worker count used when a caller does not specify one: the DYADIC_THREADS
/// environment variable if set, otherwise hardware concurrency, clamped to
/// [1, 64].
int default_thread_count();

/// Runs fn(i) for i in [begin, end) on up to `threads` workers. Results must
/// go to disjoint slots; the schedule is dynamic, so any shared accumulation
/// would be nondeterministic. Exceptions from workers are rethrown (first
/// one wins).
void parallel_for(int begin, int end, int threads,
                  const std::function<void(int)>& fn);

/// Sum with a fixed pairwise reduction tree. Deterministic for a given input
/// order and more accurate than running accumulation on long arrays.
template <class Real>
Real pairwise_sum(std::span<const Real> v) {
  if (v.size() <= 8) {
    Real acc{0};
    for (const Real& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 1;
};

/// Ordinary least squares y = slope*x + intercept. Caller guarantees
/// xs.size() == ys.size() >= 2 with non-constant xs.
LineFit least_squares(std::span<const double> xs, std::span<const double> ys);

/// Round-trippable decimal rendering ("%.17g").
std::string format_double(double v);

/// 15-significant-digit rendering used next to exact rational strings.
std::string format_double15(double v);

}  // namespace dyadic

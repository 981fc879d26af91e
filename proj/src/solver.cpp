#include "dyadic/solver.hpp"

#include <algorithm>
#include <cassert>
#include <utility>

#include "json.hpp"

namespace dyadic {

namespace {

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Row-echelon reduction of [A | b] by Bareiss fraction-free elimination.
/// Columns with no usable pivot are recorded as free instead of divided
/// through; every division is exact.
struct Echelon {
  IntMatrix m;                  // rows x (cols + 1), last column is rhs
  std::vector<int> pivot_cols;  // column of the pivot in row r
  std::vector<int> free_cols;
  bool consistent = true;
};

Echelon eliminate(IntMatrix m, int cols) {
  Echelon e;
  const int rows = static_cast<int>(m.size());
  int rank = 0;
  BigInt prev_pivot = 1;
  for (int c = 0; c < cols; ++c) {
    int pivot_row = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][c] != 0) {
        pivot_row = r;
        break;
      }
    }
    if (pivot_row < 0) {
      e.free_cols.push_back(c);
      continue;
    }
    std::swap(m[rank], m[pivot_row]);
    for (int r = rank + 1; r < rows; ++r) {
      for (int j = c + 1; j <= cols; ++j) {
        // Every division in the fraction-free step is exact (the entries are
        // minors); cpp_int division truncates silently, so check.
        const BigInt num = m[rank][c] * m[r][j] - m[r][c] * m[rank][j];
        BigInt quot, rem;
        boost::multiprecision::divide_qr(num, prev_pivot, quot, rem);
        if (rem != 0) {
          throw Error(Errc::invalid_argument,
                      "internal: fraction-free elimination step not exact");
        }
        m[r][j] = std::move(quot);
      }
      m[r][c] = 0;
    }
    prev_pivot = m[rank][c];
    e.pivot_cols.push_back(c);
    ++rank;
  }
  for (int r = rank; r < rows; ++r) {
    if (m[r][cols] != 0) {
      e.consistent = false;
      break;
    }
  }
  e.m = std::move(m);
  return e;
}

/// Back-substitution in exact rationals given values for the free columns.
std::vector<Rational> back_substitute(const Echelon& e, int cols,
                                      const std::vector<Rational>& free_vals) {
  std::vector<Rational> x(static_cast<std::size_t>(cols), Rational(0));
  for (std::size_t i = 0; i < e.free_cols.size(); ++i) {
    x[static_cast<std::size_t>(e.free_cols[i])] = free_vals[i];
  }
  for (int r = static_cast<int>(e.pivot_cols.size()) - 1; r >= 0; --r) {
    const int c = e.pivot_cols[static_cast<std::size_t>(r)];
    Rational acc = Rational(e.m[static_cast<std::size_t>(r)]
                               [static_cast<std::size_t>(cols)]);
    for (int j = c + 1; j < cols; ++j) {
      acc -= Rational(e.m[static_cast<std::size_t>(r)]
                         [static_cast<std::size_t>(j)]) *
             x[static_cast<std::size_t>(j)];
    }
    x[static_cast<std::size_t>(c)] =
        acc / Rational(e.m[static_cast<std::size_t>(r)]
                          [static_cast<std::size_t>(c)]);
  }
  return x;
}

/// Plain rational Gaussian elimination for small symmetric positive-definite
/// systems (the Gram system of the minimum-norm representative).
std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> a,
                                     std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && a[pr][c] == 0) ++pr;
    assert(pr < n && "Gram matrix must be nonsingular");
    std::swap(a[pr], a[c]);
    std::swap(b[pr], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(n, Rational(0));
  for (std::size_t r = n; r-- > 0;) {
    Rational acc = b[r];
    for (std::size_t j = r + 1; j < n; ++j) acc -= a[r][j] * x[j];
    x[r] = acc / a[r][r];
  }
  return x;
}

}  // namespace

SolutionSet solve_level(const std::vector<StencilPair>& pairs, int N) {
  validate_family_pairs(pairs);
  if (N < 1) {
    throw Error(Errc::invalid_argument, "target level must be >= 1");
  }
  const int cols = static_cast<int>(pairs.size());

  // Rational system rows, then clear denominators per row to integers.
  IntMatrix m(static_cast<std::size_t>(N));
  for (int k = 0; k < N; ++k) {
    std::vector<Rational> row(static_cast<std::size_t>(cols) + 1);
    for (int j = 0; j < cols; ++j) {
      row[static_cast<std::size_t>(j)] =
          moment(pairs[static_cast<std::size_t>(j)], k);
    }
    row[static_cast<std::size_t>(cols)] = moment(StencilPair{0, 0}, k);
    BigInt lcm_den = 1;
    for (const Rational& r : row) {
      lcm_den = boost::multiprecision::lcm(lcm_den, denominator(r));
    }
    auto& target = m[static_cast<std::size_t>(k)];
    target.resize(static_cast<std::size_t>(cols) + 1);
    for (std::size_t j = 0; j < row.size(); ++j) {
      target[j] = numerator(row[j]) * (lcm_den / denominator(row[j]));
    }
  }

  Echelon e = eliminate(std::move(m), cols);

  SolutionSet out;
  out.target_level = N;
  out.pairs = pairs;
  if (!e.consistent) {
    out.kind = SolutionKind::infeasible;
    return out;
  }

  const std::size_t n_free = e.free_cols.size();
  out.particular =
      back_substitute(e, cols, std::vector<Rational>(n_free, Rational(0)));
  for (std::size_t f = 0; f < n_free; ++f) {
    std::vector<Rational> unit(n_free, Rational(0));
    unit[f] = 1;
    std::vector<Rational> member = back_substitute(e, cols, unit);
    for (int j = 0; j < cols; ++j) {
      member[static_cast<std::size_t>(j)] -=
          out.particular[static_cast<std::size_t>(j)];
    }
    out.null_basis.push_back(std::move(member));
  }
  out.kind = n_free == 0 ? SolutionKind::unique : SolutionKind::affine_family;

  // Exact residual check of the particular solution on every row.
  for (int k = 0; k < N; ++k) {
    if (moment_defect(pairs, out.particular, k) != 0) {
      throw Error(Errc::invalid_argument,
                  "internal: nonzero residual after elimination");
    }
  }
  out.realized_level =
      mean_value_level(pairs, out.particular, std::max(16, N + 4));
  return out;
}

int max_level(const std::vector<StencilPair>& pairs, int n_cap) {
  if (n_cap < 1) {
    throw Error(Errc::invalid_argument, "level cap must be >= 1");
  }
  int best = 0;
  for (int n = 1; n <= n_cap; ++n) {
    if (solve_level(pairs, n).kind == SolutionKind::infeasible) break;
    best = n;
  }
  return best;
}

std::vector<Rational> min_norm_member(const SolutionSet& solution) {
  if (solution.kind == SolutionKind::infeasible) {
    throw Error(Errc::invalid_argument,
                "infeasible system has no members");
  }
  if (solution.null_basis.empty()) return solution.particular;

  // Minimize |a + V t|^2 over t: (V^T V) t = -V^T a, exactly.
  const std::size_t dim = solution.particular.size();
  const std::size_t nb = solution.null_basis.size();
  std::vector<std::vector<Rational>> gram(
      nb, std::vector<Rational>(nb, Rational(0)));
  std::vector<Rational> rhs(nb, Rational(0));
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      for (std::size_t d = 0; d < dim; ++d) {
        gram[i][j] += solution.null_basis[i][d] * solution.null_basis[j][d];
      }
    }
    for (std::size_t d = 0; d < dim; ++d) {
      rhs[i] -= solution.null_basis[i][d] * solution.particular[d];
    }
  }
  const std::vector<Rational> t = solve_rational(std::move(gram), rhs);
  std::vector<Rational> member = solution.particular;
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      member[d] += t[i] * solution.null_basis[i][d];
    }
  }
  return member;
}

std::string to_json_string(const SolutionSet& s, int indent) {
  nlohmann::json j;
  switch (s.kind) {
    case SolutionKind::unique: j["kind"] = "unique"; break;
    case SolutionKind::affine_family: j["kind"] = "affine_family"; break;
    case SolutionKind::infeasible: j["kind"] = "infeasible"; break;
  }
  j["target_level"] = s.target_level;
  j["pairs"] = nlohmann::json::array();
  for (const StencilPair& p : s.pairs) j["pairs"].push_back({p.p1, p.p2});
  if (s.kind == SolutionKind::infeasible) return j.dump(indent);

  j["particular"] = nlohmann::json::array();
  for (const Rational& c : s.particular) {
    j["particular"].push_back(to_string(c));
  }
  j["realized_level"] = s.realized_level.level;
  if (!s.realized_level.exact) j["realized_level_is_lower_bound"] = true;
  if (s.kind == SolutionKind::unique) {
    j["renorm"] = to_string(renorm_constant(s.pairs, s.particular));
  } else {
    j["null_basis"] = nlohmann::json::array();
    for (const auto& v : s.null_basis) {
      nlohmann::json jv = nlohmann::json::array();
      for (const Rational& c : v) jv.push_back(to_string(c));
      j["null_basis"].push_back(jv);
    }
    nlohmann::json jm = nlohmann::json::array();
    for (const Rational& c : min_norm_member(s)) jm.push_back(to_string(c));
    j["min_norm"] = jm;
  }
  return j.dump(indent);
}

}  // namespace dyadic

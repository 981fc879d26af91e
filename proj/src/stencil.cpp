#include "dyadic/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace dyadic {

StencilPair make_canonical(int a, int b) {
  if (a < 0 || b < 0) {
    throw Error(Errc::non_canonical_pair,
                "offset pair components must be non-negative");
  }
  return a <= b ? StencilPair{a, b} : StencilPair{b, a};
}

bool is_canonical(StencilPair p) {
  return p.p1 >= 0 && p.p1 <= p.p2;
}

namespace {

void require_canonical(StencilPair p) {
  if (!is_canonical(p)) {
    throw Error(Errc::non_canonical_pair,
                "offset pair (" + std::to_string(p.p1) + "," +
                    std::to_string(p.p2) + ") is not canonical (want 0 <= p1 <= p2)");
  }
}

}  // namespace

Rational multiplicity(StencilPair p) {
  require_canonical(p);
  if (p.p1 == 0 && p.p2 == 0) return Rational(1) / 8;
  if (p.p1 == 0 || p.p1 == p.p2) return Rational(1) / 2;
  return Rational(1);
}

std::vector<std::array<int, 2>> neighbor_offsets(StencilPair p) {
  require_canonical(p);
  std::set<std::array<int, 2>> out;
  const std::array<std::array<int, 2>, 2> axis_choices = {
      {{p.p1, p.p2}, {p.p2, p.p1}}};
  for (const auto& [a, b] : axis_choices) {
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        out.insert({sa * a, sb * b});
      }
    }
  }
  return {out.begin(), out.end()};
}

Rational moment(StencilPair p, int k) {
  require_canonical(p);
  if (k < 0) throw Error(Errc::invalid_argument, "moment order must be >= 0");
  const unsigned n = 4u * static_cast<unsigned>(k) + 2u;
  auto impow = [n](long a, long b) {
    return gauss_pow(GaussInt{BigInt(a), BigInt(b)}, n).im;
  };
  const long a1 = 2L * p.p1 + 1, a0 = 2L * p.p1 - 1;
  const long b1 = 2L * p.p2 + 1, b0 = 2L * p.p2 - 1;
  const BigInt sum =
      impow(a1, b1) - impow(a0, b1) + impow(a0, b0) - impow(a1, b0);
  return Rational(2) * multiplicity(p) * Rational(sum);
}

Rational moment_bound(StencilPair p, int k) {
  require_canonical(p);
  if (k < 0) throw Error(Errc::invalid_argument, "moment order must be >= 0");
  const BigInt norm2 = BigInt(2 * p.p1 + 1) * (2 * p.p1 + 1) +
                       BigInt(2 * p.p2 + 1) * (2 * p.p2 + 1);
  return Rational(8) * multiplicity(p) *
         Rational(boost::multiprecision::pow(norm2, 2 * k + 1));
}

double moment_sine_form(StencilPair p, int k) {
  require_canonical(p);
  const double n = 4.0 * k + 2.0;
  auto term = [n](double a, double b) {
    const double r2 = a * a + b * b;
    return std::pow(r2, (n / 2.0)) * std::sin(n * std::atan(b / a));
  };
  const double a1 = 2.0 * p.p1 + 1, a0 = 2.0 * p.p1 - 1;
  const double b1 = 2.0 * p.p2 + 1, b0 = 2.0 * p.p2 - 1;
  return 2.0 * to_double(multiplicity(p)) *
         (term(a1, b1) - term(a0, b1) + term(a0, b0) - term(a1, b0));
}

void validate_family_pairs(std::span<const StencilPair> pairs) {
  if (pairs.empty()) {
    throw Error(Errc::invalid_argument, "offset family must be non-empty");
  }
  std::set<std::pair<int, int>> seen;
  for (const StencilPair& p : pairs) {
    require_canonical(p);
    if (p.p2 == 0) {
      throw Error(Errc::non_canonical_pair,
                  "offset pair (0,0) is not allowed in a family (p2 >= 1)");
    }
    if (!seen.insert({p.p1, p.p2}).second) {
      throw Error(Errc::duplicate_pair,
                  "duplicate offset pair (" + std::to_string(p.p1) + "," +
                      std::to_string(p.p2) + ")");
    }
  }
}

Rational renorm_constant(std::span<const StencilPair> pairs,
                         std::span<const Rational> coefficients) {
  validate_family_pairs(pairs);
  if (pairs.size() != coefficients.size()) {
    throw Error(Errc::invalid_argument,
                "pairs/coefficients size mismatch");
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    sum += Rational(p.p1 * p.p1 + p.p2 * p.p2) * multiplicity(p) *
           coefficients[i];
  }
  if (sum == 0) {
    throw Error(Errc::zero_denominator,
                "degenerate coefficient family: sum |p|^2 c_p A_p = 0");
  }
  return Rational(1) / (Rational(2) * sum);
}

LevelResult mean_value_level(std::span<const StencilPair> pairs,
                             std::span<const Rational> coefficients,
                             int k_max) {
  validate_family_pairs(pairs);
  if (pairs.size() != coefficients.size()) {
    throw Error(Errc::invalid_argument, "pairs/coefficients size mismatch");
  }
  if (k_max < 0) throw Error(Errc::invalid_argument, "k_max must be >= 0");
  for (int k = 0; k <= k_max; ++k) {
    if (moment_defect(pairs, coefficients, k) != 0) return {k, true};
  }
  return {k_max + 1, false};
}

Rational moment_defect(std::span<const StencilPair> pairs,
                       std::span<const Rational> coefficients, int k) {
  Rational sum = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    sum += coefficients[i] * moment(pairs[i], k);
  }
  return moment(StencilPair{0, 0}, k) - sum;
}

StencilFamily StencilFamily::create(std::vector<StencilPair> pairs,
                                    std::vector<Rational> coefficients,
                                    int k_max) {
  validate_family_pairs(pairs);
  if (pairs.size() != coefficients.size()) {
    throw Error(Errc::invalid_argument, "pairs/coefficients size mismatch");
  }
  Rational norm = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    norm += multiplicity(pairs[i]) * coefficients[i];
  }
  if (Rational(8) * norm != 1) {
    throw Error(Errc::invalid_argument,
                "coefficients violate the normalization 8*sum c_p*A_p = 1 "
                "(got " + to_string(Rational(8) * norm) + ")");
  }
  StencilFamily fam;
  fam.renorm_ = renorm_constant(pairs, coefficients);
  fam.level_ = mean_value_level(pairs, coefficients, k_max);
  fam.pairs_ = std::move(pairs);
  fam.coefficients_ = std::move(coefficients);
  return fam;
}

std::string StencilFamily::to_json_string(int indent) const {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const StencilPair& p : pairs_) {
    j["pairs"].push_back({p.p1, p.p2});
  }
  j["coefficients"] = nlohmann::json::array();
  for (const Rational& c : coefficients_) {
    j["coefficients"].push_back(to_string(c));
  }
  j["renorm"] = to_string(renorm_);
  j["level"] = level_.level;
  if (!level_.exact) j["level_is_lower_bound"] = true;
  return j.dump(indent);
}

StencilFamily StencilFamily::from_json_string(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_argument,
                std::string("stencil JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("pairs") || !j.contains("coefficients")) {
    throw Error(Errc::invalid_argument,
                "stencil JSON must be an object with 'pairs' and "
                "'coefficients'");
  }
  std::vector<StencilPair> pairs;
  for (const auto& jp : j["pairs"]) {
    if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number_integer() ||
        !jp[1].is_number_integer()) {
      throw Error(Errc::invalid_argument,
                  "stencil JSON: each pair must be [p1, p2] with integers");
    }
    pairs.push_back({jp[0].get<int>(), jp[1].get<int>()});
  }
  std::vector<Rational> coeffs;
  for (const auto& jc : j["coefficients"]) {
    if (!jc.is_string()) {
      throw Error(Errc::invalid_argument,
                  "stencil JSON: coefficients must be \"num/den\" strings");
    }
    coeffs.push_back(parse_rational(jc.get<std::string>()));
  }
  StencilFamily fam = create(std::move(pairs), std::move(coeffs));
  if (j.contains("renorm")) {
    const Rational declared = parse_rational(j["renorm"].get<std::string>());
    if (declared != fam.renorm_) {
      throw Error(Errc::invalid_argument,
                  "stencil JSON: declared renorm " + to_string(declared) +
                      " does not match computed " + to_string(fam.renorm_));
    }
  }
  if (j.contains("level")) {
    const int declared = j["level"].get<int>();
    if (declared != fam.level_.level) {
      throw Error(Errc::invalid_argument,
                  "stencil JSON: declared level " + std::to_string(declared) +
                      " does not match computed " +
                      std::to_string(fam.level_.level));
    }
  }
  return fam;
}

StencilFamily StencilFamily::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::invalid_argument, "cannot open stencil file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_string(buf.str());
}

void StencilFamily::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::invalid_argument, "cannot write stencil file: " + path);
  }
  out << to_json_string() << "\n";
}

}  // namespace dyadic

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dyadic {

enum class Errc {
  // expression parsing
  syntax,
  unknown_function,
  non_integer_exponent,
  // evaluation
  domain,
  invalid_degree,
  invalid_digit,
  // stencil construction / solving
  zero_denominator,
  non_canonical_pair,
  duplicate_pair,
  // grids and forms
  level_mismatch,
  empty_interior,
  boundary_cell,
  neighbor_out_of_domain,
  // defect lab
  insufficient_samples,
  all_below_floor,
  unbounded_derivatives,
  level_unknown,
  // everything else (bad flags, malformed files, ...)
  invalid_argument,
};

/// Library-wide exception. `code()` identifies the failure condition;
/// `offset()` is a byte position into the offending input for parser errors
/// and npos otherwise.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Error(Errc code, std::string message, std::size_t offset = npos)
      : std::runtime_error(std::move(message)), code_(code), offset_(offset) {}

  Errc code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Errc code_;
  std::size_t offset_;
};

}  // namespace dyadic

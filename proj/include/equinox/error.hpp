#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace equinox {

enum class Errc {
  invalid_argument,
  projection_failed,
  resolution_cap_exceeded,
  no_interior_witness,
  modulus_domain,
  polytope_unbounded,
  dimension_cap,
  budget_empty,
  satiated,
  outside_consumption_set,
  bracket_invalid,
  gr_empty,
  not_a_price,
  no_fixed_point,
  no_interior_point,
  validation_failed,
  certificate_failed,
  schema,
};

std::string_view to_string(Errc code);

// All library failures are reported through this type; what() starts with the
// stable short message for the error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail = {});

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace equinox

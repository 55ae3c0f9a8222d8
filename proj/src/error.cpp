#include "equinox/error.hpp"

namespace equinox {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::projection_failed: return "projection failed";
    case Errc::resolution_cap_exceeded: return "resolution cap exceeded";
    case Errc::no_interior_witness: return "no interior witness";
    case Errc::modulus_domain: return "modulus domain error";
    case Errc::polytope_unbounded: return "P unbounded";
    case Errc::dimension_cap: return "dimension cap exceeded";
    case Errc::budget_empty: return "budget empty";
    case Errc::satiated: return "satiated";
    case Errc::outside_consumption_set: return "outside consumption set";
    case Errc::bracket_invalid: return "bracket invalid";
    case Errc::gr_empty: return "g_r empty at resolution";
    case Errc::not_a_price: return "not a price";
    case Errc::no_fixed_point: return "no fixed point at resolution";
    case Errc::no_interior_point: return "no interior point found";
    case Errc::validation_failed: return "validation failed";
    case Errc::certificate_failed: return "certificate failed";
    case Errc::schema: return "schema error";
  }
  return "unknown error";
}

namespace {

std::string compose(Errc code, const std::string& detail) {
  std::string msg(to_string(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}

}  // namespace

Error::Error(Errc code, const std::string& detail)
    : std::runtime_error(compose(code, detail)), code_(code), detail_(detail) {}

}  // namespace equinox

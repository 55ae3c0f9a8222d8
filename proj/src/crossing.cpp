#include "equinox/crossing.hpp"

#include <algorithm>
#include <cmath>

namespace equinox::geometry {

double crossing_modulus(double outer_radius, double inner_radius, double delta) {
  const double big_r = outer_radius, r = inner_radius;
  if (!(delta > 0.0) || !(delta <= 2.0 * big_r))
    throw Error(Errc::modulus_domain, "delta must lie in (0, 2R]");
  if (!(r > 0.0) || !(r < big_r)) throw Error(Errc::modulus_domain, "need 0 < r < R");
  const double theta = std::acos(1.0 - delta * delta / (2.0 * big_r * big_r));
  const double beta = std::acos(delta / (2.0 * big_r));
  const double alpha = std::asin(r / big_r);
  const double denom = std::abs(std::sin(alpha + theta));
  if (!(denom > 0.0)) throw Error(Errc::modulus_domain, "alpha + theta is a multiple of pi");
  return delta * std::abs(std::sin(beta)) / denom;
}

double crossing_displacement_bound(double outer_radius, double inner_radius, double d) {
  if (!(inner_radius > 0.0) || d < 0.0) throw Error(Errc::modulus_domain, "need r > 0 and d >= 0");
  return d * (outer_radius + d) / (inner_radius + d);
}

}  // namespace equinox::geometry

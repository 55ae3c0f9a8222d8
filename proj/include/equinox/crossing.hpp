#pragma once

#include "equinox/error.hpp"
#include "equinox/linalg.hpp"

namespace equinox::geometry {

struct Crossing {
  Vector point;
  double t = 0;  // point = t * xi + (1 - t) * z
};

inline constexpr double kSegmentTolerance = 1e-10;

// The map h: fixes points of the region and sends an outside z to where the
// segment [xi, z] leaves the region. Works for any region type offering
// contains(x, band) and interior_radius(x).
template <class Region>
Crossing boundary_crossing(const Region& region, const Vector& xi, const Vector& z) {
  if (xi.size() != z.size()) throw Error(Errc::invalid_argument, "dimension mismatch");
  if (!(region.interior_radius(xi) > 0.0)) throw Error(Errc::no_interior_witness, "crossing centre is not interior");
  if (region.contains(z, kBoundaryBand)) return {z, 0.0};
  double lo = 0.0, hi = 1.0;  // lo outside, hi inside
  while (hi - lo > kSegmentTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (region.contains(mid * xi + (1.0 - mid) * z, kBoundaryBand))
      hi = mid;
    else
      lo = mid;
  }
  return {hi * xi + (1.0 - hi) * z, hi};
}

// Modulus of continuity of h on the sphere of radius outer_radius about the
// crossing centre, for a region containing the ball of radius inner_radius.
double crossing_modulus(double outer_radius, double inner_radius, double delta);

// Bound on ||y - h(y)|| for y at distance d from a region that contains the
// ball of radius inner_radius about xi, with ||y - xi|| <= outer_radius + d.
// The region contains the convex hull of that ball and the nearest point to y.
double crossing_displacement_bound(double outer_radius, double inner_radius, double d);

}  // namespace equinox::geometry

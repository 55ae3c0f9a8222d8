#pragma once

#include "equinox/convex_body.hpp"
#include "equinox/crossing.hpp"
#include "equinox/error.hpp"
#include "equinox/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace equinox::geometry {

inline constexpr std::size_t kDefaultNetCap = 2'000'000;

void sort_unique(std::vector<Vector>& points, double tol = 1e-12);

// Keep a point only if it is more than radius away from every point kept so far.
std::vector<Vector> greedy_thin(const std::vector<Vector>& points, double radius);

// Visits the points of a rectangular grid over [lo, hi] whose pitch along
// each axis is at most `pitch`. With an offset in [0,1)^N the grid is shifted
// by offset * pitch and padded by one layer so it still covers the box.
template <class Visit>
void visit_grid(const Vector& lo, const Vector& hi, double pitch, const std::optional<Vector>& offset,
                std::size_t cap, Visit&& visit) {
  const auto n = lo.size();
  std::vector<long> counts(static_cast<std::size_t>(n));
  Vector step(n), start(n);
  double total = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double extent = hi(i) - lo(i);
    long cells = extent > 0.0 ? static_cast<long>(std::ceil(extent / pitch)) : 0;
    step(i) = cells > 0 ? extent / static_cast<double>(cells) : 0.0;
    start(i) = lo(i);
    if (offset && cells > 0) {
      start(i) = lo(i) - step(i) + (*offset)(i)*step(i);
      cells += 1;
    }
    counts[static_cast<std::size_t>(i)] = cells + 1;
    total *= static_cast<double>(cells + 1);
  }
  if (total > static_cast<double>(cap)) throw Error(Errc::resolution_cap_exceeded, "grid would exceed the point cap");
  std::vector<long> idx(static_cast<std::size_t>(n), 0);
  Vector x = start;
  while (true) {
    visit(static_cast<const Vector&>(x));
    Eigen::Index k = 0;
    for (; k < n; ++k) {
      auto& j = idx[static_cast<std::size_t>(k)];
      if (++j < counts[static_cast<std::size_t>(k)]) {
        x(k) = start(k) + static_cast<double>(j) * step(k);
        break;
      }
      j = 0;
      x(k) = start(k);
    }
    if (k == n) break;
  }
}

// eps-net of any closed convex region with project() and bounding_box():
// grid points with pitch 2 eps / sqrt(N) are replaced by their projections.
// Projection is nonexpansive and fixes the region, so every region point is
// within eps of the projection of its nearest grid point.
template <class Region>
std::vector<Vector> projected_grid_net(const Region& region, double eps,
                                       const std::optional<Vector>& offset = std::nullopt,
                                       std::size_t cap = kDefaultNetCap) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  const auto [lo, hi] = region.bounding_box();
  const double pitch = 2.0 * eps / std::sqrt(static_cast<double>(lo.size())) * (1.0 - 1e-9);
  std::vector<Vector> out;
  visit_grid(lo, hi, pitch, offset, cap, [&](const Vector& g) {
    Vector y = region.project(g);
    if ((y - g).norm() <= eps) out.push_back(std::move(y));
  });
  sort_unique(out);
  return out;
}

std::vector<Vector> epsilon_net(const ConvexBody& body, double eps, std::size_t cap = kDefaultNetCap);

// eps-net of X n Y built the way the total boundedness argument goes: a
// delta/2-net of Y, keep the points close to X, push them onto X along
// segments towards the interior witness xi, then thin.
template <class RegionY>
std::vector<Vector> intersect_net(const ConvexBody& x_body, const RegionY& y_region, double eps, const Vector& xi,
                                  std::size_t cap = kDefaultNetCap) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  const double rx = x_body.interior_radius(xi);
  const double ry = y_region.interior_radius(xi);
  if (!(std::min(rx, ry) > 0.0)) throw Error(Errc::no_interior_witness, "xi is not interior to both sets");

  // Build at eps/2 so that the final thinning at eps/2 still leaves an eps-net.
  const double target = eps / 2.0;
  const double big_r = x_body.max_distance_from(xi);
  double delta = target / 8.0;
  for (int i = 0; i < 80 && crossing_displacement_bound(big_r, rx, delta) >= target / 4.0; ++i) delta /= 2.0;

  std::vector<Vector> pushed;
  for (const Vector& y : projected_grid_net(y_region, delta / 2.0, std::nullopt, cap)) {
    if (x_body.distance(y) < 0.75 * delta) pushed.push_back(boundary_crossing(x_body, xi, y).point);
  }
  sort_unique(pushed);
  return greedy_thin(pushed, target);
}

}  // namespace equinox::geometry

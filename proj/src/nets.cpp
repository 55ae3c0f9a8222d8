#include "equinox/nets.hpp"

namespace equinox::geometry {

void sort_unique(std::vector<Vector>& points, double tol) {
  std::sort(points.begin(), points.end(), lex_less);
  auto last = std::unique(points.begin(), points.end(),
                          [tol](const Vector& a, const Vector& b) { return (a - b).norm() <= tol; });
  points.erase(last, points.end());
}

std::vector<Vector> greedy_thin(const std::vector<Vector>& points, double radius) {
  std::vector<Vector> kept;
  for (const auto& p : points) {
    bool covered = false;
    for (const auto& k : kept)
      if ((p - k).norm() <= radius) {
        covered = true;
        break;
      }
    if (!covered) kept.push_back(p);
  }
  return kept;
}

std::vector<Vector> epsilon_net(const ConvexBody& body, double eps, std::size_t cap) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  if (body.max_distance_from(body.interior_point()) < eps) return {body.interior_point()};
  return projected_grid_net(body, eps, std::nullopt, cap);
}

}  // namespace equinox::geometry

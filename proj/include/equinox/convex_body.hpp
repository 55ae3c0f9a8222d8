#pragma once

#include "equinox/linalg.hpp"
#include "equinox/numeric.hpp"

#include <utility>
#include <vector>

namespace equinox::geometry {

enum class BodyKind { box, ball, vpolytope };

// Compact convex set with a certified interior ball: B(interior_point,
// inner_radius) is inside the body and the body is inside B(0, outer_radius).
class ConvexBody {
 public:
  static ConvexBody box(Vector lower, Vector upper);
  static ConvexBody ball(Vector center, double radius);
  static ConvexBody vpolytope(std::vector<Vector> vertices);

  BodyKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(interior_point_.size()); }

  const Vector& interior_point() const { return interior_point_; }
  double inner_radius() const { return inner_radius_; }
  double outer_radius() const { return outer_radius_; }

  // box data
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  // ball data
  const Vector& center() const { return interior_point_; }
  double radius() const { return inner_radius_; }
  // vpolytope data
  const std::vector<Vector>& vertices() const { return vertices_; }
  const Halfspaces& facets() const { return facets_; }

  bool contains(const Vector& x, double band = kBoundaryBand) const;
  Vector project(const Vector& x) const;
  double distance(const Vector& x) const { return (x - project(x)).norm(); }
  // Slack radius: B(x, r) is inside the body when r > 0.
  double interior_radius(const Vector& x) const;
  std::pair<Vector, Vector> bounding_box() const;
  // A minimizer of c . x over the body (lexicographically smallest vertex on ties).
  Vector minimize_linear(const Vector& c) const;
  // sup of ||y - x|| over the body.
  double max_distance_from(const Vector& x) const;

 private:
  ConvexBody() = default;

  BodyKind kind_ = BodyKind::box;
  Vector interior_point_;
  double inner_radius_ = 0;
  double outer_radius_ = 0;
  Vector lower_, upper_;
  std::vector<Vector> vertices_;
  Halfspaces facets_;
};

// {x : normal . x <= offset} intersected with the closed ball B(center, radius).
class HalfspaceBall {
 public:
  HalfspaceBall(Vector normal, double offset, Vector center, double radius);

  int dimension() const { return static_cast<int>(center_.size()); }
  bool contains(const Vector& x, double band = kBoundaryBand) const;
  Vector project(const Vector& x) const;
  double distance(const Vector& x) const { return (x - project(x)).norm(); }
  double interior_radius(const Vector& x) const;
  std::pair<Vector, Vector> bounding_box() const;

 private:
  Vector normal_;  // unit
  double offset_;
  Vector center_;
  double radius_;
};

}  // namespace equinox::geometry

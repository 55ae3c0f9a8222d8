#pragma once

#include "equinox/linalg.hpp"
#include "equinox/numeric.hpp"

#include <memory>
#include <vector>

namespace equinox::geometry {

// Finitely generated cone {sum lambda_j g_j : lambda_j >= 0}. Generators must
// be nonzero and pairwise non-parallel; the polar generators (which double as
// the facet normals of the cone) are enumerated at construction when the
// dimension is within kMaxEnumerationDimension.
class FiniteCone {
 public:
  explicit FiniteCone(std::vector<Vector> generators);

  int dimension() const { return dimension_; }
  const std::vector<Vector>& generators() const { return generators_; }

  // Nearest point of the cone (nonnegative least squares).
  Vector project(const Vector& x) const;
  // Same, also returning the generator weights.
  NnlsResult project_with_weights(const Vector& x) const;
  double distance(const Vector& x) const;
  bool contains(const Vector& x, double band = kBoundaryBand) const;

  bool has_polar_generators() const { return static_cast<bool>(polar_); }
  // Extreme rays (unit) and lineality of the polar cone. Throws
  // Errc::dimension_cap if the dimension is above the enumeration cap.
  const ConeGenerators& polar_generators() const;

  // Radius of a ball around x certified to lie in the cone: min over facets of
  // the slack. Nonpositive when x is not interior; zero for cones without
  // interior.
  double interior_radius(const Vector& x) const;

 private:
  int dimension_;
  std::vector<Vector> generators_;
  Matrix generator_matrix_;
  std::shared_ptr<const ConeGenerators> polar_;
};

// H-representation of the polar: p is a member iff p . g_j <= 0 for all j.
class PolarCone {
 public:
  explicit PolarCone(std::vector<Vector> normals) : normals_(std::move(normals)) {}

  const std::vector<Vector>& inequality_normals() const { return normals_; }
  // max_j p . g_j / ||g_j||
  double max_violation(const Vector& p) const;
  bool contains(const Vector& p, double tol = kBoundaryBand) const { return max_violation(p) <= tol; }

 private:
  std::vector<Vector> normals_;
};

PolarCone polar(const FiniteCone& cone);

Vector cone_project(const FiniteCone& cone, const Vector& x);
double cone_distance(const FiniteCone& cone, const Vector& x);

// The cone intersected with the closed ball B(0, radius). Projection is the
// ball projection of the cone projection, which is exact for a ball centred at
// the apex.
class ClippedCone {
 public:
  ClippedCone(FiniteCone cone, double radius);

  const FiniteCone& cone() const { return cone_; }
  double radius() const { return radius_; }
  int dimension() const { return cone_.dimension(); }

  bool contains(const Vector& x, double band = kBoundaryBand) const;
  Vector project(const Vector& x) const;
  double distance(const Vector& x) const { return (x - project(x)).norm(); }
  double interior_radius(const Vector& x) const;
  std::pair<Vector, Vector> bounding_box() const;

 private:
  FiniteCone cone_;
  double radius_;
};

}  // namespace equinox::geometry

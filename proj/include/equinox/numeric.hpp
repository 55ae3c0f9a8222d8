#pragma once

#include "equinox/linalg.hpp"

#include <vector>

namespace equinox {

struct NnlsResult {
  Vector coefficients;  // lambda >= 0
  Vector fitted;        // A * lambda
  double residual = 0;  // ||A lambda - b||
  int iterations = 0;
};

// Lawson-Hanson active set for min ||A x - b|| subject to x >= 0.
// Throws Errc::projection_failed when the iteration cap is hit.
NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations, double tol = 1e-10);

struct MinNormResult {
  Vector point;
  Vector weights;  // convex weights over the input points
};

// Wolfe's algorithm: the point of conv(points) closest to the origin.
MinNormResult min_norm_point(const std::vector<Vector>& points, double tol = 1e-12);

// Generators of the polyhedral cone {x : a_i . x <= 0 for every normal a_i}:
// extreme rays (unit length) of the pointed part plus an orthonormal basis of
// the lineality space. Double description with floating pivots.
struct ConeGenerators {
  std::vector<Vector> rays;
  std::vector<Vector> lineality;

  bool pointed() const { return lineality.empty(); }
};

ConeGenerators enumerate_cone(const std::vector<Vector>& normals, int dimension,
                              double tol = 1e-9);

// Facets {x : a . x <= b} (with ||a|| = 1) of the convex hull of points that
// span their ambient space. Throws Errc::invalid_argument when the hull is
// lower dimensional.
struct Halfspaces {
  std::vector<Vector> normals;
  std::vector<double> offsets;
};

Halfspaces hull_facets(const std::vector<Vector>& points, double tol = 1e-9);

}  // namespace equinox

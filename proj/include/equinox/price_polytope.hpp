#pragma once

#include "equinox/cone.hpp"
#include "equinox/linalg.hpp"

#include <vector>

namespace equinox::geometry {

// P = {p in polar(Y) : p . xi_bar = -1}. Every polar extreme ray d has
// d . xi_bar < 0 when xi_bar is interior to Y, and the vertices of P are the
// rays rescaled onto the normalizing hyperplane.
class PricePolytope {
 public:
  PricePolytope(FiniteCone cone, Vector xi_bar, double tol = 1e-9);

  const std::vector<Vector>& vertices() const { return vertices_; }
  const Vector& normalizer() const { return xi_bar_; }
  const FiniteCone& cone() const { return cone_; }
  // -1/M where M = max over unit polar extreme rays of d . xi_bar.
  double norm_bound() const { return norm_bound_; }
  double m_constant() const { return m_; }
  double max_vertex_norm() const;
  int dimension() const { return cone_.dimension(); }

  bool contains(const Vector& p, double tol = 1e-7) const;
  Vector centroid() const;

 private:
  FiniteCone cone_;
  Vector xi_bar_;
  std::vector<Vector> vertices_;
  double norm_bound_ = 0;
  double m_ = 0;
};

PricePolytope price_polytope(const FiniteCone& cone, const Vector& xi_bar);

// sup of p . y over P, attained at a vertex.
double support_sup(const PricePolytope& polytope, const Vector& y);

}  // namespace equinox::geometry

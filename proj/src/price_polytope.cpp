#include "equinox/price_polytope.hpp"

#include "equinox/error.hpp"
#include "equinox/nets.hpp"

#include <algorithm>
#include <limits>

namespace equinox::geometry {

PricePolytope::PricePolytope(FiniteCone cone, Vector xi_bar, double tol)
    : cone_(std::move(cone)), xi_bar_(std::move(xi_bar)) {
  if (xi_bar_.size() != cone_.dimension()) throw Error(Errc::invalid_argument, "normalizer dimension mismatch");
  const ConeGenerators& pg = cone_.polar_generators();
  if (!pg.pointed()) throw Error(Errc::polytope_unbounded, "polar cone contains a line");
  if (pg.rays.empty()) throw Error(Errc::polytope_unbounded, "polar cone is trivial, the slice is empty");
  m_ = -std::numeric_limits<double>::infinity();
  for (const Vector& d : pg.rays) {
    const double s = d.dot(xi_bar_);
    if (s >= -tol) throw Error(Errc::polytope_unbounded, "normalizer is not interior to the cone");
    m_ = std::max(m_, s);
    vertices_.push_back(d / -s);
  }
  norm_bound_ = -1.0 / m_;
  sort_unique(vertices_);
}

double PricePolytope::max_vertex_norm() const {
  double best = 0.0;
  for (const auto& v : vertices_) best = std::max(best, v.norm());
  return best;
}

bool PricePolytope::contains(const Vector& p, double tol) const {
  if (p.size() != xi_bar_.size()) return false;
  if (std::abs(p.dot(xi_bar_) + 1.0) > tol) return false;
  for (const auto& g : cone_.generators())
    if (p.dot(g) / g.norm() > tol) return false;
  return true;
}

Vector PricePolytope::centroid() const {
  Vector c = Vector::Zero(xi_bar_.size());
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

PricePolytope price_polytope(const FiniteCone& cone, const Vector& xi_bar) { return PricePolytope(cone, xi_bar); }

double support_sup(const PricePolytope& polytope, const Vector& y) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : polytope.vertices()) best = std::max(best, v.dot(y));
  return best;
}

}  // namespace equinox::geometry

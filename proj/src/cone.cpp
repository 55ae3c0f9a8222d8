#include "equinox/cone.hpp"

#include "equinox/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace equinox::geometry {

FiniteCone::FiniteCone(std::vector<Vector> generators) : generators_(std::move(generators)) {
  if (generators_.empty()) throw Error(Errc::invalid_argument, "cone needs at least one generator");
  dimension_ = static_cast<int>(generators_.front().size());
  if (dimension_ < 1) throw Error(Errc::invalid_argument, "cone dimension must be positive");
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const Vector& g = generators_[i];
    if (g.size() != dimension_) throw Error(Errc::invalid_argument, "generator dimension mismatch");
    if (!g.allFinite()) throw Error(Errc::invalid_argument, "generator has non-finite entries");
    if (g.norm() <= 1e-12) throw Error(Errc::invalid_argument, "zero generator");
    for (std::size_t j = 0; j < i; ++j) {
      const Vector& h = generators_[j];
      if (g.normalized().dot(h.normalized()) > 1.0 - 1e-12)
        throw Error(Errc::invalid_argument, "duplicate generator direction");
    }
  }
  generator_matrix_ = as_columns(generators_, dimension_);
  if (dimension_ <= kMaxEnumerationDimension)
    polar_ = std::make_shared<const ConeGenerators>(enumerate_cone(generators_, dimension_));
}

NnlsResult FiniteCone::project_with_weights(const Vector& x) const {
  if (x.size() != dimension_) throw Error(Errc::invalid_argument, "point dimension mismatch");
  const int cap = 100 * static_cast<int>(generators_.size());
  return nnls(generator_matrix_, x, cap, 1e-10);
}

Vector FiniteCone::project(const Vector& x) const { return project_with_weights(x).fitted; }

double FiniteCone::distance(const Vector& x) const { return project_with_weights(x).residual; }

bool FiniteCone::contains(const Vector& x, double band) const { return distance(x) <= band; }

const ConeGenerators& FiniteCone::polar_generators() const {
  if (!polar_) throw Error(Errc::dimension_cap, "polar enumeration is limited to N <= 6");
  return *polar_;
}

double FiniteCone::interior_radius(const Vector& x) const {
  const ConeGenerators& pg = polar_generators();
  if (!pg.pointed()) return 0.0;
  double r = std::numeric_limits<double>::infinity();
  for (const auto& d : pg.rays) r = std::min(r, -d.dot(x));
  return r;
}

double PolarCone::max_violation(const Vector& p) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& g : normals_) worst = std::max(worst, p.dot(g) / g.norm());
  return worst;
}

PolarCone polar(const FiniteCone& cone) { return PolarCone(cone.generators()); }

Vector cone_project(const FiniteCone& cone, const Vector& x) { return cone.project(x); }

double cone_distance(const FiniteCone& cone, const Vector& x) { return cone.distance(x); }

ClippedCone::ClippedCone(FiniteCone cone, double radius) : cone_(std::move(cone)), radius_(radius) {
  if (!(radius_ > 0.0)) throw Error(Errc::invalid_argument, "clip radius must be positive");
}

bool ClippedCone::contains(const Vector& x, double band) const {
  return x.norm() <= radius_ + band && cone_.contains(x, band);
}

Vector ClippedCone::project(const Vector& x) const {
  Vector y = cone_.project(x);
  const double ny = y.norm();
  if (ny > radius_) y *= radius_ / ny;
  return y;
}

double ClippedCone::interior_radius(const Vector& x) const {
  return std::min(cone_.interior_radius(x), radius_ - x.norm());
}

std::pair<Vector, Vector> ClippedCone::bounding_box() const {
  const Vector r = Vector::Constant(dimension(), radius_);
  return {-r, r};
}

}  // namespace equinox::geometry

#include "equinox/convex_body.hpp"

#include "equinox/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace equinox::geometry {

ConvexBody ConvexBody::box(Vector lower, Vector upper) {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw Error(Errc::invalid_argument, "box bounds must have equal positive length");
  if (!lower.allFinite() || !upper.allFinite()) throw Error(Errc::invalid_argument, "box bounds must be finite");
  if (((upper - lower).array() <= 0.0).any())
    throw Error(Errc::invalid_argument, "box needs lower < upper in every coordinate");
  ConvexBody b;
  b.kind_ = BodyKind::box;
  b.interior_point_ = 0.5 * (lower + upper);
  b.inner_radius_ = 0.5 * (upper - lower).minCoeff();
  b.outer_radius_ = lower.cwiseAbs().cwiseMax(upper.cwiseAbs()).norm();
  b.lower_ = std::move(lower);
  b.upper_ = std::move(upper);
  return b;
}

ConvexBody ConvexBody::ball(Vector center, double radius) {
  if (center.size() == 0 || !center.allFinite()) throw Error(Errc::invalid_argument, "ball centre must be finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(Errc::invalid_argument, "ball radius must be positive");
  ConvexBody b;
  b.kind_ = BodyKind::ball;
  b.outer_radius_ = center.norm() + radius;
  b.interior_point_ = std::move(center);
  b.inner_radius_ = radius;
  return b;
}

ConvexBody ConvexBody::vpolytope(std::vector<Vector> vertices) {
  if (vertices.empty()) throw Error(Errc::invalid_argument, "polytope needs vertices");
  const auto n = vertices.front().size();
  if (n > kMaxEnumerationDimension) throw Error(Errc::dimension_cap, "polytope facets are limited to N <= 6");
  for (const auto& v : vertices)
    if (v.size() != n || !v.allFinite()) throw Error(Errc::invalid_argument, "polytope vertex malformed");
  ConvexBody b;
  b.kind_ = BodyKind::vpolytope;
  b.facets_ = hull_facets(vertices);
  Vector centroid = Vector::Zero(n);
  for (const auto& v : vertices) centroid += v;
  centroid /= static_cast<double>(vertices.size());
  b.interior_point_ = centroid;
  b.vertices_ = std::move(vertices);
  b.inner_radius_ = b.interior_radius(centroid);
  if (!(b.inner_radius_ > 0.0)) throw Error(Errc::invalid_argument, "polytope has empty interior");
  double outer = 0.0;
  for (const auto& v : b.vertices_) outer = std::max(outer, v.norm());
  b.outer_radius_ = outer;
  return b;
}

bool ConvexBody::contains(const Vector& x, double band) const {
  switch (kind_) {
    case BodyKind::box:
      return ((x - lower_).array() >= -band).all() && ((upper_ - x).array() >= -band).all();
    case BodyKind::ball:
      return (x - interior_point_).norm() <= inner_radius_ + band;
    case BodyKind::vpolytope:
      for (std::size_t i = 0; i < facets_.normals.size(); ++i)
        if (facets_.normals[i].dot(x) - facets_.offsets[i] > band) return false;
      return true;
  }
  return false;
}

Vector ConvexBody::project(const Vector& x) const {
  switch (kind_) {
    case BodyKind::box:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case BodyKind::ball: {
      const Vector d = x - interior_point_;
      const double nd = d.norm();
      if (nd <= inner_radius_) return x;
      return interior_point_ + (inner_radius_ / nd) * d;
    }
    case BodyKind::vpolytope: {
      if (contains(x, 0.0)) return x;
      std::vector<Vector> shifted;
      shifted.reserve(vertices_.size());
      for (const auto& v : vertices_) shifted.push_back(v - x);
      const MinNormResult r = min_norm_point(shifted);
      Vector y = Vector::Zero(x.size());
      for (std::size_t i = 0; i < vertices_.size(); ++i) y += r.weights(static_cast<Eigen::Index>(i)) * vertices_[i];
      return y;
    }
  }
  return x;
}

double ConvexBody::interior_radius(const Vector& x) const {
  switch (kind_) {
    case BodyKind::box:
      return std::min((x - lower_).minCoeff(), (upper_ - x).minCoeff());
    case BodyKind::ball:
      return inner_radius_ - (x - interior_point_).norm();
    case BodyKind::vpolytope: {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < facets_.normals.size(); ++i)
        r = std::min(r, facets_.offsets[i] - facets_.normals[i].dot(x));
      return r;
    }
  }
  return 0.0;
}

std::pair<Vector, Vector> ConvexBody::bounding_box() const {
  switch (kind_) {
    case BodyKind::box:
      return {lower_, upper_};
    case BodyKind::ball: {
      const Vector r = Vector::Constant(dimension(), inner_radius_);
      return {interior_point_ - r, interior_point_ + r};
    }
    case BodyKind::vpolytope: {
      Vector lo = vertices_.front(), hi = vertices_.front();
      for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      return {lo, hi};
    }
  }
  return {};
}

Vector ConvexBody::minimize_linear(const Vector& c) const {
  switch (kind_) {
    case BodyKind::box: {
      Vector x = lower_;
      for (Eigen::Index i = 0; i < c.size(); ++i)
        if (c(i) < 0.0) x(i) = upper_(i);
      return x;
    }
    case BodyKind::ball: {
      const double nc = c.norm();
      if (nc == 0.0) return interior_point_;
      return interior_point_ - (inner_radius_ / nc) * c;
    }
    case BodyKind::vpolytope: {
      const Vector* best = &vertices_.front();
      for (const auto& v : vertices_) {
        const double dv = c.dot(v), db = c.dot(*best);
        if (dv < db || (dv == db && lex_less(v, *best))) best = &v;
      }
      return *best;
    }
  }
  return interior_point_;
}

double ConvexBody::max_distance_from(const Vector& x) const {
  switch (kind_) {
    case BodyKind::box:
      return (x - lower_).cwiseAbs().cwiseMax((upper_ - x).cwiseAbs()).norm();
    case BodyKind::ball:
      return (x - interior_point_).norm() + inner_radius_;
    case BodyKind::vpolytope: {
      double d = 0.0;
      for (const auto& v : vertices_) d = std::max(d, (v - x).norm());
      return d;
    }
  }
  return 0.0;
}

HalfspaceBall::HalfspaceBall(Vector normal, double offset, Vector center, double radius)
    : offset_(offset), center_(std::move(center)), radius_(radius) {
  const double nn = normal.norm();
  if (!(nn > 0.0)) throw Error(Errc::invalid_argument, "halfspace normal must be nonzero");
  if (!(radius_ > 0.0)) throw Error(Errc::invalid_argument, "ball radius must be positive");
  normal_ = normal / nn;
  offset_ /= nn;
}

bool HalfspaceBall::contains(const Vector& x, double band) const {
  return normal_.dot(x) <= offset_ + band && (x - center_).norm() <= radius_ + band;
}

Vector HalfspaceBall::project(const Vector& x) const {
  if (contains(x, 0.0)) return x;
  // Only the ball active.
  Vector d = x - center_;
  const double nd = d.norm();
  const Vector on_ball = nd > radius_ ? Vector(center_ + (radius_ / nd) * d) : x;
  if (normal_.dot(on_ball) <= offset_) return on_ball;
  // Only the halfspace active.
  const double excess = normal_.dot(x) - offset_;
  const Vector on_plane = excess > 0.0 ? Vector(x - excess * normal_) : x;
  if ((on_plane - center_).norm() <= radius_) return on_plane;
  // Both active: nearest point of the (N-2)-sphere where the hyperplane cuts the ball.
  const double centre_excess = normal_.dot(center_) - offset_;
  const Vector plane_centre = center_ - centre_excess * normal_;
  const double r2 = radius_ * radius_ - centre_excess * centre_excess;
  if (r2 < 0.0) return on_plane;  // empty intersection; callers check interior witnesses first
  Vector dir = on_plane - plane_centre;
  const double ndir = dir.norm();
  if (ndir == 0.0) return plane_centre;
  return plane_centre + (std::sqrt(r2) / ndir) * dir;
}

double HalfspaceBall::interior_radius(const Vector& x) const {
  return std::min(offset_ - normal_.dot(x), radius_ - (x - center_).norm());
}

std::pair<Vector, Vector> HalfspaceBall::bounding_box() const {
  const Vector r = Vector::Constant(dimension(), radius_);
  return {center_ - r, center_ + r};
}

}  // namespace equinox::geometry

#pragma once

#include "equinox/linalg.hpp"
#include "equinox/price_polytope.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace equinox::fixed_point {

using geometry::PricePolytope;

struct ZeroResult {
  double x = 0;
  double value = 0;  // f(x)
  long grid = 0;     // n of the scan, pitch 1/n
  bool modulus_estimated = false;
};

// Finds x in [0,1] with |f(x)| <= eps for continuous f with f(0) < 0 < f(1),
// decided with a band of eps/2. `grid` is an n with |s - t| <= 1/n implying
// |f(s) - f(t)| < eps/2; when absent it is estimated from samples at pitch
// 1e-5 and the result is re-checked.
ZeroResult approximate_zero(const std::function<double(double)>& f, double eps, std::optional<long> grid = std::nullopt);

using Simplex = std::vector<Vector>;

// Triangulation of conv(points) in its affine hull: a fan from the vertex
// centroid over recursively triangulated facets.
std::vector<Simplex> triangulate(const std::vector<Vector>& points);

std::vector<Simplex> barycentric_subdivision(const Simplex& s);
// 2^d children of half the diameter (Freudenthal subdivision).
std::vector<Simplex> edgewise_subdivision(const Simplex& s);

enum class Subdivision { edgewise, barycentric };

// eps-net of P from barycentric lattices on its triangulation. Always
// contains the vertices of P.
std::vector<Vector> polytope_net(const PricePolytope& polytope, double eps, std::size_t cap = 2'000'000);

// g_r(z) = {p in P : p . z > -r} on a finite net of P.
class GrMap {
 public:
  GrMap(PricePolytope polytope, std::vector<Vector> net, double r);

  const PricePolytope& polytope() const { return polytope_; }
  const std::vector<Vector>& net() const { return net_; }
  double r() const { return r_; }
  GrMap with_r(double r) const { return GrMap(polytope_, net_, r); }

  struct Best {
    Vector p;
    double value = 0;
  };
  // argmax over the net of p . z, ties to the lexicographically smallest p.
  Best argmax(const Vector& z) const;

 private:
  PricePolytope polytope_;
  std::vector<Vector> net_;
  double r_;
};

// Throws "g_r empty at resolution" when the best net value is <= -r.
Vector g_r_select(const GrMap& map, const Vector& z);
// Throws "not a price" when p is not in P.
bool g_r_membership(const GrMap& map, const Vector& z, const Vector& p);

struct WeakApproxReport {
  int samples = 0;
  int counterexamples = 0;
  double delta = 0;       // pair distance bound used for ||z - z'||
  double worst_margin = 0;  // min over all checks of p_t . z_t + r
};

// Samples z on the boundary of the production cone, z' with ||z - z'|| below
// delta_scale * r / (2 max ||p||), members p of g_{r/2}(z) and p' of
// g_{r/2}(z'), and checks p_t . z_t > -r - 1e-9 along the segment.
WeakApproxReport weak_approximability_check(const GrMap& map, int samples, std::uint64_t seed,
                                            double delta_scale = 1.0, double sample_radius = 1.0);

struct KakutaniOptions {
  int max_refine = 12;
  std::size_t active_cap = 120;
  Subdivision scheme = Subdivision::edgewise;
  // Used to pick where to refine when no simplex is completely labelled;
  // larger is better.
  std::function<double(const Vector&)> score;
};

struct KakutaniResult {
  Vector point;
  int rounds = 0;
  std::size_t evaluations = 0;
};

// Simplicial search for p with membership(p). The returned point always
// passed membership; "no fixed point at resolution" after max_refine rounds.
KakutaniResult kakutani_search(const std::function<Vector(const Vector&)>& selection,
                               const std::function<bool(const Vector&)>& membership, const PricePolytope& polytope,
                               const KakutaniOptions& opts = {});

Vector kakutani_fixed_point(const std::function<Vector(const Vector&)>& selection,
                            const std::function<bool(const Vector&)>& membership, const PricePolytope& polytope,
                            double r, int max_refine);

}  // namespace equinox::fixed_point

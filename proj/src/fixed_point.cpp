#include "equinox/fixed_point.hpp"

#include "equinox/error.hpp"
#include "equinox/nets.hpp"
#include "equinox/numeric.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace equinox::fixed_point {

namespace {

long scan_for_zero(const std::function<double(double)>& f, double eps, long n) {
  // f(0) <= -eps/2 here. The first grid point with f > -eps/2 follows one
  // with f <= -eps/2, and the modulus keeps it below eps/2.
  for (long m = 1; m <= n; ++m)
    if (f(static_cast<double>(m) / static_cast<double>(n)) > -eps / 2.0) return m;
  return n;
}

}  // namespace

ZeroResult approximate_zero(const std::function<double(double)>& f, double eps, std::optional<long> grid) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  const double f0 = f(0.0), f1 = f(1.0);
  if (!(f0 < eps / 2.0) || !(f1 > -eps / 2.0)) throw Error(Errc::bracket_invalid, "need f(0) < 0 < f(1) within eps/2");
  ZeroResult out;
  if (f0 > -eps / 2.0) {
    out.value = f0;
    return out;
  }
  long n = 0;
  if (grid) {
    if (*grid < 1) throw Error(Errc::invalid_argument, "grid must be positive");
    n = *grid;
  } else {
    out.modulus_estimated = true;
    constexpr long kSamples = 100000;  // pitch 1e-5
    double slope = 0.0, prev = f0;
    for (long i = 1; i <= kSamples; ++i) {
      const double cur = f(static_cast<double>(i) / kSamples);
      slope = std::max(slope, std::abs(cur - prev) * kSamples);
      prev = cur;
    }
    n = 1;
    while (static_cast<double>(n) < 3.0 * slope / eps + 1.0) n *= 2;
  }
  for (int attempt = 0; attempt < 8; ++attempt) {
    const long m = scan_for_zero(f, eps, n);
    out.x = static_cast<double>(m) / static_cast<double>(n);
    out.value = f(out.x);
    out.grid = n;
    if (std::abs(out.value) <= eps) {
      // Polish: find the sign change next to the scan point and bisect it,
      // keeping whichever candidate has the smallest |f|.
      auto keep = [&](double x, double fx) {
        if (std::abs(fx) < std::abs(out.value)) out = {x, fx, n, out.modulus_estimated};
      };
      long k = m;
      double fk = out.value;
      while (fk < 0.0 && k < n && k < m + 64) {
        ++k;
        fk = f(static_cast<double>(k) / static_cast<double>(n));
        keep(static_cast<double>(k) / static_cast<double>(n), fk);
      }
      double lo = static_cast<double>(k - 1) / static_cast<double>(n), hi = static_cast<double>(k) / static_cast<double>(n);
      if (fk > 0.0 && k > 0 && f(lo) < 0.0) {
        for (int it = 0; it < 64 && out.value != 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          keep(mid, fm);
          (fm < 0.0 ? lo : hi) = mid;
        }
      }
      return out;
    }
    if (grid) break;
    n *= 2;
  }
  throw Error(Errc::bracket_invalid, "grid scan did not reach |f| <= eps; the modulus is wrong");
}

std::vector<Simplex> triangulate(const std::vector<Vector>& input) {
  if (input.empty()) throw Error(Errc::invalid_argument, "nothing to triangulate");
  std::vector<Vector> pts = input;
  geometry::sort_unique(pts, 1e-12);
  const auto n = pts.front().size();
  Vector c = Vector::Zero(n);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Matrix m(n, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = pts[j] - c;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index d = 0;
  while (d < sv.size() && sv(d) > 1e-9 * scale) ++d;
  if (d == 0) return {{pts.front()}};
  const Matrix basis = svd.matrixU().leftCols(d);
  std::vector<Vector> local;
  for (const auto& p : pts) local.push_back(basis.transpose() * (p - c));
  if (d == 1) {
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < local.size(); ++i) {
      if (local[i](0) < local[lo](0)) lo = i;
      if (local[i](0) > local[hi](0)) hi = i;
    }
    return {{pts[lo], pts[hi]}};
  }
  const Halfspaces facets = hull_facets(local);
  std::vector<Simplex> out;
  for (std::size_t f = 0; f < facets.normals.size(); ++f) {
    std::vector<Vector> on_facet;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (facets.normals[f].dot(local[i]) >= facets.offsets[f] - 1e-9 * scale) on_facet.push_back(pts[i]);
    for (auto s : triangulate(on_facet)) {
      s.push_back(c);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Simplex> barycentric_subdivision(const Simplex& s) {
  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Simplex> out;
  do {
    Simplex child;
    Vector acc = Vector::Zero(s.front().size());
    for (std::size_t j = 0; j < perm.size(); ++j) {
      acc += s[perm[j]];
      child.push_back(acc / static_cast<double>(j + 1));
    }
    out.push_back(std::move(child));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Simplex> edgewise_subdivision(const Simplex& s) {
  // s is the image of the Kuhn simplex 1 >= y_1 >= ... >= y_d >= 0 under
  // y -> v_0 + sum_i y_i (v_i - v_{i-1}). Scaling by two, the Freudenthal
  // cells of the unit grid that stay in the ordered region are the children.
  const std::size_t d = s.size() - 1;
  if (d == 0) return {s};
  auto place = [&](const std::vector<int>& y) {
    Vector x = s[0];
    for (std::size_t i = 1; i <= d; ++i) x += 0.5 * y[i - 1] * (s[i] - s[i - 1]);
    return x;
  };
  auto ordered = [&](const std::vector<int>& y) {
    for (std::size_t i = 0; i < d; ++i) {
      if (y[i] < 0 || y[i] > 2) return false;
      if (i > 0 && y[i] > y[i - 1]) return false;
    }
    return true;
  };
  std::vector<Simplex> out;
  std::vector<std::size_t> perm(d);
  for (unsigned base = 0; base < (1u << d); ++base) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> y(d);
      for (std::size_t i = 0; i < d; ++i) y[i] = (base >> i) & 1u;
      Simplex child;
      bool inside = ordered(y);
      if (inside) child.push_back(place(y));
      for (std::size_t j = 0; j < d && inside; ++j) {
        ++y[perm[j]];
        inside = ordered(y);
        if (inside) child.push_back(place(y));
      }
      if (inside) out.push_back(std::move(child));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

std::vector<Vector> polytope_net(const PricePolytope& polytope, double eps, std::size_t cap) {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  std::vector<Vector> out = polytope.vertices();
  for (const Simplex& s : triangulate(polytope.vertices())) {
    const std::size_t d = s.size() - 1;
    if (d == 0) continue;
    double diam = 0.0;
    for (const auto& a : s)
      for (const auto& b : s) diam = std::max(diam, (a - b).norm());
    // Rounding barycentric weights to multiples of 1/k moves a point by at
    // most 2 d diam / k.
    const long k = std::max(1L, static_cast<long>(std::ceil(2.0 * static_cast<double>(d) * diam / eps)));
    std::vector<long> parts(d + 1, 0);
    // Enumerate compositions of k into d + 1 nonnegative parts.
    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
      if (out.size() > cap) throw Error(Errc::resolution_cap_exceeded, "price net would exceed the point cap");
      if (i == d) {
        parts[d] = left;
        Vector p = Vector::Zero(s.front().size());
        for (std::size_t j = 0; j <= d; ++j) p += (static_cast<double>(parts[j]) / static_cast<double>(k)) * s[j];
        out.push_back(std::move(p));
        return;
      }
      for (long a = 0; a <= left; ++a) {
        parts[i] = a;
        rec(i + 1, left - a);
      }
    };
    rec(0, k);
  }
  geometry::sort_unique(out, 1e-12);
  return out;
}

GrMap::GrMap(PricePolytope polytope, std::vector<Vector> net, double r)
    : polytope_(std::move(polytope)), net_(std::move(net)), r_(r) {
  if (!(r_ > 0.0)) throw Error(Errc::invalid_argument, "r must be positive");
  if (net_.empty()) throw Error(Errc::invalid_argument, "net of P is empty");
  for (const auto& p : net_)
    if (!polytope_.contains(p)) throw Error(Errc::not_a_price, "net point outside P");
}

GrMap::Best GrMap::argmax(const Vector& z) const {
  // Values within rounding of each other count as ties.
  const double tie = 1e-12 * (1.0 + polytope_.max_vertex_norm() * z.norm());
  Best b{net_.front(), net_.front().dot(z)};
  for (const auto& p : net_) {
    const double v = p.dot(z);
    if (v > b.value + tie || (v >= b.value - tie && lex_less(p, b.p))) b = {p, v};
  }
  return b;
}

Vector g_r_select(const GrMap& map, const Vector& z) {
  GrMap::Best b = map.argmax(z);
  if (!(b.value > -map.r())) throw Error(Errc::gr_empty, "best net value is " + std::to_string(b.value));
  return b.p;
}

bool g_r_membership(const GrMap& map, const Vector& z, const Vector& p) {
  if (!map.polytope().contains(p)) throw Error(Errc::not_a_price, "p is not in P");
  return p.dot(z) > -map.r();
}

WeakApproxReport weak_approximability_check(const GrMap& map, int samples, std::uint64_t seed, double delta_scale,
                                            double sample_radius) {
  WeakApproxReport rep;
  rep.samples = samples;
  const double r = map.r();
  rep.delta = r / (2.0 * map.polytope().max_vertex_norm());
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const auto& cone = map.polytope().cone();
  const int n = cone.dimension();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto random_direction = [&] {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = gauss(rng);
    return Vector(v / v.norm());
  };
  auto random_member = [&](const Vector& z) {
    std::vector<const Vector*> members;
    for (const auto& p : map.net())
      if (p.dot(z) > -r / 2.0) members.push_back(&p);
    if (members.empty()) return map.argmax(z).p;
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    return *members[pick(rng)];
  };
  for (int s = 0; s < samples; ++s) {
    Vector z;
    do {
      const Vector x = sample_radius * std::cbrt(unif(rng)) * random_direction();
      if (cone.contains(x)) continue;
      z = cone.project(x);
    } while (z.size() == 0);
    const Vector zp = z + delta_scale * rep.delta * unif(rng) * random_direction() * (1.0 - 1e-12);
    const Vector p = random_member(z), pp = random_member(zp);
    bool bad = false;
    for (int k = 0; k <= 20; ++k) {
      const double t = k / 20.0;
      const double v = (t * p + (1 - t) * pp).dot(t * z + (1 - t) * zp);
      rep.worst_margin = std::min(rep.worst_margin, v + r);
      if (!(v > -r - 1e-9)) bad = true;
    }
    if (bad) ++rep.counterexamples;
  }
  return rep;
}

namespace {

struct Key {
  std::vector<double> c;
  bool operator<(const Key& o) const { return c < o.c; }
};

Key key_of(const Vector& v) { return {std::vector<double>(v.data(), v.data() + v.size())}; }

struct Found {
  Vector point;
};

}  // namespace

namespace {

bool simplex_contains(const Simplex& s, const Vector& v) {
  const Eigen::Index d = static_cast<Eigen::Index>(s.size()) - 1;
  if (d == 0) return (v - s[0]).norm() <= 1e-12 * (1.0 + v.norm());
  Matrix a(v.size(), d);
  for (Eigen::Index j = 0; j < d; ++j) a.col(j) = s[static_cast<std::size_t>(j) + 1] - s[0];
  const Vector rhs = v - s[0];
  const Vector lambda = a.colPivHouseholderQr().solve(rhs);
  const double scale = 1e-9 * (1.0 + a.norm());
  if ((a * lambda - rhs).norm() > scale) return false;
  return lambda.minCoeff() >= -1e-9 && lambda.sum() <= 1.0 + 1e-9;
}

}  // namespace

KakutaniResult kakutani_search(const std::function<Vector(const Vector&)>& selection,
                               const std::function<bool(const Vector&)>& membership, const PricePolytope& polytope,
                               const KakutaniOptions& opts) {
  KakutaniResult res;
  std::map<Key, Vector> labels;
  std::map<Key, bool> tested;
  std::map<Key, double> scores;

  auto check = [&](const Vector& p) {
    auto [it, fresh] = tested.try_emplace(key_of(p), false);
    if (fresh) {
      ++res.evaluations;
      it->second = membership(p);
    }
    if (it->second) throw Found{p};
  };
  auto label = [&](const Vector& v) -> const Vector& {
    auto it = labels.find(key_of(v));
    if (it != labels.end()) return it->second;
    check(v);
    return labels.emplace(key_of(v), selection(v) - v).first->second;
  };
  auto score = [&](const Vector& v) {
    auto it = scores.find(key_of(v));
    if (it != scores.end()) return it->second;
    const double sc = opts.score ? opts.score(v) : -label(v).norm();
    scores.emplace(key_of(v), sc);
    return sc;
  };

  // The mesh always covers P; refined cells are replaced by their children
  // and the rest stay, so neighbouring cells may be non-conforming.
  struct Cell {
    Simplex s;
    double residual = 0;  // norm of the min-norm point of the labels
    bool labelled = false;  // 0 lies in the hull of the labels
  };
  auto scan = [&](Cell& cell) {
    const Simplex& s = cell.s;
    std::vector<Vector> ls;
    for (const auto& v : s) {
      ls.push_back(label(v));
      score(v);
    }
    double spread = 0.0;
    for (const auto& a : ls)
      for (const auto& b : ls) spread = std::max(spread, (a - b).norm());
    const MinNormResult mn = min_norm_point(ls);
    cell.residual = mn.point.norm();
    cell.labelled = cell.residual <= 1e-9 * (1.0 + spread);
    if (cell.labelled) {
      Vector c = Vector::Zero(s.front().size());
      for (std::size_t j = 0; j < s.size(); ++j) c += mn.weights(static_cast<Eigen::Index>(j)) * s[j];
      check(c);
    }
  };

  try {
    label(polytope.centroid());
    for (const auto& v : polytope.vertices()) label(v);
    std::vector<Cell> mesh;
    for (auto& s : triangulate(polytope.vertices())) mesh.push_back({std::move(s)});
    for (auto& cell : mesh) scan(cell);
    const std::size_t fan = mesh.front().s.size() <= 1 ? 1 : (std::size_t{1} << (mesh.front().s.size() - 1));

    for (int round = 0; round < opts.max_refine; ++round) {
      res.rounds = round + 1;
      // Completely labelled cells take up to half of the budget, then cells
      // around the vertices of highest score.
      std::vector<char> taken(mesh.size(), 0);
      std::size_t count = 0;
      auto take = [&](std::size_t i) {
        if (!taken[i]) {
          taken[i] = 1;
          ++count;
        }
      };
      std::vector<std::size_t> order(mesh.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return mesh[a].residual < mesh[b].residual; });
      for (std::size_t i : order) {
        if (!mesh[i].labelled || 2 * count * fan >= opts.active_cap) break;
        take(i);
      }
      std::vector<std::pair<double, Vector>> ranked;
      {
        std::map<Key, bool> seen;
        for (const auto& cell : mesh)
          for (const auto& v : cell.s)
            if (seen.emplace(key_of(v), true).second) ranked.emplace_back(score(v), v);
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first > b.first || (a.first == b.first && lex_less(a.second, b.second));
      });
      for (const auto& rv : ranked) {
        if (count * fan >= opts.active_cap) break;
        for (std::size_t i = 0; i < mesh.size(); ++i)
          if (!taken[i] && simplex_contains(mesh[i].s, rv.second)) take(i);
      }

      std::vector<Cell> next;
      std::vector<Cell> fresh;
      for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (!taken[i]) {
          next.push_back(std::move(mesh[i]));
          continue;
        }
        auto children = opts.scheme == Subdivision::edgewise ? edgewise_subdivision(mesh[i].s)
                                                             : barycentric_subdivision(mesh[i].s);
        for (auto& child : children) fresh.push_back({std::move(child)});
      }
      for (auto& cell : fresh) {
        scan(cell);
        next.push_back(std::move(cell));
      }
      mesh = std::move(next);
    }
  } catch (const Found& f) {
    res.point = f.point;
    return res;
  }
  throw Error(Errc::no_fixed_point, "no verified point after " + std::to_string(opts.max_refine) + " refinements");
}

Vector kakutani_fixed_point(const std::function<Vector(const Vector&)>& selection,
                            const std::function<bool(const Vector&)>& membership, const PricePolytope& polytope,
                            double r, int max_refine) {
  if (!(r > 0.0)) throw Error(Errc::invalid_argument, "r must be positive");
  KakutaniOptions opts;
  opts.max_refine = max_refine;
  return kakutani_search(selection, membership, polytope, opts).point;
}

}  // namespace equinox::fixed_point

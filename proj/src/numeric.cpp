#include "equinox/numeric.hpp"

#include "equinox/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace equinox {

NnlsResult nnls(const Matrix& a, const Vector& b, int max_iterations, double tol) {
  const Eigen::Index n = a.cols();
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  const Vector col_norm = a.colwise().norm().transpose();
  const double scale = std::max(1.0, b.norm());
  int iterations = 0;

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (passive[static_cast<std::size_t>(i)]) idx.push_back(i);
    Matrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Vector sp = ap.colPivHouseholderQr().solve(b);
    Vector s = Vector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
    return s;
  };

  while (true) {
    const Vector w = a.transpose() * (b - a * x);
    Eigen::Index entering = -1;
    double best = tol * scale;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (passive[si] || blocked[si] || col_norm(i) == 0.0) continue;
      const double rate = w(i) / col_norm(i);
      if (rate > best) {
        best = rate;
        entering = i;
      }
    }
    if (entering < 0) break;
    passive[static_cast<std::size_t>(entering)] = true;

    bool first = true;
    while (true) {
      if (++iterations > max_iterations)
        throw Error(Errc::projection_failed, "active-set iteration cap reached");
      const Vector s = solve_passive();
      if (first && s(entering) <= 0.0) {
        // Numerically dependent column; the textbook guarantee s_j > 0 failed.
        passive[static_cast<std::size_t>(entering)] = false;
        blocked[static_cast<std::size_t>(entering)] = true;
        break;
      }
      first = false;
      bool feasible = true;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0) feasible = false;
      if (feasible) {
        x = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[static_cast<std::size_t>(i)] && s(i) <= 0.0)
          alpha = std::min(alpha, x(i) / (x(i) - s(i)));
      }
      x += alpha * (s - x);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[static_cast<std::size_t>(i)] && x(i) <= 1e-15 * scale) {
          passive[static_cast<std::size_t>(i)] = false;
          x(i) = 0.0;
        }
      }
    }
  }

  NnlsResult result;
  result.coefficients = x;
  result.fitted = a * x;
  result.residual = (result.fitted - b).norm();
  result.iterations = iterations;
  return result;
}

namespace {

// Minimum-norm point of the affine hull of the selected points: weights sum to 1.
Vector affine_min_norm(const std::vector<Vector>& pts, const std::vector<std::size_t>& sel) {
  const auto k = static_cast<Eigen::Index>(sel.size());
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j)
      kkt(i, j) = pts[sel[static_cast<std::size_t>(i)]].dot(pts[sel[static_cast<std::size_t>(j)]]);
    kkt(i, k) = 1.0;
    kkt(k, i) = 1.0;
  }
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  const Vector sol = kkt.fullPivLu().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormResult min_norm_point(const std::vector<Vector>& points, double tol) {
  if (points.empty()) throw Error(Errc::invalid_argument, "min_norm_point needs points");
  const std::size_t m = points.size();
  double max_sq = 0.0;
  std::size_t start = 0;
  double start_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const double sq = points[i].squaredNorm();
    max_sq = std::max(max_sq, sq);
    if (sq < start_sq) {
      start_sq = sq;
      start = i;
    }
  }

  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Vector w = points[start];

  for (int major = 0; major < 10000; ++major) {
    if (w.squaredNorm() <= tol * tol * std::max(1.0, max_sq)) break;
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = w.dot(points[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (w.squaredNorm() - best <= tol * std::max(1.0, max_sq)) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 1000; ++minor) {
      const Vector alpha = affine_min_norm(points, active);
      bool interior = true;
      for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (alpha(i) <= tol) interior = false;
      if (interior) {
        for (std::size_t i = 0; i < active.size(); ++i) lambda[i] = alpha(static_cast<Eigen::Index>(i));
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < active.size(); ++i) {
        const double ai = alpha(static_cast<Eigen::Index>(i));
        if (ai <= tol && lambda[i] - ai > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - ai));
      }
      for (std::size_t i = 0; i < active.size(); ++i)
        lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha(static_cast<Eigen::Index>(i));
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_lambda;
      for (std::size_t i = 0; i < active.size(); ++i) {
        if (lambda[i] > tol) {
          keep_idx.push_back(active[i]);
          keep_lambda.push_back(lambda[i]);
        }
      }
      if (keep_idx.empty()) {
        keep_idx.push_back(active.back());
        keep_lambda.push_back(1.0);
      }
      active = std::move(keep_idx);
      lambda = std::move(keep_lambda);
    }
    const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
    w = Vector::Zero(points[0].size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      lambda[i] /= total;
      w += lambda[i] * points[active[i]];
    }
  }

  MinNormResult result;
  result.point = w;
  result.weights = Vector::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < active.size(); ++i) result.weights(static_cast<Eigen::Index>(active[i])) = lambda[i];
  return result;
}

namespace {

void orthonormalize(std::vector<Vector>& basis, double tol) {
  std::vector<Vector> out;
  for (Vector v : basis) {
    for (const auto& q : out) v -= v.dot(q) * q;
    const double nv = v.norm();
    if (nv > tol) out.push_back(v / nv);
  }
  basis = std::move(out);
}

using ZeroSet = std::vector<char>;

ZeroSet zero_set(const Vector& ray, const std::vector<Vector>& normals,
                 const std::vector<std::size_t>& processed, double tol) {
  ZeroSet z(processed.size(), 0);
  for (std::size_t i = 0; i < processed.size(); ++i)
    z[i] = std::abs(normals[processed[i]].dot(ray)) <= tol ? 1 : 0;
  return z;
}

bool subset_of(const ZeroSet& a, const ZeroSet& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

}  // namespace

ConeGenerators enumerate_cone(const std::vector<Vector>& normals, int dimension, double tol) {
  std::vector<Vector> a;
  a.reserve(normals.size());
  for (const auto& n : normals) {
    if (n.size() != dimension) throw Error(Errc::invalid_argument, "normal has wrong dimension");
    const double nn = n.norm();
    if (nn > 0.0) a.push_back(n / nn);
  }

  std::vector<Vector> lin;
  for (int i = 0; i < dimension; ++i) lin.push_back(Vector::Unit(dimension, i));
  std::vector<Vector> rays;
  std::vector<std::size_t> processed;

  for (std::size_t k = 0; k < a.size(); ++k) {
    const Vector& ak = a[k];

    std::ptrdiff_t pivot = -1;
    double best = tol;
    for (std::size_t i = 0; i < lin.size(); ++i) {
      const double v = std::abs(ak.dot(lin[i]));
      if (v > best) {
        best = v;
        pivot = static_cast<std::ptrdiff_t>(i);
      }
    }
    if (pivot >= 0) {
      const Vector l = lin[static_cast<std::size_t>(pivot)];
      const double al = ak.dot(l);
      lin.erase(lin.begin() + pivot);
      for (auto& v : lin) v -= (ak.dot(v) / al) * l;
      std::vector<Vector> shifted;
      for (auto r : rays) {
        r -= (ak.dot(r) / al) * l;
        const double nr = r.norm();
        if (nr > tol) shifted.push_back(r / nr);
      }
      rays = std::move(shifted);
      orthonormalize(lin, tol);
      rays.push_back(al > 0 ? Vector(-l) : l);
      processed.push_back(k);
      continue;
    }

    std::vector<double> vals(rays.size());
    std::vector<std::size_t> plus, minus;
    std::vector<Vector> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      vals[i] = ak.dot(rays[i]);
      if (vals[i] > tol)
        plus.push_back(i);
      else if (vals[i] < -tol)
        minus.push_back(i), next.push_back(rays[i]);
      else
        next.push_back(rays[i]);
    }
    if (plus.empty()) {
      processed.push_back(k);
      continue;
    }

    std::vector<ZeroSet> zs;
    zs.reserve(rays.size());
    for (const auto& r : rays) zs.push_back(zero_set(r, a, processed, tol));
    const std::ptrdiff_t needed =
        static_cast<std::ptrdiff_t>(dimension) - static_cast<std::ptrdiff_t>(lin.size()) - 2;

    for (std::size_t p : plus) {
      for (std::size_t m : minus) {
        ZeroSet common(processed.size(), 0);
        std::ptrdiff_t count = 0;
        for (std::size_t i = 0; i < processed.size(); ++i) {
          common[i] = static_cast<char>(zs[p][i] && zs[m][i]);
          count += common[i];
        }
        if (count < needed) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == m) continue;
          if (subset_of(common, zs[r])) adjacent = false;
        }
        if (!adjacent) continue;
        Vector fresh = vals[p] * rays[m] - vals[m] * rays[p];
        const double nf = fresh.norm();
        if (nf > tol) next.push_back(fresh / nf);
      }
    }
    rays = std::move(next);
    processed.push_back(k);
  }

  ConeGenerators out;
  out.lineality = lin;
  for (auto r : rays) {
    for (const auto& l : lin) r -= r.dot(l) * l;
    const double nr = r.norm();
    if (nr <= tol) continue;
    r /= nr;
    bool duplicate = false;
    for (const auto& q : out.rays)
      if (q.dot(r) > 1.0 - 1e-12) duplicate = true;
    if (!duplicate) out.rays.push_back(r);
  }
  return out;
}

Halfspaces hull_facets(const std::vector<Vector>& points, double tol) {
  if (points.empty()) throw Error(Errc::invalid_argument, "hull of no points");
  const auto n = static_cast<int>(points[0].size());
  std::vector<Vector> lifted;
  lifted.reserve(points.size());
  for (const auto& v : points) {
    Vector h(n + 1);
    h.head(n) = v;
    h(n) = 1.0;
    lifted.push_back(h);
  }
  const ConeGenerators gens = enumerate_cone(lifted, n + 1, tol);
  if (!gens.pointed()) throw Error(Errc::invalid_argument, "points do not span a full-dimensional hull");
  Halfspaces out;
  for (const auto& r : gens.rays) {
    const Vector normal = r.head(n);
    const double nn = normal.norm();
    if (nn <= 1e-12) continue;
    out.normals.push_back(normal / nn);
    out.offsets.push_back(-r(n) / nn);
  }
  return out;
}

}  // namespace equinox

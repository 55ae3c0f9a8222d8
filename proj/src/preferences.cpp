#include "equinox/preferences.hpp"

#include "equinox/error.hpp"
#include "equinox/nets.hpp"
#include "equinox/numeric.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace equinox::preferences {

double RotundityModulus::operator()(double eps) const {
  if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
  return mu * eps * eps / (8.0 * (lipschitz + 1.0));
}

namespace {

// Tracks the best point seen, comparing u(x) - u(ref) in a form that stays
// accurate when x is close to ref.
struct Winner {
  const Preference* pref;
  Vector ref;
  Vector grad;  // -2 Q (ref - b)
  Vector point;
  double gain = -std::numeric_limits<double>::infinity();

  Winner(const Preference& p, const Vector& reference)
      : pref(&p), ref(reference), grad(-2.0 * p.q() * (reference - p.bliss_point())) {}

  void offer(const Vector& x) {
    const Vector d = x - ref;
    const double g = grad.dot(d) - d.dot(pref->q() * d);
    if (g > gain || (g == gain && lex_less(x, point))) {
      gain = g;
      point = x;
    }
  }
};

// Maximise u over a closed convex region by successively finer local nets.
// Stage k scans the projections of a grid of pitch 2 eps_k / sqrt(N) on the
// cube of half-width 4 eps_k around the current winner. A winner that moved
// more than half the cube gets a fresh cube at the same resolution.
template <class Region>
Vector refine_maximum(const Preference& pref, const Region& region, const std::vector<Vector>& start,
                      double eps0, const DemandOptions& opts) {
  if (start.empty()) throw Error(Errc::budget_empty, "initial net is empty");
  Winner w(pref, start.front());
  for (const auto& x : start) w.offer(x);
  const double stop = opts.tol / 8.0;
  double eps = eps0 / 2.0;
  const double n = static_cast<double>(w.point.size());
  for (int stage = 0; stage < opts.stage_cap; ++stage) {
    const Vector centre = w.point;
    const Vector half = Vector::Constant(centre.size(), 4.0 * eps);
    Winner local(pref, centre);
    local.offer(centre);
    geometry::visit_grid(centre - half, centre + half, 2.0 * eps / std::sqrt(n) * (1.0 - 1e-9), std::nullopt,
               geometry::kDefaultNetCap, [&](const Vector& g) { local.offer(region.project(g)); });
    const double moved = (local.point - centre).norm();
    w = local;
    if ((local.point - centre).lpNorm<Eigen::Infinity>() > 2.0 * eps) continue;
    if (eps <= stop && moved <= stop) return w.point;
    eps /= 2.0;
  }
  throw Error(Errc::resolution_cap_exceeded, "demand refinement did not settle within the stage cap");
}

bool is_scaled_identity(const Matrix& q) {
  const double s = q(0, 0);
  return (q - s * Matrix::Identity(q.rows(), q.cols())).cwiseAbs().maxCoeff() <= 1e-15 * std::abs(s);
}

void check_price(const Preference& pref, const Vector& p) {
  if (p.size() != pref.dimension()) throw Error(Errc::invalid_argument, "price dimension mismatch");
  if (!p.allFinite() || !(p.norm() > 0.0)) throw Error(Errc::invalid_argument, "price must be finite and nonzero");
}

void check_budget_inhabited(const Preference& pref, const Vector& p, double tol) {
  const Vector unit = p / p.norm();
  const Vector cheapest = pref.consumption_set().minimize_linear(unit);
  if (unit.dot(cheapest) > tol) throw Error(Errc::budget_empty, "no bundle in X is affordable");
}

}  // namespace

Preference::Preference(ConvexBody consumption_set, Vector bliss_point, std::optional<Matrix> q)
    : set_(std::move(consumption_set)), bliss_(std::move(bliss_point)) {
  const auto n = set_.dimension();
  if (bliss_.size() != n || !bliss_.allFinite()) throw Error(Errc::invalid_argument, "bliss point malformed");
  q_ = q ? *q : Matrix::Identity(n, n);
  if (q_.rows() != n || q_.cols() != n || !q_.allFinite()) throw Error(Errc::invalid_argument, "Q must be N x N");
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + q_.cwiseAbs().maxCoeff()))
    throw Error(Errc::invalid_argument, "Q must be symmetric");
  q_ = 0.5 * (q_ + q_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(q_);
  mu_ = es.eigenvalues().minCoeff();
  lambda_max_ = es.eigenvalues().maxCoeff();
  if (!(mu_ > 0.0)) throw Error(Errc::invalid_argument, "Q must be positive definite");
  lipschitz_ = 2.0 * lambda_max_ * (set_.outer_radius() + bliss_.norm());

  if (is_scaled_identity(q_)) {
    best_in_set_ = set_.project(bliss_);
  } else {
    DemandOptions opts;
    opts.tol = 1e-9;
    opts.stage_cap = 80;
    const double eps0 = set_.outer_radius() / 4.0;
    best_in_set_ = refine_maximum(*this, set_, geometry::projected_grid_net(set_, eps0), eps0, opts);
  }
}

double Preference::utility(const Vector& x) const {
  const Vector d = x - bliss_;
  return -d.dot(q_ * d);
}

Preferred prefers(const Preference& pref, const Vector& x, const Vector& x2, double tol) {
  const auto& set = pref.consumption_set();
  if (!set.contains(x) || !set.contains(x2)) throw Error(Errc::outside_consumption_set, "bundle is not in X");
  const double a = pref.utility(x), b = pref.utility(x2);
  if (a > b + tol) return Preferred::first;
  if (b > a + tol) return Preferred::second;
  return Preferred::within_tol;
}

double rotundity_delta(const Preference& pref, double eps) { return pref.rotundity()(eps); }

BudgetSet::BudgetSet(const ConvexBody& set, const Vector& price)
    : set_(set), price_(price), unit_price_(price / price.norm()) {
  if (set_.kind() != geometry::BodyKind::vpolytope) return;
  // Vertices of X n {p . x <= 0} from the homogenised cone over (x, s).
  const auto n = set_.dimension();
  std::vector<Vector> normals;
  const auto& f = set_.facets();
  for (std::size_t i = 0; i < f.normals.size(); ++i) {
    Vector a(n + 1);
    a << f.normals[i], -f.offsets[i];
    normals.push_back(a);
  }
  Vector budget(n + 1);
  budget << unit_price_, 0.0;
  normals.push_back(budget);
  Vector lift = Vector::Zero(n + 1);
  lift(n) = -1.0;
  normals.push_back(lift);
  const ConeGenerators gens = enumerate_cone(normals, static_cast<int>(n + 1));
  for (const auto& r : gens.rays)
    if (r(n) > 1e-12) vertices_.push_back(r.head(n) / r(n));
  if (vertices_.empty()) throw Error(Errc::budget_empty, "budget polytope has no vertices");
}

bool BudgetSet::contains(const Vector& x, double band) const {
  return set_.contains(x, band) && unit_price_.dot(x) <= band;
}

Vector BudgetSet::project(const Vector& y) const {
  switch (set_.kind()) {
    case geometry::BodyKind::box: {
      // Projection onto box n {p . x <= 0} is clamp(y - lambda p) for the
      // smallest lambda >= 0 making it affordable. p . clamp(y - lambda p) is
      // piecewise linear in lambda with kinks where a coordinate hits a bound.
      const Vector& p = unit_price_;
      auto at = [&](double lambda) -> Vector { return (y - lambda * p).cwiseMax(set_.lower()).cwiseMin(set_.upper()); };
      Vector x = at(0.0);
      double f_prev = p.dot(x);
      if (f_prev <= 0.0) return x;
      std::vector<double> kinks;
      for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) == 0.0) continue;
        for (double bound : {set_.lower()(i), set_.upper()(i)}) {
          const double k = (y(i) - bound) / p(i);
          if (k > 0.0) kinks.push_back(k);
        }
      }
      std::sort(kinks.begin(), kinks.end());
      double prev = 0.0;
      for (double k : kinks) {
        const double f = p.dot(at(k));
        if (f <= 0.0) {
          const double lambda = prev + (k - prev) * f_prev / (f_prev - f);
          return at(lambda);
        }
        prev = k;
        f_prev = f;
      }
      return at(prev);
    }
    case geometry::BodyKind::ball:
      return geometry::HalfspaceBall(unit_price_, 0.0, set_.center(), set_.radius()).project(y);
    case geometry::BodyKind::vpolytope: {
      if (contains(y, 0.0)) return y;
      std::vector<Vector> shifted;
      shifted.reserve(vertices_.size());
      for (const auto& v : vertices_) shifted.push_back(v - y);
      const MinNormResult r = min_norm_point(shifted);
      return y + r.point;
    }
  }
  return y;
}

BudgetContext make_budget_context(const Preference& pref, const Vector& p, const DemandOptions& opts) {
  check_price(pref, p);
  check_budget_inhabited(pref, p, opts.tol);
  const Vector unit = p / p.norm();
  if (is_satiated(pref, p)) throw Error(Errc::satiated, "the best bundle in X is strictly inside the budget set");
  const Vector& best = pref.best_in_set();
  const BudgetSet beta(pref.consumption_set(), p);
  BudgetContext ctx;
  ctx.price = p;
  ctx.budget_net = geometry::projected_grid_net(beta, pref.consumption_set().outer_radius() / 4.0, opts.offset);
  ctx.inhabited_witness = pref.consumption_set().minimize_linear(unit);
  ctx.satiation_witness = best;
  return ctx;
}

bool is_satiated(const Preference& pref, const Vector& p) {
  return -p.dot(pref.best_in_set()) / p.norm() > kSatiationMargin;
}

Vector demand(const Preference& pref, const Vector& p, double tol) {
  DemandOptions opts;
  opts.tol = tol;
  return demand(pref, p, opts);
}

Vector demand(const Preference& pref, const Vector& p, const DemandOptions& opts) {
  const BudgetContext ctx = make_budget_context(pref, p, opts);
  const BudgetSet beta(pref.consumption_set(), p);
  return refine_maximum(pref, beta, ctx.budget_net, pref.consumption_set().outer_radius() / 4.0, opts);
}

Vector budget_maximizer(const Preference& pref, const Vector& p, const DemandOptions& opts) {
  check_price(pref, p);
  check_budget_inhabited(pref, p, opts.tol);
  const BudgetSet beta(pref.consumption_set(), p);
  const double eps0 = pref.consumption_set().outer_radius() / 4.0;
  return refine_maximum(pref, beta, geometry::projected_grid_net(beta, eps0, opts.offset), eps0, opts);
}

Vector aggregate_demand(const std::vector<Preference>& prefs, const Vector& p, double tol) {
  if (prefs.empty()) throw Error(Errc::invalid_argument, "no consumers");
  Vector total = Vector::Zero(p.size());
  for (std::size_t i = 0; i < prefs.size(); ++i) {
    try {
      total += demand(prefs[i], p, tol);
    } catch (const Error& e) {
      throw Error(e.code(), "consumer " + std::to_string(i) + ": " + e.detail());
    }
  }
  return total;
}

DemandCheck verify_demand(const Preference& pref, const Vector& p, const Vector& x, double tol) {
  DemandCheck c;
  const auto& set = pref.consumption_set();
  c.in_set = x.size() == p.size() && set.contains(x, 1e-7);
  if (!c.in_set) return c;
  c.budget_value = p.dot(x);
  c.budget = c.budget_value >= -tol * (1.0 + p.norm()) && c.budget_value <= tol * (1.0 + p.norm());
  const BudgetSet beta(set, p);
  const double u = pref.utility(x);
  double gap = -std::numeric_limits<double>::infinity();
  for (const auto& y : geometry::projected_grid_net(beta, set.outer_radius() / 16.0)) gap = std::max(gap, pref.utility(y) - u);
  for (double r : {1e-2, 1e-4}) {
    const Vector half = Vector::Constant(x.size(), r);
    geometry::visit_grid(x - half, x + half, r / 4.0, std::nullopt, geometry::kDefaultNetCap,
                         [&](const Vector& g) { gap = std::max(gap, pref.utility(beta.project(g)) - u); });
  }
  c.utility_gap = gap;
  c.maximal = gap <= tol;
  return c;
}

}  // namespace equinox::preferences

#include "equinox/equilibrium.hpp"

#include "equinox/crossing.hpp"
#include "equinox/error.hpp"
#include "equinox/fixed_point.hpp"
#include "equinox/numeric.hpp"
#include "equinox/price_polytope.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace equinox::equilibrium {

using geometry::ClippedCone;
using geometry::PricePolytope;

Economy::Economy(std::vector<Preference> consumers, FiniteCone production,
                 std::optional<std::vector<Vector>> interior_points)
    : consumers_(std::move(consumers)), production_(std::move(production)),
      interior_points_(std::move(interior_points)) {
  if (consumers_.empty()) throw Error(Errc::invalid_argument, "economy needs at least one consumer");
  for (const auto& c : consumers_)
    if (c.dimension() != dimension()) throw Error(Errc::invalid_argument, "consumer dimension differs from Y");
  if (interior_points_) {
    if (interior_points_->size() != consumers_.size())
      throw Error(Errc::invalid_argument, "need one interior point per consumer");
    for (const auto& x : *interior_points_)
      if (x.size() != dimension() || !x.allFinite()) throw Error(Errc::invalid_argument, "interior point malformed");
  }
}

namespace {

double joint_slack(const ConvexBody& x, const FiniteCone& y, const Vector& p) {
  return std::min(x.interior_radius(p), y.interior_radius(p));
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string fmt_vec(const Vector& v) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ")";
  return os.str();
}

}  // namespace

InteriorWitness interior_point(const ConvexBody& x, const FiniteCone& y, std::uint64_t seed) {
  if (x.dimension() != y.dimension()) throw Error(Errc::invalid_argument, "dimension mismatch");
  const int n = x.dimension();
  Vector central = Vector::Zero(n);
  for (const auto& g : y.generators()) central += g / g.norm();

  std::vector<Vector> starts{x.interior_point()};
  const double reach = x.max_distance_from(x.interior_point());
  if (central.norm() > 1e-12)
    for (double s : {0.25, 0.5, 1.0}) starts.push_back(x.project(x.interior_point() + s * reach * central.normalized()));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  InteriorWitness best{x.interior_point(), joint_slack(x, y, x.interior_point())};
  for (const Vector& s0 : starts) {
    Vector p = s0;
    double fp = joint_slack(x, y, p);
    double step = reach / 2.0;
    for (int it = 0; it < 4000 && step > 1e-9 * reach; ++it) {
      std::vector<Vector> dirs;
      for (int i = 0; i < n; ++i)
        for (double sgn : {1.0, -1.0}) dirs.push_back(sgn * Vector::Unit(n, i));
      for (int k = 0; k < 4 * n; ++k) {
        Vector d(n);
        for (int i = 0; i < n; ++i) d(i) = gauss(rng);
        dirs.push_back(d.normalized());
      }
      bool moved = false;
      for (const auto& d : dirs) {
        const Vector q = p + step * d;
        const double fq = joint_slack(x, y, q);
        if (fq > fp + 1e-15) {
          p = q;
          fp = fq;
          moved = true;
          break;
        }
      }
      if (!moved) step /= 2.0;
    }
    if (fp > best.radius) best = {p, fp};
  }
  if (!(best.radius > 0.0)) throw Error(Errc::no_interior_point, "(X n Y) has no interior point within the search budget");
  return best;
}

ValidationReport validate_economy(const Economy& econ, std::uint64_t seed) {
  ValidationReport rep;
  const FiniteCone& y = econ.production();
  const int n = econ.dimension();

  // Pointedness: Y n R^N_+ = {0}, with Y written by its facet inequalities.
  const ConeGenerators& pg = y.polar_generators();
  std::vector<Vector> normals = pg.rays;
  for (const auto& l : pg.lineality) {
    normals.push_back(l);
    normals.push_back(-l);
  }
  for (int i = 0; i < n; ++i) normals.push_back(-Vector::Unit(n, i));
  const ConeGenerators meet = enumerate_cone(normals, n);
  rep.pointedness_certificate = meet.rays;
  for (const auto& l : meet.lineality) rep.pointedness_certificate.push_back(l);
  rep.pointed = rep.pointedness_certificate.empty();
  if (!rep.pointed) rep.notes.push_back("Y meets the nonnegative orthant in " + fmt_vec(rep.pointedness_certificate.front()));

  rep.interior_ok = true;
  for (std::size_t i = 0; i < econ.consumers().size(); ++i) {
    const ConvexBody& x = econ.consumers()[i].consumption_set();
    std::optional<InteriorWitness> w;
    if (econ.interior_points()) {
      const Vector& given = (*econ.interior_points())[i];
      const double r = joint_slack(x, y, given);
      if (r > 0.0) w = InteriorWitness{given, r};
      else
        rep.notes.push_back("consumer " + std::to_string(i) + ": supplied interior point is not interior to X n Y");
    } else {
      try {
        w = interior_point(x, y, seed + i);
      } catch (const Error& e) {
        rep.notes.push_back("consumer " + std::to_string(i) + ": " + e.what());
      }
    }
    if (!w) rep.interior_ok = false;
    rep.witnesses.push_back(w);
  }
  if (!rep.ok()) return rep;

  // Condition (vi) sampled over a net of P: whenever sum F_i(p) lands in Y,
  // each consumer must have something strictly better than F_i(p) in X_i.
  try {
    const PricePolytope polytope(y, aggregate_interior_point(econ, rep));
    double diam = 0.0;
    for (const auto& a : polytope.vertices())
      for (const auto& b : polytope.vertices()) diam = std::max(diam, (a - b).norm());
    const auto prices = fixed_point::polytope_net(polytope, std::max(diam, 1e-6), 50000);
    for (const auto& p : prices) {
      std::vector<Vector> fs;
      Vector total = Vector::Zero(n);
      bool failed = false;
      for (const auto& c : econ.consumers()) {
        try {
          fs.push_back(preferences::budget_maximizer(c, p, {}));
          total += fs.back();
        } catch (const Error&) {
          failed = true;
          break;
        }
      }
      if (failed) {
        ++rep.nonsatiation_fail;
        continue;
      }
      if (!y.contains(total, 1e-6)) {
        ++rep.nonsatiation_vacuous;
        continue;
      }
      bool all = true;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& c = econ.consumers()[i];
        if (!(c.utility(c.best_in_set()) > c.utility(fs[i]) + 1e-12)) all = false;
      }
      (all ? rep.nonsatiation_pass : rep.nonsatiation_fail)++;
    }
    rep.notes.push_back("nonsatiation checked only on " + std::to_string(prices.size()) + " sampled prices of P");
  } catch (const Error& e) {
    rep.notes.push_back(std::string("nonsatiation sampling skipped: ") + e.what());
  }
  return rep;
}

Vector aggregate_interior_point(const Economy& econ, const ValidationReport& report) {
  Vector xi = Vector::Zero(econ.dimension());
  double first_radius = 0.0;
  for (std::size_t i = 0; i < report.witnesses.size(); ++i) {
    if (!report.witnesses[i]) throw Error(Errc::validation_failed, "consumer " + std::to_string(i) + " has no interior witness");
    xi += report.witnesses[i]->point;
    if (i == 0) first_radius = report.witnesses[i]->radius;
  }
  // Nudge the first witness inside its certified ball so that no coordinate
  // of the sum is (numerically) zero.
  for (Eigen::Index j = 0; j < xi.size(); ++j)
    if (std::abs(xi(j)) <= 1e-9) xi(j) += first_radius / (2.0 * std::sqrt(static_cast<double>(xi.size())));
  return xi;
}

namespace {

struct Constants {
  Vector xi_bar;
  double delta = 0;
  double bound = 0;
  double m = 0;
  double demand_tol = 0;
};

Constants constants_for(const Economy& econ, const PricePolytope& polytope, const Vector& xi_bar, double epsilon) {
  Constants c;
  c.xi_bar = xi_bar;
  c.delta = (epsilon / 2.0) / polytope.max_vertex_norm();
  c.bound = xi_bar.norm();
  for (const auto& pref : econ.consumers()) c.bound += pref.consumption_set().outer_radius();
  c.m = std::min(epsilon / 2.0, c.delta / c.bound);
  c.demand_tol = std::min(1e-6, epsilon / 100.0);
  return c;
}

struct Prepared {
  ValidationReport report;
  Vector xi_bar;
};

Prepared prepare(const Economy& econ, std::uint64_t seed) {
  Prepared out{validate_economy(econ, seed), {}};
  if (!out.report.pointed) throw Error(Errc::validation_failed, "Y meets the nonnegative orthant");
  if (!out.report.interior_ok) throw Error(Errc::validation_failed, "an interior witness is missing");
  out.xi_bar = aggregate_interior_point(econ, out.report);
  return out;
}

// Demand of one consumer at p computed on a dense grid of the bounding box
// plus samples along the budget line, for planar economies.
std::pair<Vector, double> planar_grid_demand(const Preference& pref, const Vector& p, int cells) {
  const auto& set = pref.consumption_set();
  const auto [lo, hi] = set.bounding_box();
  const double pitch = (hi - lo).maxCoeff() / cells;
  Vector best;
  double best_u = -std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& x) {
    if (!set.contains(x, 1e-12) || p.dot(x) > 1e-12 * p.norm()) return;
    const double u = pref.utility(x);
    if (u > best_u) {
      best_u = u;
      best = x;
    }
  };
  for (int i = 0; i <= cells; ++i)
    for (int j = 0; j <= cells; ++j)
      consider(vec({lo(0) + (hi(0) - lo(0)) * i / cells, lo(1) + (hi(1) - lo(1)) * j / cells}));
  const int k = std::abs(p(1)) >= std::abs(p(0)) ? 0 : 1;
  for (int i = 0; i <= 4 * cells; ++i) {
    Vector x(2);
    x(k) = lo(k) + (hi(k) - lo(k)) * i / (4 * cells);
    x(1 - k) = -p(k) * x(k) / p(1 - k);
    consider(x);
  }
  return {best, pitch};
}

}  // namespace

ApproximateEquilibrium solve(const Economy& econ, double epsilon, std::uint64_t seed, int max_refine) {
  SolveOptions o;
  o.epsilon = epsilon;
  o.seed = seed;
  o.max_refine = max_refine;
  return solve(econ, o);
}

ApproximateEquilibrium solve(const Economy& econ, const SolveOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw Error(Errc::invalid_argument, "epsilon must be positive");
  const Prepared prep = prepare(econ, opts.seed);
  const PricePolytope polytope(econ.production(), prep.xi_bar);
  const Constants k = constants_for(econ, polytope, prep.xi_bar, opts.epsilon);
  const ClippedCone working(econ.production(), k.bound);

  const preferences::DemandOptions dopts{k.demand_tol, std::nullopt, 40};
  struct Eval {
    Vector demand;
    geometry::Crossing crossing;
    bool defined;  // no consumer satiated at p
    std::size_t satiated_consumer;
  };
  std::map<std::vector<double>, Eval> memo;
  auto eval = [&](const Vector& p) -> const Eval& {
    std::vector<double> key(p.data(), p.data() + p.size());
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Eval e{Vector::Zero(p.size()), {}, true, 0};
    for (std::size_t i = 0; i < econ.consumers().size(); ++i) {
      const auto& pref = econ.consumers()[i];
      e.demand += preferences::budget_maximizer(pref, p, dopts);
      if (e.defined && preferences::is_satiated(pref, p)) {
        e.defined = false;
        e.satiated_consumer = i;
      }
    }
    e.crossing = geometry::boundary_crossing(working, k.xi_bar, e.demand);
    return memo.emplace(std::move(key), std::move(e)).first->second;
  };

  const fixed_point::GrMap half(polytope, polytope.vertices(), k.m / 2.0);
  auto selection = [&](const Vector& p) { return half.argmax(eval(p).crossing.point).p; };
  auto membership = [&](const Vector& p) {
    const Eval& e = eval(p);
    return e.defined && p.dot(e.crossing.point) > -k.m;
  };
  fixed_point::KakutaniOptions kopts;
  kopts.max_refine = opts.max_refine;
  kopts.score = [&](const Vector& p) { return p.dot(eval(p).crossing.point); };
  Vector p;
  try {
    p = fixed_point::kakutani_search(selection, membership, polytope, kopts).point;
  } catch (const Error& e) {
    // A consumer satiated at every price tried is a violated hypothesis, not
    // a resolution problem.
    if (e.code() != Errc::no_fixed_point || memo.empty()) throw;
    for (const auto& [key, ev] : memo)
      if (ev.defined) throw;
    throw Error(Errc::satiated, "consumer " + std::to_string(memo.begin()->second.satiated_consumer) +
                                    " is satiated at every price tried");
  }

  ApproximateEquilibrium eq;
  eq.price = p;
  eq.xi_bar = k.xi_bar;
  eq.epsilon = opts.epsilon;
  eq.delta = k.delta;
  eq.m_const = k.m;
  eq.demand_tol = k.demand_tol;
  eq.eta = Vector::Zero(p.size());
  for (std::size_t i = 0; i < econ.consumers().size(); ++i) {
    try {
      eq.allocations.push_back(preferences::demand(econ.consumers()[i], p, dopts));
    } catch (const Error& e) {
      throw Error(e.code(), "consumer " + std::to_string(i) + ": " + e.detail());
    }
    eq.eta += eq.allocations.back();
  }
  const auto crossing = geometry::boundary_crossing(working, k.xi_bar, eq.eta);
  eq.zeta = crossing.point;
  eq.t = crossing.t;
  eq.metrics.p_dot_eta = p.dot(eq.eta);
  eq.metrics.dist_eta_to_y = econ.production().distance(eq.eta);
  for (const auto& x : eq.allocations) eq.metrics.budget_residuals.push_back(p.dot(x));

  auto require = [](bool ok, const std::string& clause) {
    if (!ok) throw Error(Errc::certificate_failed, clause);
  };
  const double tol = opts.verify_tol;
  Vector sum = Vector::Zero(p.size());
  for (const auto& x : eq.allocations) sum += x;
  require(sum == eq.eta, "E3: allocations do not sum to eta");
  for (std::size_t i = 0; i < eq.allocations.size(); ++i)
    require(preferences::verify_demand(econ.consumers()[i], p, eq.allocations[i], k.demand_tol).ok(),
            "E1: allocation " + std::to_string(i) + " fails the demand verifier");
  require(std::abs(p.dot(k.xi_bar) + 1.0) <= tol, "normalization: p . xi_bar != -1");
  require(geometry::polar(econ.production()).contains(p, tol), "polar: p is not in the polar of Y");
  require(eq.metrics.p_dot_eta > -opts.epsilon, "AE: p . eta <= -epsilon");
  require(eq.t < k.m, "t: crossing parameter is not below m");
  require(eq.metrics.dist_eta_to_y <= k.delta + tol, "clearing: dist(eta, Y) exceeds delta");
  return eq;
}

bool CheckReport::ok() const {
  for (const auto& c : clauses)
    if (!c.pass) return false;
  return !clauses.empty();
}

const Clause* CheckReport::find(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

CheckReport check_equilibrium(const Economy& econ, const ApproximateEquilibrium& cand, std::uint64_t seed) {
  CheckReport rep;
  auto add = [&](std::string name, bool pass, std::string detail) {
    rep.clauses.push_back({std::move(name), pass, std::move(detail)});
  };
  const int n = econ.dimension();
  const Vector& p = cand.price;
  if (p.size() != n || cand.eta.size() != n || cand.allocations.size() != econ.consumers().size()) {
    add("shape", false, "certificate dimensions do not match the economy");
    return rep;
  }
  const double tol = 1e-7;
  Prepared prep;
  try {
    prep = prepare(econ, seed);
  } catch (const Error& e) {
    add("validation", false, e.what());
    return rep;
  }
  const PricePolytope polytope(econ.production(), prep.xi_bar);
  const Constants k = constants_for(econ, polytope, prep.xi_bar, cand.epsilon);

  const double norm_gap = std::abs(p.dot(k.xi_bar) + 1.0);
  add("normalization", norm_gap <= tol, "|p . xi_bar + 1| = " + num(norm_gap));
  const double viol = geometry::polar(econ.production()).max_violation(p);
  add("polar", viol <= tol, "max p . g / |g| = " + num(viol));

  bool e1 = true;
  std::string e1_detail = "all allocations are demands";
  const double fine = k.demand_tol / 10.0;
  for (std::size_t i = 0; i < econ.consumers().size(); ++i) {
    const auto& pref = econ.consumers()[i];
    const Vector& x = cand.allocations[i];
    std::string why;
    try {
      const Vector again = preferences::demand(pref, p, fine);
      if ((again - x).norm() > 10.0 * k.demand_tol) why = "differs from a fine re-solve by " + num((again - x).norm());
      else if (!preferences::verify_demand(pref, p, x, k.demand_tol).ok())
        why = "fails the demand verifier";
      else if (n == 2) {
        const auto [grid, pitch] = planar_grid_demand(pref, p, 400);
        if ((grid - x).norm() > 2.0 * pitch) why = "grid argmax is " + fmt_vec(grid);
      }
    } catch (const Error& e) {
      why = e.what();
    }
    if (!why.empty()) {
      e1 = false;
      e1_detail = "allocation " + std::to_string(i) + ": " + why;
      break;
    }
  }
  add("E1", e1, e1_detail);

  Vector sum = Vector::Zero(n);
  for (const auto& x : cand.allocations) sum += x;
  const double e3_gap = (sum - cand.eta).norm();
  add("E3", e3_gap <= 1e-12, "||sum xi_i - eta|| = " + num(e3_gap));

  const double pe = p.dot(cand.eta);
  add("AE", pe > -cand.epsilon, "p . eta = " + num(pe));

  try {
    const ClippedCone working(econ.production(), k.bound);
    const auto c = geometry::boundary_crossing(working, k.xi_bar, cand.eta);
    add("t", c.t < k.m, "t = " + num(c.t) + ", m = " + num(k.m));
  } catch (const Error& e) {
    add("t", false, e.what());
  }
  const double dist = econ.production().distance(cand.eta);
  add("clearing", dist <= k.delta + tol, "dist(eta, Y) = " + num(dist) + ", delta = " + num(k.delta));
  return rep;
}

RefineSequence refine_sequence(const Economy& econ, double eps0, int k, std::uint64_t seed) {
  if (k < 0 || k > 12) throw Error(Errc::invalid_argument, "k must be in [0, 12]");
  if (!(eps0 > 0.0)) throw Error(Errc::invalid_argument, "eps0 must be positive");
  RefineSequence seq;
  for (int i = 0; i <= k; ++i) {
    const double eps = std::ldexp(eps0, -i);
    try {
      seq.stages.push_back(solve(econ, eps, seed, 12));
    } catch (const Error& e) {
      seq.error = "stage " + std::to_string(i) + ": " + e.what();
      break;
    }
    if (i > 0) seq.price_steps.push_back((seq.stages[i].price - seq.stages[i - 1].price).norm());
  }
  return seq;
}

}  // namespace equinox::equilibrium

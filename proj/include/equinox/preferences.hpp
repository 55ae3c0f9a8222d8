#pragma once

#include "equinox/convex_body.hpp"
#include "equinox/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace equinox::preferences {

using geometry::ConvexBody;

enum class Preferred { first, second, within_tol };

// delta(eps) = mu eps^2 / (8 (L + 1)).
struct RotundityModulus {
  double mu = 0;
  double lipschitz = 0;

  double operator()(double eps) const;
};

// u(x) = -(x - b)^T Q (x - b) on a compact convex consumption set X.
class Preference {
 public:
  Preference(ConvexBody consumption_set, Vector bliss_point, std::optional<Matrix> q = std::nullopt);

  const ConvexBody& consumption_set() const { return set_; }
  const Vector& bliss_point() const { return bliss_; }
  const Matrix& q() const { return q_; }
  int dimension() const { return set_.dimension(); }
  double strong_concavity() const { return mu_; }
  double largest_eigenvalue() const { return lambda_max_; }
  // Lipschitz bound of u on X: 2 lambda_max (outer_radius + ||b||).
  double lipschitz_bound() const { return lipschitz_; }
  RotundityModulus rotundity() const { return {mu_, lipschitz_}; }

  double utility(const Vector& x) const;
  // The maximiser of u over X (no budget constraint).
  const Vector& best_in_set() const { return best_in_set_; }

 private:
  ConvexBody set_;
  Vector bliss_;
  Matrix q_;
  double mu_ = 0;
  double lambda_max_ = 0;
  double lipschitz_ = 0;
  Vector best_in_set_;
};

Preferred prefers(const Preference& pref, const Vector& x, const Vector& x2, double tol);

double rotundity_delta(const Preference& pref, double eps);

// beta(p) = {x in X : p . x <= 0}.
class BudgetSet {
 public:
  BudgetSet(const ConvexBody& set, const Vector& price);

  const Vector& price() const { return price_; }
  bool contains(const Vector& x, double band = kBoundaryBand) const;
  Vector project(const Vector& y) const;
  std::pair<Vector, Vector> bounding_box() const { return set_.bounding_box(); }

 private:
  ConvexBody set_;
  Vector price_;
  Vector unit_price_;
  std::vector<Vector> vertices_;  // vpolytope sets only
};

struct BudgetContext {
  Vector price;
  std::vector<Vector> budget_net;
  Vector inhabited_witness;
  Vector satiation_witness;
};

inline constexpr double kSatiationMargin = 1e-6;

struct DemandOptions {
  double tol = 1e-6;
  // Shift of the initial grid, as a fraction of its pitch per axis.
  std::optional<Vector> offset;
  int stage_cap = 40;
};

// Throws "budget empty" when no x in X has p . x <= tol and "satiated" when
// the best point of X is strictly inside the budget set.
BudgetContext make_budget_context(const Preference& pref, const Vector& p, const DemandOptions& opts = {});

// True when the best point of X is strictly inside beta(p) by more than the
// satiation margin, so that demand(p) is undefined.
bool is_satiated(const Preference& pref, const Vector& p);

Vector demand(const Preference& pref, const Vector& p, double tol);
Vector demand(const Preference& pref, const Vector& p, const DemandOptions& opts);

// The maximiser of u over beta(p) without the satiation requirement. Equal to
// demand(p) whenever the latter is defined.
Vector budget_maximizer(const Preference& pref, const Vector& p, const DemandOptions& opts = {});

Vector aggregate_demand(const std::vector<Preference>& prefs, const Vector& p, double tol);

struct DemandCheck {
  bool in_set = false;
  bool budget = false;
  bool maximal = false;
  double budget_value = 0;  // p . x
  double utility_gap = 0;   // max over the check net of u(y) - u(x)

  bool ok() const { return in_set && budget && maximal; }
};

// Independent verification of a claimed demand: membership, budget
// exhaustion, and approximate maximality over a budget net plus a fine net
// around x.
DemandCheck verify_demand(const Preference& pref, const Vector& p, const Vector& x, double tol);

}  // namespace equinox::preferences

#pragma once

#include "equinox/cone.hpp"
#include "equinox/convex_body.hpp"
#include "equinox/linalg.hpp"
#include "equinox/preferences.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace equinox::equilibrium {

using geometry::ConvexBody;
using geometry::FiniteCone;
using preferences::Preference;

class Economy {
 public:
  Economy(std::vector<Preference> consumers, FiniteCone production,
          std::optional<std::vector<Vector>> interior_points = std::nullopt);

  int dimension() const { return production_.dimension(); }
  const std::vector<Preference>& consumers() const { return consumers_; }
  const FiniteCone& production() const { return production_; }
  const std::optional<std::vector<Vector>>& interior_points() const { return interior_points_; }

 private:
  std::vector<Preference> consumers_;
  FiniteCone production_;
  std::optional<std::vector<Vector>> interior_points_;
};

struct InteriorWitness {
  Vector point;
  double radius = 0;  // ball(point, radius) lies in X n Y
};

// Finds a point of (X n Y)° with a certified radius by maximising
// min(slack in X, slack in Y). Throws "no interior point found".
InteriorWitness interior_point(const ConvexBody& x, const FiniteCone& y, std::uint64_t seed = 0);

struct ValidationReport {
  bool pointed = false;
  std::vector<Vector> pointedness_certificate;  // nonzero rays of Y n R^N_+, empty when pointed
  bool interior_ok = false;
  std::vector<std::optional<InteriorWitness>> witnesses;
  int nonsatiation_pass = 0;
  int nonsatiation_fail = 0;
  int nonsatiation_vacuous = 0;  // sampled prices where sum F_i(p) is not in Y
  std::vector<std::string> notes;

  bool ok() const { return pointed && interior_ok; }
};

ValidationReport validate_economy(const Economy& econ, std::uint64_t seed = 0);

// xi_bar = sum of the consumers' interior witnesses, nudged so that no
// coordinate is within 1e-9 of zero. Throws "validation failed" if a witness
// is missing.
Vector aggregate_interior_point(const Economy& econ, const ValidationReport& report);

struct Metrics {
  double p_dot_eta = 0;
  double dist_eta_to_y = 0;
  std::vector<double> budget_residuals;  // p . xi_i
};

struct ApproximateEquilibrium {
  Vector price;
  std::vector<Vector> allocations;
  Vector eta;
  Vector zeta;
  Vector xi_bar;
  double t = 0;
  double epsilon = 0;
  double delta = 0;
  double m_const = 0;
  double demand_tol = 0;
  Metrics metrics;
};

struct SolveOptions {
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  int max_refine = 12;
  double verify_tol = 1e-7;
};

ApproximateEquilibrium solve(const Economy& econ, const SolveOptions& opts);
ApproximateEquilibrium solve(const Economy& econ, double epsilon, std::uint64_t seed, int max_refine);

struct Clause {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckReport {
  std::vector<Clause> clauses;

  bool ok() const;
  const Clause* find(const std::string& name) const;
};

CheckReport check_equilibrium(const Economy& econ, const ApproximateEquilibrium& cand, std::uint64_t seed = 0);

struct RefineSequence {
  std::vector<ApproximateEquilibrium> stages;
  std::vector<double> price_steps;  // ||p_n - p_{n-1}|| for n >= 1
  std::optional<std::string> error;  // why the sequence stopped early
};

RefineSequence refine_sequence(const Economy& econ, double eps0, int k, std::uint64_t seed = 0);

}  // namespace equinox::equilibrium

#include "fixtures.hpp"
#include "oracles.hpp"

#include "equinox/cone.hpp"
#include "equinox/convex_body.hpp"
#include "equinox/crossing.hpp"
#include "equinox/equilibrium.hpp"
#include "equinox/error.hpp"
#include "equinox/fixed_point.hpp"
#include "equinox/preferences.hpp"
#include "equinox/price_polytope.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace equinox;

namespace {

// Pinned tolerances and budgets.
constexpr double kAc1PriceTol = 1e-2;
constexpr double kAc1EtaTol = 1e-2;
constexpr double kAc1Epsilon = 0.01;
constexpr double kAc1Seconds = 10.0;
constexpr int kAc2Pairs = 100;
constexpr double kAc2BudgetTol = 1e-6;
constexpr int kAc2GridCells = 1000;
constexpr double kAc2GridPitches = 2.0;
constexpr double kAc2Seconds = 60.0;
constexpr int kAc3Pairs = 1000;
constexpr double kAc3Slack = 1e-9;
constexpr double kAc3Reference = 0.184;
constexpr double kAc3ReferenceTol = 1e-3;
constexpr double kAc3Seconds = 30.0;
constexpr int kAc4Cones = 50;
constexpr int kAc4Points = 200;
constexpr double kAc4Tol = 1e-7;
constexpr int kAc5Cones = 20;
constexpr double kAc5Slack = 1e-9;
constexpr int kAc6Cones = 30;
constexpr double kAc6Slack = 1e-7;
constexpr double kAc7R = 0.1;
constexpr int kAc7Samples = 1000;
constexpr std::uint64_t kAc7Seed = 7;
constexpr int kAc8Polynomials = 20;
constexpr double kAc8Epsilon = 1e-4;
constexpr double kAc9Eps0 = 0.1;
constexpr int kAc9K = 4;
constexpr double kAc9Slack = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

equilibrium::Economy e1_economy() {
  return equilibrium::Economy({fixture::e1_consumer()}, fixture::e1_cone(), std::vector<Vector>{vec({-0.5, 0.3})});
}

// E1 by hand: P has vertices (2,0) and (5,5); at p = (5,5) the budget line is
// x1 + x2 = 0 and the bliss point projects onto it inside the square.
Outcome ac1() {
  const Vector bliss = vec({-0.2, 1.5});
  const Vector xi_bar = vec({-0.5, 0.3});
  const Vector dir = vec({1, 1});
  const Vector p_star = dir * (-1.0 / dir.dot(xi_bar));
  const Vector u = dir.normalized();
  const Vector eta_star = bliss - bliss.dot(u) * u;

  const auto [grid, pitch] = fixture::planar_demand_oracle(fixture::e1_consumer(), p_star, kAc2GridCells);
  if ((grid - eta_star).norm() > kAc2GridPitches * pitch)
    return {false, fmt("hand KKT and grid oracle disagree by %.3g", (grid - eta_star).norm())};

  const auto t0 = Clock::now();
  const auto eq = equilibrium::solve(e1_economy(), kAc1Epsilon, 0, 12);
  const double secs = seconds_since(t0);
  const double dp = (eq.price - p_star).norm();
  const double de = (eq.eta - eta_star).norm();
  const bool ok = dp <= kAc1PriceTol && de <= kAc1EtaTol && eq.metrics.p_dot_eta > -kAc1Epsilon &&
                  eq.metrics.dist_eta_to_y <= eq.delta && secs < kAc1Seconds;
  return {ok, fmt("|p-p*| = %.3g, |eta-eta*| = %.3g, p.eta = %.3g, dist = %.3g <= delta %.3g, %.2f s", dp, de,
                  eq.metrics.p_dot_eta, eq.metrics.dist_eta_to_y, eq.delta, secs)};
}

Outcome ac2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  int budget_bad = 0, grid_bad = 0, grid_checked = 0;
  double worst_budget = 0, worst_grid = 0;
  for (int i = 0; i < kAc2Pairs; ++i) {
    const int n = 2 + i % 2;
    const auto [pref, p] = fixture::random_valid_pair(rng, n, kAc2BudgetTol);
    const Vector f = preferences::demand(pref, p, kAc2BudgetTol);
    const double ratio = std::abs(p.dot(f)) / (1 + p.norm());
    worst_budget = std::max(worst_budget, ratio);
    if (ratio > kAc2BudgetTol || !pref.consumption_set().contains(f, 1e-9)) ++budget_bad;
    if (n == 2) {
      const auto [grid, pitch] = fixture::planar_demand_oracle(pref, p, kAc2GridCells);
      const double gap = (f - grid).norm() / pitch;
      worst_grid = std::max(worst_grid, gap);
      ++grid_checked;
      if (gap > kAc2GridPitches) ++grid_bad;
    }
  }
  const double secs = seconds_since(t0);
  return {budget_bad == 0 && grid_bad == 0 && secs < kAc2Seconds,
          fmt("%d pairs, worst |p.F|/(1+|p|) = %.3g, %d grid checks worst %.2f pitches, %.1f s", kAc2Pairs,
              worst_budget, grid_checked, worst_grid, secs)};
}

// A body containing ball(xi, r) and contained in ball(xi, R): a ball, a box or
// a random polytope with vertices on the outer sphere.
geometry::ConvexBody random_body(std::mt19937_64& rng, int n, const Vector& xi, double R, double r, int kind) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (kind == 0) return geometry::ConvexBody::ball(xi, r + (R - r) * uni(rng));
  if (kind == 1) {
    const double half = r + (R / std::sqrt(double(n)) - r) * uni(rng);
    return geometry::ConvexBody::box(xi - Vector::Constant(n, half), xi + Vector::Constant(n, half));
  }
  for (;;) {
    std::vector<Vector> verts;
    for (int k = 0; k < 6 * n * n; ++k) verts.push_back(xi + oracle::on_sphere(rng, n, R));
    auto body = geometry::ConvexBody::vpolytope(verts);
    const double inner = oracle::cross_polytope_radius(xi, [&](const Vector& y) { return body.contains(y, 1e-12); }, R) /
                         std::sqrt(double(n));
    if (inner >= r) return body;
  }
}

Outcome ac3() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int pairs = 0, violations = 0;
  double worst = -INFINITY;
  for (auto [R, r] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.5}}) {
    for (double delta : {0.05, 0.1, 0.2}) {
      const double phi = geometry::crossing_modulus(R, r, delta);
      for (int i = 0; i < kAc3Pairs; ++i) {
        const int n = 2 + i % 2;
        const Vector xi = oracle::gaussian(rng, n);
        const auto body = random_body(rng, n, xi, R, r, i % 3);
        const Vector a = xi + oracle::on_sphere(rng, n, R);
        // b on the same sphere at distance below delta from a.
        Vector tangent = oracle::gaussian(rng, n);
        const Vector radial = (a - xi) / R;
        tangent -= tangent.dot(radial) * radial;
        tangent.normalize();
        const double chord = delta * uni(rng) * (1 - 1e-12);
        const double angle = 2 * std::asin(chord / (2 * R));
        const Vector b = xi + R * (std::cos(angle) * radial + std::sin(angle) * tangent);
        const Vector ha = geometry::boundary_crossing(body, xi, a).point;
        const Vector hb = geometry::boundary_crossing(body, xi, b).point;
        const double excess = (ha - hb).norm() - phi;
        worst = std::max(worst, excess);
        ++pairs;
        if (!((a - b).norm() < delta) || excess > kAc3Slack) ++violations;
      }
    }
  }
  const double reference = geometry::crossing_modulus(2, 1, 0.1);
  const double secs = seconds_since(t0);
  const bool ok = violations == 0 && std::abs(reference - kAc3Reference) <= kAc3ReferenceTol && secs < kAc3Seconds;
  return {ok, fmt("%d pairs, %d violations, worst |h(a)-h(b)| - phi = %.3g, phi(2,1,0.1) = %.6f, %.1f s", pairs,
                  violations, worst, reference, secs)};
}

// Generators drawn on the half space u . g > 0 give a pointed cone.
std::vector<Vector> random_generators(std::mt19937_64& rng, int n, int count, bool pointed) {
  const Vector axis = oracle::gaussian(rng, n).normalized();
  std::vector<Vector> gens;
  while (static_cast<int>(gens.size()) < count) {
    Vector g = oracle::gaussian(rng, n);
    if (pointed && g.dot(axis) < 0) g = -g;
    if (pointed && g.dot(axis) < 0.2 * g.norm()) continue;
    gens.push_back(g);
  }
  return gens;
}

Outcome ac4() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> extra(0, 3);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  int disagreements = 0, members = 0, total = 0;
  for (int c = 0; c < kAc4Cones; ++c) {
    const int n = 2 + c % 3;
    const int count = std::max(1, n - 1 + extra(rng));
    const auto gens = random_generators(rng, n, count, c % 5 != 0);
    const geometry::FiniteCone cone(gens);
    const auto& pg = cone.polar_generators();
    auto in_bipolar = [&](const Vector& x) {
      for (const auto& d : pg.rays)
        if (x.dot(d) > kAc4Tol) return false;
      for (const auto& l : pg.lineality)
        if (std::abs(x.dot(l)) > kAc4Tol) return false;
      return true;
    };
    for (int i = 0; i < kAc4Points; ++i) {
      Vector x = Vector::Zero(n);
      switch (i % 3) {
        case 0:
          x = oracle::gaussian(rng, n);
          break;
        case 1:  // a combination of some of the generators, often on a face
          for (const auto& g : gens)
            if (weight(rng) < 0.5) x += weight(rng) * g;
          break;
        default:  // pushed out of the cone along a polar ray
          for (const auto& g : gens) x += weight(rng) * g;
          if (!pg.rays.empty()) x += (0.01 + weight(rng)) * pg.rays[i % pg.rays.size()];
          break;
      }
      if (x.norm() > 0) x /= x.norm();
      const bool a = cone.contains(x, kAc4Tol);
      const bool b = in_bipolar(x);
      members += a;
      ++total;
      if (a != b) ++disagreements;
    }
  }
  return {disagreements == 0,
          fmt("%d cones, %d points (%d members), %d disagreements", kAc4Cones, total, members, disagreements)};
}

Outcome ac5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  int bad = 0;
  double worst = -INFINITY;
  for (int c = 0; c < kAc5Cones; ++c) {
    const int n = 2 + c % 3;
    const auto gens = random_generators(rng, n, n + c % 3, true);
    const geometry::FiniteCone cone(gens);
    Vector y = Vector::Zero(n);
    for (const auto& g : gens) y += weight(rng) * g;
    // Certified independently: the cross-polytope of radius rc fits, so the
    // inscribed ball of radius rc / sqrt(N) does.
    const double rc = oracle::cross_polytope_radius(y, [&](const Vector& x) { return cone.contains(x, 1e-12); }, 10.0);
    const double r = rc / std::sqrt(double(n));
    double sup = -INFINITY;
    for (const auto& d : cone.polar_generators().rays) sup = std::max(sup, d.normalized().dot(y));
    const double bound = -r / (2 * std::sqrt(double(n)));
    worst = std::max(worst, sup - bound);
    if (!(r > 0) || sup > bound + kAc5Slack) ++bad;
  }
  return {bad == 0, fmt("%d cones, worst sup - bound = %.3g, %d violations", kAc5Cones, worst, bad)};
}

// Extreme rays of the polar of a full-dimensional cone by brute force: unit
// vectors orthogonal to N - 1 independent generators and nonpositive on all.
std::vector<Vector> brute_polar_rays(const std::vector<Vector>& gens, int n) {
  std::vector<Vector> rays;
  const int m = static_cast<int>(gens.size());
  std::vector<int> pick(n - 1);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n - 1) {
      Matrix a(n - 1, n);
      for (int k = 0; k < n - 1; ++k) a.row(k) = gens[pick[k]].transpose();
      Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
      if (n > 1 && svd.singularValues()(n - 2) < 1e-9) return;
      const Vector d = svd.matrixV().col(n - 1);
      for (double s : {1.0, -1.0}) {
        const Vector cand = s * d;
        bool ok = true;
        for (const auto& g : gens) ok = ok && cand.dot(g) <= 1e-10 * g.norm();
        if (ok) rays.push_back(cand);
      }
      return;
    }
    for (int i = start; i < m; ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return rays;
}

Outcome ac6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> weight(0.2, 1.0);
  int bad = 0, vertices = 0;
  double worst = -INFINITY;
  auto check = [&](const std::vector<Vector>& gens, const Vector& xi_bar) {
    const geometry::PricePolytope poly = geometry::price_polytope(geometry::FiniteCone(gens), xi_bar);
    double m = -INFINITY;
    for (const auto& d : brute_polar_rays(gens, static_cast<int>(xi_bar.size()))) m = std::max(m, d.dot(xi_bar));
    if (!(m < 0)) {
      ++bad;
      return;
    }
    for (const auto& v : poly.vertices()) {
      ++vertices;
      worst = std::max(worst, v.norm() - (-1.0 / m));
      if (v.norm() > -1.0 / m + kAc6Slack) ++bad;
    }
  };
  check(fixture::e1_cone().generators(), vec({-0.5, 0.3}));
  for (int c = 0; c < kAc6Cones; ++c) {
    const int n = 2 + c % 3;
    const auto gens = random_generators(rng, n, n + c % 4, true);
    Vector xi = Vector::Zero(n);
    for (const auto& g : gens) xi += weight(rng) * g;
    check(gens, xi);
  }
  return {bad == 0, fmt("%d polytopes, %d vertices, worst |v| + 1/M = %.3g", kAc6Cones + 1, vertices, worst)};
}

Outcome ac7() {
  const auto poly = geometry::price_polytope(fixture::e1_cone(), vec({-0.5, 0.3}));
  const fixed_point::GrMap map(poly, fixed_point::polytope_net(poly, kAc7R / 2), kAc7R);
  const auto rep = fixed_point::weak_approximability_check(map, kAc7Samples, kAc7Seed);
  return {rep.samples == kAc7Samples && rep.counterexamples == 0,
          fmt("%d samples, %d counterexamples, worst margin %.3g", rep.samples, rep.counterexamples, rep.worst_margin)};
}

Outcome ac8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> coef(0.0, 3.0), slope(0.5, 3.0), root(0.05, 0.95);
  std::uniform_int_distribution<int> degree(1, 7);
  int bad = 0;
  double worst_value = 0, worst_gap = 0;
  for (int i = 0; i < kAc8Polynomials; ++i) {
    // Nonnegative higher coefficients make f increasing with f' >= c1 on [0,1].
    std::vector<double> c(degree(rng) + 1);
    c[1] = slope(rng);
    for (std::size_t k = 2; k < c.size(); ++k) c[k] = coef(rng);
    const double x_star = root(rng);
    auto eval = [&](double x) {
      double acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    c[0] = -(eval(x_star) - c[0]);
    const auto z = fixed_point::approximate_zero(eval, kAc8Epsilon);
    const double reference = oracle::bisect_root(eval, 0.0, 1.0);
    // |f(x)| <= eps with f' >= c1 puts x within eps / c1 of the root.
    const double spacing = kAc8Epsilon / c[1];
    const double gap = std::abs(z.x - reference);
    worst_value = std::max(worst_value, std::abs(eval(z.x)));
    worst_gap = std::max(worst_gap, gap / spacing);
    if (std::abs(eval(z.x)) > kAc8Epsilon || gap > spacing) ++bad;
  }
  return {bad == 0, fmt("%d polynomials, worst |f(x)| = %.3g, worst gap = %.3g of the spacing", kAc8Polynomials,
                        worst_value, worst_gap)};
}

Outcome ac9() {
  const auto seq = equilibrium::refine_sequence(e1_economy(), kAc9Eps0, kAc9K, 0);
  if (seq.error) return {false, "sequence stopped early: " + *seq.error};
  if (seq.stages.size() != static_cast<std::size_t>(kAc9K + 1)) return {false, "wrong number of stages"};
  bool monotone = true;
  std::ostringstream steps;
  for (std::size_t i = 0; i < seq.price_steps.size(); ++i) {
    steps << (i ? ", " : "") << seq.price_steps[i];
    if (i > 0 && seq.price_steps[i] > seq.price_steps[i - 1] + kAc9Slack) monotone = false;
  }
  const double d0 = seq.stages.front().metrics.dist_eta_to_y;
  const double dk = seq.stages.back().metrics.dist_eta_to_y;
  return {monotone && dk <= d0, fmt("steps [%s], dist %.3g -> %.3g", steps.str().c_str(), d0, dk)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 E1 end-to-end", ac1},
      {"AC2 demand budget exhaustion and grid agreement", ac2},
      {"AC3 crossing modulus", ac3},
      {"AC4 polar of the polar", ac4},
      {"AC5 interior ball bound", ac5},
      {"AC6 price vertex norm bound", ac6},
      {"AC7 weak approximability", ac7},
      {"AC8 approximate zero", ac8},
      {"AC9 sweep stability", ac9},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
    std::fflush(stdout);
    failed += !out.pass;
  }
  return failed == 0 ? 0 : 1;
}

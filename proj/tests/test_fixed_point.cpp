#include "fixtures.hpp"
#include "oracles.hpp"

#include "equinox/error.hpp"
#include "equinox/fixed_point.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace equinox;
using namespace equinox::fixed_point;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::invalid_argument;
}

PricePolytope e1_polytope() { return PricePolytope(fixture::e1_cone(), vec({-0.5, 0.3})); }

double volume(const Simplex& s) {
  const auto d = static_cast<Eigen::Index>(s.size()) - 1;
  Matrix m(s.front().size(), d);
  for (Eigen::Index j = 0; j < d; ++j) m.col(j) = s[static_cast<std::size_t>(j) + 1] - s[0];
  double fact = 1.0;
  for (Eigen::Index j = 2; j <= d; ++j) fact *= static_cast<double>(j);
  return std::sqrt(std::abs((m.transpose() * m).determinant())) / fact;
}

double diameter(const Simplex& s) {
  double out = 0.0;
  for (const auto& a : s)
    for (const auto& b : s) out = std::max(out, (a - b).norm());
  return out;
}

}  // namespace

TEST(ApproximateZero, Linear) {
  const ZeroResult z = approximate_zero([](double x) { return 2.0 * x - 1.0; }, 1e-3);
  EXPECT_DOUBLE_EQ(z.x, 0.5);
  EXPECT_DOUBLE_EQ(z.value, 0.0);
}

TEST(ApproximateZero, CubicMatchesBisection) {
  auto f = [](double x) { return 2.0 * x * x * x - 1.0; };
  const double eps = 1e-3;
  const ZeroResult z = approximate_zero(f, eps);
  const double root = oracle::bisect_root(f, 0.0, 1.0, 1e-15);
  EXPECT_NEAR(root, std::cbrt(0.5), 1e-12);
  EXPECT_LE(std::abs(f(z.x)), eps);
  // f' >= 0 everywhere and f' = 6x^2 >= 3 near the root, so |f| <= eps keeps x within eps/3.
  EXPECT_NEAR(z.x, root, eps / 3.0 + 1.0 / static_cast<double>(z.grid));
}

TEST(ApproximateZero, OscillatingLandsOnACrossing) {
  // sin on [0, 9] squeezed into [0, 1]: three crossings of 0.3.
  auto f = [](double x) { return std::sin(9.0 * x) - 0.3; };
  const double eps = 1e-4;
  const ZeroResult z = approximate_zero(f, eps);
  EXPECT_LE(std::abs(f(z.x)), eps);
  std::vector<double> crossings;
  const long n = 1'000'000;
  for (long i = 0; i < n; ++i) {
    const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
    if ((f(a) < 0) == (f(b) < 0)) continue;
    if (f(a) < 0)
      crossings.push_back(oracle::bisect_root(f, a, b, 1e-15));
    else
      crossings.push_back(oracle::bisect_root([&](double x) { return -f(x); }, a, b, 1e-15));
  }
  ASSERT_EQ(crossings.size(), 3u);
  double nearest = 1.0;
  for (double c : crossings) nearest = std::min(nearest, std::abs(c - z.x));
  // |f'| >= 9 cos(asin 0.3) > 8.5 at every crossing.
  EXPECT_LE(nearest, eps / 8.0);
}

TEST(ApproximateZero, SuppliedGrid) {
  const ZeroResult z = approximate_zero([](double x) { return x - 0.25; }, 1e-2, 1000);
  EXPECT_EQ(z.grid, 1000);
  EXPECT_FALSE(z.modulus_estimated);
  EXPECT_LE(std::abs(z.x - 0.25), 1e-2);
}

TEST(ApproximateZero, BracketInvalid) {
  EXPECT_EQ(code_of([] { approximate_zero([](double x) { return x + 1.0; }, 1e-3); }), Errc::bracket_invalid);
  EXPECT_EQ(code_of([] { approximate_zero([](double x) { return -1.0 - x; }, 1e-3); }), Errc::bracket_invalid);
}

TEST(Triangulate, SquareAndCube) {
  const std::vector<Vector> square{vec({0, 0}), vec({1, 0}), vec({1, 1}), vec({0, 1})};
  const auto tris = triangulate(square);
  EXPECT_EQ(tris.size(), 4u);
  double area = 0.0;
  for (const auto& t : tris) area += volume(t);
  EXPECT_NEAR(area, 1.0, 1e-12);

  std::vector<Vector> cube;
  for (int i = 0; i < 8; ++i) cube.push_back(vec({double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)}));
  const auto tets = triangulate(cube);
  EXPECT_EQ(tets.size(), 24u);
  double vol = 0.0;
  for (const auto& t : tets) vol += volume(t);
  EXPECT_NEAR(vol, 1.0, 1e-12);
}

TEST(Triangulate, SegmentInThePlane) {
  const auto segs = triangulate({vec({2, 0}), vec({5, 5}), vec({3.5, 2.5})});
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_NEAR(volume(segs.front()), std::sqrt(34.0), 1e-12);
}

TEST(Subdivision, BarycentricAndEdgewise) {
  for (int d = 1; d <= 4; ++d) {
    Simplex s{Vector::Zero(d)};
    for (int i = 0; i < d; ++i) s.push_back(static_cast<double>(i + 1) * Vector::Unit(d, i) + 0.3 * Vector::Ones(d));
    const double vol = volume(s);

    const auto bary = barycentric_subdivision(s);
    std::size_t fact = 1;
    for (int i = 2; i <= d + 1; ++i) fact *= static_cast<std::size_t>(i);
    EXPECT_EQ(bary.size(), fact);
    double sum = 0.0;
    for (const auto& c : bary) sum += volume(c);
    EXPECT_NEAR(sum, vol, 1e-10 * vol);

    const auto edge = edgewise_subdivision(s);
    EXPECT_EQ(edge.size(), std::size_t{1} << d);
    sum = 0.0;
    for (const auto& c : edge) sum += volume(c);
    EXPECT_NEAR(sum, vol, 1e-10 * vol);

    // After k levels every vertex difference is 2^-k times a sum of at most
    // d consecutive-edge vectors, so diameters shrink like d 2^-k.
    std::vector<Simplex> level{s};
    for (int k = 1; k <= 4; ++k) {
      std::vector<Simplex> next;
      for (const auto& c : level)
        for (auto& g : edgewise_subdivision(c)) next.push_back(std::move(g));
      level = std::move(next);
      double worst = 0.0;
      for (const auto& c : level) worst = std::max(worst, diameter(c));
      EXPECT_LE(worst, d * diameter(s) / std::pow(2.0, k) + 1e-12);
    }
  }
}

TEST(PolytopeNet, CoversRandomPoints) {
  const PricePolytope p(geometry::FiniteCone({vec({-1, 0.2, 0.1}), vec({0.1, -1, 0.2}), vec({0.2, 0.1, -1}),
                                              vec({-1, -1, 0.5})}),
                        vec({-0.6, -0.6, -0.6}));
  const double eps = 0.3;
  const auto net = polytope_net(p, eps);
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> w(1.0);
  for (int trial = 0; trial < 300; ++trial) {
    Vector x = Vector::Zero(3);
    double total = 0.0;
    for (const auto& v : p.vertices()) {
      const double a = w(rng);
      x += a * v;
      total += a;
    }
    x /= total;
    double best = 1e9;
    for (const auto& q : net) best = std::min(best, (q - x).norm());
    EXPECT_LE(best, eps);
  }
  for (const auto& q : net) EXPECT_TRUE(p.contains(q));
}

TEST(GrMap, E1Examples) {
  const PricePolytope p = e1_polytope();
  const GrMap map(p, p.vertices(), 0.01);
  const Vector z = vec({-0.85, 0.85});
  const Vector s = g_r_select(map, z);
  EXPECT_TRUE(s.isApprox(vec({5, 5})));
  EXPECT_NEAR(s.dot(z), 0.0, 1e-12);

  // Every price is normalized to p . xi = -1.
  const Vector xi = vec({-0.5, 0.3});
  EXPECT_TRUE(g_r_select(map.with_r(2.0), xi).isApprox(vec({2, 0})));
  EXPECT_EQ(code_of([&] { g_r_select(map.with_r(0.5), xi); }), Errc::gr_empty);

  const GrMap::Best zero = map.argmax(Vector::Zero(2));
  EXPECT_EQ(zero.value, 0.0);
  EXPECT_TRUE(zero.p.isApprox(vec({2, 0})));
}

TEST(GrMap, Membership) {
  const PricePolytope p = e1_polytope();
  const GrMap map(p, p.vertices(), 0.01);
  const Vector z = vec({-0.85, 0.85});
  EXPECT_TRUE(g_r_membership(map, z, vec({5, 5})));
  EXPECT_FALSE(g_r_membership(map.with_r(1.0), z, vec({2, 0})));
  EXPECT_TRUE(g_r_membership(map, Vector::Zero(2), vec({3.5, 2.5})));
  EXPECT_EQ(code_of([&] { g_r_membership(map, z, vec({1, 1})); }), Errc::not_a_price);
  EXPECT_THROW(GrMap(p, {vec({1, 1})}, 0.1), Error);
  EXPECT_THROW(GrMap(p, p.vertices(), 0.0), Error);
}

TEST(GrMap, MembershipIsNestedInR) {
  const PricePolytope p = e1_polytope();
  const auto net = polytope_net(p, 0.5);
  const GrMap map(p, net, 0.05);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Vector z = oracle::gaussian(rng, 2);
    const Vector& q = net[static_cast<std::size_t>(trial) % net.size()];
    if (g_r_membership(map, z, q)) {
      for (double r : {0.06, 0.5, 3.0}) EXPECT_TRUE(g_r_membership(map.with_r(r), z, q));
    }
  }
}

TEST(WeakApproximability, E1NoCounterexamples) {
  const PricePolytope p = e1_polytope();
  const GrMap map(p, polytope_net(p, 0.05), 0.1);
  const WeakApproxReport rep = weak_approximability_check(map, 1000, 7);
  EXPECT_EQ(rep.samples, 1000);
  EXPECT_EQ(rep.counterexamples, 0);
  EXPECT_GT(rep.worst_margin, -1e-9);

  const WeakApproxReport huge = weak_approximability_check(map.with_r(1e6), 200, 7);
  EXPECT_EQ(huge.counterexamples, 0);
}

TEST(WeakApproximability, DiagnosticModeCounts) {
  const PricePolytope p = e1_polytope();
  const GrMap map(p, polytope_net(p, 0.05), 0.1);
  const WeakApproxReport rep = weak_approximability_check(map, 300, 7, 10.0);
  EXPECT_EQ(rep.samples, 300);
  EXPECT_GE(rep.counterexamples, 0);
  EXPECT_LE(rep.counterexamples, rep.samples);
}

TEST(Kakutani, IdentityReturnsCentroid) {
  const PricePolytope p = e1_polytope();
  const Vector x = kakutani_fixed_point([](const Vector& v) { return v; }, [](const Vector&) { return true; }, p, 0.1, 12);
  EXPECT_TRUE(x.isApprox(p.centroid()));
}

TEST(Kakutani, ConstantSelection) {
  const PricePolytope p(geometry::FiniteCone({vec({-1, 0.2, 0.1}), vec({0.1, -1, 0.2}), vec({0.2, 0.1, -1})}),
                        vec({-0.6, -0.6, -0.6}));
  const Vector c = 0.2 * p.vertices()[0] + 0.5 * p.vertices()[1] + 0.3 * p.vertices()[2];
  const double resolution = 1e-3;
  const KakutaniResult res = kakutani_search([&](const Vector&) { return c; },
                                             [&](const Vector& v) { return (v - c).norm() < resolution; }, p);
  EXPECT_LT((res.point - c).norm(), resolution);
  EXPECT_TRUE(p.contains(res.point));
}

TEST(Kakutani, Deterministic) {
  const PricePolytope p = e1_polytope();
  const Vector c = vec({4.1, 3.5});
  auto run = [&] {
    return kakutani_search([&](const Vector&) { return c; }, [&](const Vector& v) { return (v - c).norm() < 1e-2; }, p);
  };
  const KakutaniResult a = run(), b = run();
  EXPECT_EQ(a.point, b.point);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Kakutani, ExhaustedRefinement) {
  const PricePolytope p = e1_polytope();
  EXPECT_EQ(code_of([&] {
              kakutani_fixed_point([](const Vector& v) { return v; }, [](const Vector&) { return false; }, p, 0.1, 3);
            }),
            Errc::no_fixed_point);
  EXPECT_EQ(code_of([&] {
              kakutani_fixed_point([](const Vector& v) { return v; }, [](const Vector&) { return true; }, p, 0.0, 3);
            }),
            Errc::invalid_argument);
}

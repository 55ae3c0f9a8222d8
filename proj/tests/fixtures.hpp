#pragma once

#include "oracles.hpp"

#include "equinox/cone.hpp"
#include "equinox/error.hpp"
#include "equinox/preferences.hpp"

#include <optional>
#include <random>

namespace fixture {

using equinox::Matrix;
using equinox::Vector;
using equinox::geometry::ConvexBody;
using equinox::preferences::Preference;

// A box containing the origin, a bliss point anywhere, and a well
// conditioned positive definite Q.
inline Preference random_consumer(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> lo(-2.0, -0.5), hi(0.5, 2.0), b(-3.0, 3.0);
  Vector l(n), h(n), bliss(n);
  for (int i = 0; i < n; ++i) {
    l(i) = lo(rng);
    h(i) = hi(rng);
    bliss(i) = b(rng);
  }
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) a.col(i) = oracle::gaussian(rng, n);
  const Matrix q = 0.25 * a.transpose() * a + Matrix::Identity(n, n);
  return Preference(ConvexBody::box(l, h), bliss, q);
}

struct PricedConsumer {
  Preference pref;
  Vector price;
};

// Draws consumers and prices until demand is defined (neither satiated nor
// with an empty budget).
inline PricedConsumer random_valid_pair(std::mt19937_64& rng, int n, double tol) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Preference pref = random_consumer(rng, n);
    const Vector p = 3.0 * oracle::gaussian(rng, n);
    try {
      equinox::preferences::make_budget_context(pref, p, {tol, std::nullopt, 40});
      return {pref, p};
    } catch (const equinox::Error&) {
    }
  }
  throw std::runtime_error("could not draw a valid consumer");
}

inline equinox::geometry::FiniteCone e1_cone() {
  return equinox::geometry::FiniteCone({equinox::vec({-1, 1}), equinox::vec({0, -1}), equinox::vec({-1, 0})});
}

inline Preference e1_consumer() {
  return Preference(ConvexBody::box(equinox::vec({-1, -1}), equinox::vec({1, 1})), equinox::vec({-0.2, 1.5}));
}

// Dense-grid argmax of u over the budget set of a planar box consumer, with
// extra samples on the budget line. Returns the argmax and the grid pitch.
inline std::pair<Vector, double> planar_demand_oracle(const Preference& pref, const Vector& p, int cells = 1000) {
  const auto& set = pref.consumption_set();
  const Vector lo = set.lower(), hi = set.upper();
  const double pitch = (hi - lo).maxCoeff() / cells;
  const auto extra = oracle::budget_line_samples(p, lo, hi, 2 * cells);
  const Vector best = oracle::grid_argmax(
      lo, hi, cells,
      [&](const Vector& x) {
        return p.dot(x) <= 1e-12 * p.norm() && (x.array() >= lo.array() - 1e-12).all() &&
               (x.array() <= hi.array() + 1e-12).all();
      },
      [&](const Vector& x) {
        const Vector d = x - pref.bliss_point();
        return -d.dot(pref.q() * d);
      },
      extra);
  return {best, pitch};
}

}  // namespace fixture

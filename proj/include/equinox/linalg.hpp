#pragma once

#include <Eigen/Dense>

#include <initializer_list>
#include <span>
#include <vector>

namespace equinox {

// Commodity-space vectors. Dimension is the number of commodities N.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// |constraint| <= kBoundaryBand counts as "on the boundary".
inline constexpr double kBoundaryBand = 1e-9;

// Dimension cap for vertex/facet enumeration.
inline constexpr int kMaxEnumerationDimension = 6;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline Vector vec(std::span<const double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

inline std::vector<double> to_std(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Lexicographic order on coordinates; used for deterministic tie-breaking.
inline bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

// Columns of the returned matrix are the given vectors.
inline Matrix as_columns(const std::vector<Vector>& vs, Eigen::Index rows) {
  Matrix m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

}  // namespace equinox

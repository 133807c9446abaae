#pragma once

#include <cmath>

namespace griffith {

/// Point in the reference configuration; also used for unit vectors
/// (directions, crack normals). y is 0 in one-dimensional problems.
struct Vec {
  double x = 0.0;
  double y = 0.0;

  friend Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec operator*(double s, Vec a) { return {s * a.x, s * a.y}; }
  friend Vec operator-(Vec a) { return {-a.x, -a.y}; }
};

inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec a) { return std::sqrt(dot(a, a)); }

inline Vec normalized(Vec a) {
  const double n = norm(a);
  return (n > 0.0) ? Vec{a.x / n, a.y / n} : Vec{0.0, 0.0};
}

using Point = Vec;

}  // namespace griffith

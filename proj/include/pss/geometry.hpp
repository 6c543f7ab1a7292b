#pragma once

#include <array>
#include <cmath>

namespace pss {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

using Triangle = std::array<Point, 3>;
using Barycentric = std::array<double, 3>;

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

constexpr double signed_area(Point a, Point b, Point c) { return 0.5 * cross(b - a, c - a); }
constexpr double signed_area(const Triangle& t) { return signed_area(t[0], t[1], t[2]); }

constexpr Point centroid(const Triangle& t) {
  return {(t[0].x + t[1].x + t[2].x) / 3.0, (t[0].y + t[1].y + t[2].y) / 3.0};
}

/// Center of the inscribed circle: vertices weighted by the opposite side lengths.
inline Point incenter(const Triangle& t) {
  const double a = distance(t[1], t[2]);
  const double b = distance(t[2], t[0]);
  const double c = distance(t[0], t[1]);
  const double s = a + b + c;
  return (a * t[0] + b * t[1] + c * t[2]) / s;
}

/// Barycentric coordinates of p with respect to t (t need not be CCW).
inline Barycentric barycentric(const Triangle& t, Point p) {
  const double area = signed_area(t);
  return {signed_area(p, t[1], t[2]) / area, signed_area(t[0], p, t[2]) / area,
          signed_area(t[0], t[1], p) / area};
}

/// Barycentric coordinates of a direction vector; they sum to zero.
inline Barycentric barycentric_direction(const Triangle& t, Point d) {
  const Barycentric at_origin = barycentric(t, t[0]);
  const Barycentric shifted = barycentric(t, t[0] + d);
  return {shifted[0] - at_origin[0], shifted[1] - at_origin[1], shifted[2] - at_origin[2]};
}

/// Gradients of the three barycentric coordinate functions.
inline std::array<Point, 3> barycentric_gradients(const Triangle& t) {
  const double twice_area = 2.0 * signed_area(t);
  std::array<Point, 3> g;
  for (int m = 0; m < 3; ++m) {
    const Point a = t[(m + 1) % 3];
    const Point b = t[(m + 2) % 3];
    g[m] = Point{a.y - b.y, b.x - a.x} / twice_area;
  }
  return g;
}

inline Point from_barycentric(const Triangle& t, const Barycentric& l) {
  return l[0] * t[0] + l[1] * t[1] + l[2] * t[2];
}

/// Distance from p to the closed segment [a, b].
inline double distance_to_segment(Point p, Point a, Point b) {
  const Point d = b - a;
  const double len2 = dot(d, d);
  double s = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  s = s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
  return distance(p, a + s * d);
}

}  // namespace pss

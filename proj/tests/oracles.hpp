#pragma once

// independent closed-form and brute-force oracles used by the tests; nothing here
// calls into the flow/lens implementation paths being checked

#include <cmath>
#include <optional>

#include "lensray/core.hpp"

namespace oracles {

using lensray::Vec2;

// chord of the unit circle entered at boundary point angle phi0 with angle alpha
// from the inward normal: length and exit point
struct Chord {
  double length;
  Vec2 exit;
  double exit_angle_from_normal;
};

inline Chord unit_disk_chord(double phi0, double alpha, double radius = 1.0) {
  // entry at R(cos, sin), inward normal -r_hat; chord length 2 R cos(alpha)
  Chord c;
  c.length = 2.0 * radius * std::cos(alpha);
  Vec2 entry{radius * std::cos(phi0), radius * std::sin(phi0)};
  Vec2 nrm = entry * (-1.0 / radius);
  Vec2 tng = nrm.perp() * (-1.0);  // so that (nrm, tng) is right-handed with CCW boundary
  // direction = cos(a) n + sin(a) t with t the CCW boundary tangent
  Vec2 tcc{-std::sin(phi0), std::cos(phi0)};
  Vec2 dir = nrm * std::cos(alpha) + tcc * std::sin(alpha);
  c.exit = entry + dir * c.length;
  (void)tng;
  c.exit_angle_from_normal = alpha;
  return c;
}

// first intersection of the ray p + t d (t > 0) with the circle |q - c| = r
inline std::optional<double> ray_circle_first_hit(Vec2 p, Vec2 d, Vec2 c, double r) {
  Vec2 w = p - c;
  double b = w.dot(d);
  double q = w.norm2() - r * r;
  double disc = b * b - q;
  if (disc < 0) return std::nullopt;
  double s = std::sqrt(disc);
  double t1 = -b - s, t2 = -b + s;
  if (t1 > 1e-12) return t1;
  if (t2 > 1e-12) return t2;
  return std::nullopt;
}

// distance from line through p with direction d (unit) to point c
inline double line_point_distance(Vec2 p, Vec2 d, Vec2 c) {
  return std::abs((c - p).cross(d));
}

// taut-string length between two points around a circular obstacle (center c, radius a):
// both tangent segments plus the wrapped arc; valid when the straight segment crosses
// the circle
inline double taut_string_length(Vec2 A, Vec2 B, Vec2 c, double a) {
  double da = (A - c).norm(), db = (B - c).norm();
  double la = std::sqrt(da * da - a * a), lb = std::sqrt(db * db - a * a);
  double angA = std::acos(a / da), angB = std::acos(a / db);
  double between = std::acos(std::clamp((A - c).normalized().dot((B - c).normalized()),
                                        -1.0, 1.0));
  double arc = between - angA - angB;
  if (arc < 0) arc = 0;  // straight segment clears the circle
  return la + lb + a * arc;
}

// dyadic partition sums for the boundary metric recovery: unit-circle arc of angle phi
inline double disk_partition_sum(double phi, int depth) {
  double n = std::pow(2.0, depth);
  return n * 2.0 * std::sin(phi / (2.0 * n));
}

}  // namespace oracles

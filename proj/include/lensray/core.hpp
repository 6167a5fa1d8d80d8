#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lensray {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2() = default;
  Vec2(double xx, double yy) : x(xx), y(yy) {}
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {x * a, y * a}; }
  Vec2 operator/(double a) const { return {x / a, y / a}; }
  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double norm2() const { return x * x + y * y; }
  Vec2 normalized() const { double n = norm(); return {x / n, y / n}; }
  // rotation by +pi/2
  Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double a, const Vec2& v) { return v * a; }

// phase point on SM in chart coordinates, direction stored as angle
struct UnitTangent {
  double x = 0.0, y = 0.0, theta = 0.0;
  UnitTangent() = default;
  UnitTangent(double xx, double yy, double th) : x(xx), y(yy), theta(th) {}
  UnitTangent(const Vec2& p, double th) : x(p.x), y(p.y), theta(th) {}
  Vec2 pos() const { return {x, y}; }
  Vec2 dir() const { return {std::cos(theta), std::sin(theta)}; }
};

// wrap to [0, 2*pi)
inline double wrap_angle(double th) {
  th = std::fmod(th, kTwoPi);
  if (th < 0) th += kTwoPi;
  return th;
}

// wrap to (-pi, pi]
inline double wrap_angle_signed(double th) {
  th = std::fmod(th, kTwoPi);
  if (th <= -kPi) th += kTwoPi;
  if (th > kPi) th -= kTwoPi;
  return th;
}

inline UnitTangent reverse(const UnitTangent& y) {
  return {y.x, y.y, wrap_angle(y.theta + kPi)};
}

// wrapped distance on a circle of circumference L
inline double wrap_dist(double a, double b, double L) {
  double d = std::fmod(std::abs(a - b), L);
  return std::min(d, L - d);
}

// Brent root finder on [a,b] with f(a)*f(b) <= 0
inline double brent_root(const std::function<double(double)>& f, double a, double b,
                         double fa, double fb, double xtol, double ftol,
                         int max_iter = 200) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  if (fa * fb > 0) throw std::invalid_argument("brent_root: no bracket");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
    double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || std::abs(fb) <= ftol) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d; d = p / q;
      } else {
        d = xm; e = d;
      }
    } else {
      d = xm; e = d;
    }
    a = b; fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
  }
  return b;
}

struct BBox {
  Vec2 lo, hi;
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diag() const { return (hi - lo).norm(); }
  bool contains(const Vec2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  BBox expanded(double m) const { return {{lo.x - m, lo.y - m}, {hi.x + m, hi.y + m}}; }
};

}  // namespace lensray

#pragma once

#include <functional>
#include <optional>

#include "lensray/core.hpp"

namespace lensray {

// 2D Riemannian metric g = e^{2 lambda} (dx^2 + dy^2) on an ambient chart.
// Fields are supplied analytically per scenario (closures with exact gradients).
struct ConformalMetric {
  std::function<double(Vec2)> lambda;
  std::function<Vec2(Vec2)> grad_lambda;
  std::function<double(Vec2)> laplacian_lambda;
  std::optional<double> period_x;          // chart period for cylinder scenarios
  std::function<bool(Vec2)> chart_ok;      // ambient chart membership (margin included)

  double conf(const Vec2& p) const { return std::exp(lambda(p)); }

  void require_chart(const Vec2& p) const {
    if (chart_ok && !chart_ok(p))
      throw std::domain_error("ConformalMetric: point outside ambient chart");
  }

  // g-length of a euclidean vector at p
  double glen(const Vec2& p, const Vec2& v) const { return conf(p) * v.norm(); }
};

inline ConformalMetric flat_metric() {
  ConformalMetric m;
  m.lambda = [](Vec2) { return 0.0; };
  m.grad_lambda = [](Vec2) { return Vec2{0.0, 0.0}; };
  m.laplacian_lambda = [](Vec2) { return 0.0; };
  m.chart_ok = [](Vec2) { return true; };
  return m;
}

// Gaussian curvature K = -e^{-2 lambda} Lap(lambda)
inline double curvature(const ConformalMetric& m, const Vec2& p) {
  m.require_chart(p);
  return -std::exp(-2.0 * m.lambda(p)) * m.laplacian_lambda(p);
}

// unit-speed geodesic equations in (x, y, theta):
//   x'     = e^{-lambda} cos(theta)
//   y'     = e^{-lambda} sin(theta)
//   theta' = e^{-lambda} (-lambda_x sin(theta) + lambda_y cos(theta))
// time is g-arclength along the trajectory.
inline std::array<double, 3> geodesic_rhs(const ConformalMetric& m, const UnitTangent& y) {
  Vec2 p = y.pos();
  m.require_chart(p);
  double el = std::exp(-m.lambda(p));
  Vec2 gl = m.grad_lambda(p);
  double c = std::cos(y.theta), s = std::sin(y.theta);
  return {el * c, el * s, el * (-gl.x * s + gl.y * c)};
}

// Christoffel symbols of g = e^{2 lambda} delta:
//   Gamma^x = [ lx  ly ; ly -lx ],  Gamma^y = [ -ly lx ; lx ly ]  (indexed by lower pair)
struct Christoffel {
  double lx, ly;
  // Gamma^k_{ij}, indices 0 = x, 1 = y
  double operator()(int k, int i, int j) const {
    auto dl = [&](int a) { return a == 0 ? lx : ly; };
    double v = 0.0;
    if (j == k) v += dl(i);
    if (i == k) v += dl(j);
    if (i == j) v -= dl(k);
    return v;
  }
};

inline Christoffel christoffel(const ConformalMetric& m, const Vec2& p) {
  Vec2 gl = m.grad_lambda(p);
  return {gl.x, gl.y};
}

}  // namespace lensray

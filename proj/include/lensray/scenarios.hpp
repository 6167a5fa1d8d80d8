#pragma once

#include <map>
#include <memory>
#include <string>

#include "lensray/domain.hpp"
#include "lensray/metric.hpp"

namespace lensray {

struct DeclaredFacts {
  bool simply_connected = true;
  bool conjugate_point_free = true;
  bool non_trapping = true;
  bool convex_boundary = true;
  std::optional<double> known_area;
  std::optional<double> known_curvature;
};

struct Scenario {
  std::string name;
  ConformalMetric metric;
  Domain domain;
  DeclaredFacts facts;
};

namespace detail {

inline BoundaryComponent circle_component(const ConformalMetric& m, Vec2 c, double r) {
  // counterclockwise, so the inward normal points to the center
  return BoundaryComponent::from_param(
      [c, r](double u) {
        return Vec2{c.x + r * std::cos(kTwoPi * u), c.y + r * std::sin(kTwoPi * u)};
      },
      m);
}

inline ConformalMetric poincare_metric() {
  // lambda = ln(2/(1-r^2)), K = -1
  ConformalMetric m;
  m.lambda = [](Vec2 p) { return std::log(2.0 / (1.0 - p.norm2())); };
  m.grad_lambda = [](Vec2 p) {
    double d = 1.0 - p.norm2();
    return Vec2{2.0 * p.x / d, 2.0 * p.y / d};
  };
  m.laplacian_lambda = [](Vec2 p) {
    double d = 1.0 - p.norm2();
    return 4.0 / (d * d);
  };
  m.chart_ok = [](Vec2 p) { return p.norm2() < 0.96 * 0.96; };
  return m;
}

inline ConformalMetric sphere_metric() {
  // lambda = ln(2/(1+r^2)), K = +1 (stereographic chart)
  ConformalMetric m;
  m.lambda = [](Vec2 p) { return std::log(2.0 / (1.0 + p.norm2())); };
  m.grad_lambda = [](Vec2 p) {
    double d = 1.0 + p.norm2();
    return Vec2{-2.0 * p.x / d, -2.0 * p.y / d};
  };
  m.laplacian_lambda = [](Vec2 p) {
    double d = 1.0 + p.norm2();
    return -4.0 / (d * d);
  };
  m.chart_ok = [](Vec2) { return true; };
  return m;
}

inline ConformalMetric hyperbolic_cylinder_metric(double period) {
  // lambda = -ln(cos y), K = -1, closed geodesic on y = 0
  ConformalMetric m;
  m.lambda = [](Vec2 p) { return -std::log(std::cos(p.y)); };
  m.grad_lambda = [](Vec2 p) { return Vec2{0.0, std::tan(p.y)}; };
  m.laplacian_lambda = [](Vec2 p) {
    double c = std::cos(p.y);
    return 1.0 / (c * c);
  };
  m.period_x = period;
  m.chart_ok = [](Vec2 p) { return std::abs(p.y) < 1.45; };
  return m;
}

inline Domain disk_domain(const ConformalMetric& m, double radius, double margin) {
  Domain d;
  double r2 = radius * radius;
  d.rho = [r2](Vec2 p) { return r2 - p.norm2(); };
  d.grad_rho = [](Vec2 p) { return Vec2{-2.0 * p.x, -2.0 * p.y}; };
  d.components.push_back(circle_component(m, {0, 0}, radius));
  d.ambient_margin = margin;
  d.bbox = {{-radius, -radius}, {radius, radius}};
  return d;
}

inline Domain strip_domain(const ConformalMetric& m, double period, double y0, double y1,
                           double margin) {
  Domain d;
  double eps = 1e-3;
  d.rho = [y0, y1, eps](Vec2 p) {
    double a = p.y - y0, b = y1 - p.y;
    return a + b - std::sqrt(a * a + b * b + eps * eps);
  };
  d.grad_rho = [y0, y1, eps](Vec2 p) {
    double a = p.y - y0, b = y1 - p.y;
    double s = std::sqrt(a * a + b * b + eps * eps);
    return Vec2{0.0, (1.0 - a / s) - (1.0 - b / s)};
  };
  // rho = 0 sits a hair inside y0/y1 because of the smooth blend; place the
  // parametrized components on the actual zero level
  double dy0 = y0, dy1 = y1;
  {
    double a0 = eps * eps / (2.0 * (y1 - y0));  // first-order shift of the zero level
    dy0 = y0 + a0;
    dy1 = y1 - a0;
  }
  d.components.push_back(BoundaryComponent::from_param(
      [period, dy0](double u) { return Vec2{u * period, dy0}; }, m, period));
  d.components.push_back(BoundaryComponent::from_param(
      [period, dy1](double u) { return Vec2{(1.0 - u) * period, dy1}; }, m, period));
  d.ambient_margin = margin;
  d.bbox = {{0.0, y0}, {period, y1}};
  d.period_x = period;
  return d;
}

}  // namespace detail

inline Scenario flat_disk_scenario(double radius = 1.0) {
  Scenario sc;
  sc.name = "flat_disk";
  sc.metric = flat_metric();
  sc.domain = detail::disk_domain(sc.metric, radius, 0.5 * radius);
  sc.facts = {true, true, true, true, kPi * radius * radius, 0.0};
  return sc;
}

// unit disk minus a disk of radius 0.35 centered at (0.9, 0); the removed disk
// crosses the outer circle, so the domain is simply connected with one concave arc.
// The two defining functions are joined by a smooth min-like blend.
inline Scenario flat_crescent_scenario(double hole_r = 0.35, double hole_cx = 0.9,
                                       double blend_eps = 5e-3) {
  Scenario sc;
  sc.name = "flat_crescent";
  sc.metric = flat_metric();
  Domain d;
  double a2 = hole_r * hole_r;
  double cx = hole_cx, eps = blend_eps;
  auto r1 = [](Vec2 p) { return 1.0 - p.norm2(); };
  auto r2 = [cx, a2](Vec2 p) { return (p.x - cx) * (p.x - cx) + p.y * p.y - a2; };
  d.rho = [r1, r2, eps](Vec2 p) {
    double a = r1(p), b = r2(p);
    return a + b - std::sqrt(a * a + b * b + eps * eps);
  };
  d.grad_rho = [r1, r2, cx, eps](Vec2 p) {
    double a = r1(p), b = r2(p);
    double s = std::sqrt(a * a + b * b + eps * eps);
    Vec2 ga{-2.0 * p.x, -2.0 * p.y};
    Vec2 gb{2.0 * (p.x - cx), 2.0 * p.y};
    return ga * (1.0 - a / s) + gb * (1.0 - b / s);
  };
  auto pts = trace_level_set(d.rho, d.grad_rho, Vec2{-1.0, 0.0});
  auto snap = [rho = d.rho, grad = d.grad_rho](Vec2 p) {
    for (int it = 0; it < 40; ++it) {
      double r = rho(p);
      Vec2 g = grad(p);
      p -= g * (r / std::max(g.norm2(), 1e-300));
      if (std::abs(r) < 1e-14) break;
    }
    return p;
  };
  d.components.push_back(
      BoundaryComponent::from_polyline(std::move(pts), sc.metric, std::nullopt, 8192, snap));
  d.ambient_margin = 0.4;
  d.bbox = {{-1.0, -1.0}, {1.0, 1.0}};
  sc.domain = std::move(d);
  // conjugate-point freeness is trivial at K = 0; connectedness and the concave arc
  // are numerically certified by the verify suite
  sc.facts = {true, true, true, false, std::nullopt, 0.0};
  return sc;
}

inline Scenario hyperbolic_patch_scenario(double radius = 0.7) {
  Scenario sc;
  sc.name = "hyperbolic_patch";
  sc.metric = detail::poincare_metric();
  sc.domain = detail::disk_domain(sc.metric, radius, 0.2);
  double area = 4.0 * kPi * radius * radius / (1.0 - radius * radius);
  sc.facts = {true, true, true, true, area, -1.0};
  return sc;
}

// chart radius 1.5: larger than a hemisphere, so the boundary circle is concave,
// the equator (a closed geodesic) lies inside, and conjugate points exist
inline Scenario spherical_cap_scenario(double radius = 1.5) {
  Scenario sc;
  sc.name = "spherical_cap";
  sc.metric = detail::sphere_metric();
  sc.domain = detail::disk_domain(sc.metric, radius, 0.5);
  double area = 4.0 * kPi * radius * radius / (1.0 + radius * radius);
  sc.facts = {true, false, false, false, area, 1.0};
  return sc;
}

// full strip across the waist: both circles strictly convex, trapped band around
// the closed geodesic at y = 0
inline Scenario hyperbolic_cylinder_strip_scenario(double period = 3.0, double half = 0.8) {
  Scenario sc;
  sc.name = "hyperbolic_cylinder_strip";
  sc.metric = detail::hyperbolic_cylinder_metric(period);
  sc.domain = detail::strip_domain(sc.metric, period, -half, half, 0.3);
  double area = 2.0 * period * std::tan(half);
  sc.facts = {false, true, false, true, area, -1.0};
  return sc;
}

// sub-cylinder cut just past the waist: concave bottom circle, non-trapping
inline Scenario hyperbolic_cylinder_cut_scenario(double period = 3.0, double y0 = 0.12,
                                                 double y1 = 0.85) {
  Scenario sc;
  sc.name = "hyperbolic_cylinder_cut";
  sc.metric = detail::hyperbolic_cylinder_metric(period);
  sc.domain = detail::strip_domain(sc.metric, period, y0, y1, 0.25);
  double area = period * (std::tan(y1) - std::tan(y0));
  sc.facts = {false, true, true, false, area, -1.0};
  return sc;
}

// flat metric plus a compactly supported conformal bump, unit disk domain
inline Scenario bump_metric_scenario(double amp = 0.06, double rb = 0.8) {
  Scenario sc;
  sc.name = "bump_metric";
  ConformalMetric m;
  double rb2 = rb * rb;
  // lambda = A (1-q)^4 with q = r^2 / rb^2, supported in r < rb
  m.lambda = [amp, rb2](Vec2 p) {
    double q = p.norm2() / rb2;
    if (q >= 1.0) return 0.0;
    double w = 1.0 - q;
    return amp * w * w * w * w;
  };
  m.grad_lambda = [amp, rb2](Vec2 p) {
    double q = p.norm2() / rb2;
    if (q >= 1.0) return Vec2{0.0, 0.0};
    double w = 1.0 - q;
    double dFdq = -4.0 * amp * w * w * w;
    return Vec2{dFdq * 2.0 * p.x / rb2, dFdq * 2.0 * p.y / rb2};
  };
  m.laplacian_lambda = [amp, rb2](Vec2 p) {
    double q = p.norm2() / rb2;
    if (q >= 1.0) return 0.0;
    double w = 1.0 - q;
    double dF = -4.0 * amp * w * w * w;
    double d2F = 12.0 * amp * w * w;
    return (4.0 / rb2) * (q * d2F + dF);
  };
  m.chart_ok = [](Vec2) { return true; };
  sc.metric = m;
  sc.domain = detail::disk_domain(sc.metric, 1.0, 0.5);
  sc.facts = {true, true, true, true, std::nullopt, std::nullopt};
  return sc;
}

inline std::vector<Scenario> catalog() {
  std::vector<Scenario> v;
  v.push_back(flat_disk_scenario());
  v.push_back(flat_crescent_scenario());
  v.push_back(hyperbolic_patch_scenario());
  v.push_back(spherical_cap_scenario());
  v.push_back(hyperbolic_cylinder_strip_scenario());
  v.push_back(hyperbolic_cylinder_cut_scenario());
  v.push_back(bump_metric_scenario());
  return v;
}

// name + numeric parameter overrides (e.g. {"radius", 2.0} for flat_disk)
inline Scenario scenario_by_name(const std::string& name,
                                 const std::map<std::string, double>& params = {}) {
  auto get = [&](const char* key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  if (name == "flat_disk") return flat_disk_scenario(get("radius", 1.0));
  if (name == "flat_crescent")
    return flat_crescent_scenario(get("hole_r", 0.35), get("hole_cx", 0.9));
  if (name == "hyperbolic_patch") return hyperbolic_patch_scenario(get("radius", 0.7));
  if (name == "spherical_cap") return spherical_cap_scenario(get("radius", 1.5));
  if (name == "hyperbolic_cylinder_strip")
    return hyperbolic_cylinder_strip_scenario(get("period", 3.0), get("half", 0.8));
  if (name == "hyperbolic_cylinder_cut")
    return hyperbolic_cylinder_cut_scenario(get("period", 3.0), get("y0", 0.12),
                                            get("y1", 0.85));
  if (name == "bump_metric") return bump_metric_scenario(get("amp", 0.06), get("rb", 0.8));
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace lensray

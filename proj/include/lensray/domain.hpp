#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lensray/core.hpp"
#include "lensray/metric.hpp"

namespace lensray {

// Closed boundary curve resampled uniformly in chart arclength, oriented so that
// the inward normal is the +pi/2 rotation of the tangent. On periodic-x charts the
// stored x coordinates are unwrapped along the curve.
class BoundaryComponent {
 public:
  // pts: closed polyline (no repeated endpoint), already oriented; snap, when given,
  // projects resampled points back onto the exact curve
  static BoundaryComponent from_polyline(std::vector<Vec2> pts, const ConformalMetric& m,
                                         std::optional<double> period_x = std::nullopt,
                                         int n_resample = 4096,
                                         const std::function<Vec2(Vec2)>& snap = nullptr) {
    BoundaryComponent bc;
    bc.period_ = period_x;
    bc.build(std::move(pts), m, n_resample, snap);
    return bc;
  }

  // param: u in [0,1) -> point on the closed curve
  static BoundaryComponent from_param(const std::function<Vec2(double)>& param,
                                      const ConformalMetric& m,
                                      std::optional<double> period_x = std::nullopt,
                                      int n_fine = 16384, int n_resample = 4096) {
    std::vector<Vec2> pts(n_fine);
    for (int i = 0; i < n_fine; ++i) pts[i] = param(double(i) / n_fine);
    return from_polyline(std::move(pts), m, period_x, n_resample);
  }

  int size() const { return int(pts_.size()); }
  double chart_length() const { return chart_len_; }
  double g_length() const { return g_len_; }

  Vec2 point(double s) const { return interp(s); }

  Vec2 tangent(double s) const {
    double ds = chart_len_ / pts_.size();
    Vec2 d = delta(interp(s - 0.5 * ds), interp(s + 0.5 * ds)) / ds;
    return d.normalized();
  }

  Vec2 inward_normal(double s) const { return tangent(s).perp(); }

  // b - a with x reduced to the nearest periodic image of a (identity on plain charts)
  Vec2 chart_delta(const Vec2& a, const Vec2& b) const { return delta(a, b); }

  double chart_to_g(double s) const {
    double frac = s / chart_len_;
    frac = frac - std::floor(frac);
    int n = int(cum_g_.size()) - 1;
    double u = frac * n;
    int i = std::clamp(int(std::floor(u)), 0, n - 1);
    return cum_g_[i] + (cum_g_[i + 1] - cum_g_[i]) * (u - i);
  }

  double g_to_chart(double sg) const {
    double target = std::fmod(sg, g_len_);
    if (target < 0) target += g_len_;
    int n = int(cum_g_.size()) - 1;
    int lo = 0, hi = n;
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      (cum_g_[mid] <= target ? lo : hi) = mid;
    }
    double f = (target - cum_g_[lo]) / std::max(cum_g_[hi] - cum_g_[lo], 1e-300);
    return (lo + f) * chart_len_ / n;
  }

  // nearest boundary parameter to p; returns (s, distance)
  std::pair<double, double> locate(const Vec2& p) const {
    int n = size();
    int best = 0;
    double bd = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
      double d = delta(pts_[i], p).norm2();
      if (d < bd) { bd = d; best = i; }
    }
    double ds = chart_len_ / n;
    double s = best * ds;
    for (int it = 0; it < 30; ++it) {
      Vec2 t = tangent(s);
      double step = delta(interp(s), p).dot(t);
      s += step;
      if (std::abs(step) < 1e-13 * chart_len_) break;
    }
    s = std::fmod(s, chart_len_);
    if (s < 0) s += chart_len_;
    return {s, delta(interp(s), p).norm()};
  }

 private:
  std::vector<Vec2> pts_;      // uniform in chart arclength, x unwrapped
  std::vector<double> cum_g_;  // cumulative g-arclength at pts_ (size n+1)
  double chart_len_ = 0.0, g_len_ = 0.0;
  std::optional<double> period_;

  // b - a with x reduced to the nearest periodic image of a
  Vec2 delta(const Vec2& a, Vec2 b) const {
    if (period_) {
      double L = *period_;
      b.x = a.x + std::remainder(b.x - a.x, L);
    }
    return b - a;
  }

  void build(std::vector<Vec2> raw, const ConformalMetric& m, int n_resample,
             const std::function<Vec2(Vec2)>& snap) {
    // unwrap x along the curve
    if (period_) {
      for (size_t i = 1; i < raw.size(); ++i)
        raw[i] = raw[i - 1] + delta(raw[i - 1], raw[i]);
    }
    int nr = int(raw.size());
    std::vector<double> cum(nr + 1, 0.0);
    for (int i = 0; i < nr; ++i) {
      Vec2 next = (i + 1 < nr) ? raw[i + 1] : raw[0];
      cum[i + 1] = cum[i] + delta(raw[i], next).norm();
    }
    chart_len_ = cum[nr];
    pts_.resize(n_resample);
    int j = 0;
    for (int i = 0; i < n_resample; ++i) {
      double target = chart_len_ * i / n_resample;
      while (j + 1 < nr + 1 && cum[j + 1] < target) ++j;
      double f = (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
      Vec2 a = raw[j % nr];
      Vec2 b = (j + 1 < nr) ? raw[j + 1] : raw[0];
      pts_[i] = a + delta(a, b) * f;
      if (snap) pts_[i] = snap(pts_[i]);
    }
    if (snap) {
      // re-uniformize arclength once after snapping
      std::vector<Vec2> snapped = pts_;
      int ns = int(snapped.size());
      std::vector<double> cum2(ns + 1, 0.0);
      for (int i = 0; i < ns; ++i)
        cum2[i + 1] = cum2[i] + delta(snapped[i], snapped[(i + 1) % ns]).norm();
      chart_len_ = cum2[ns];
      int jj = 0;
      for (int i = 0; i < ns; ++i) {
        double target = chart_len_ * i / ns;
        while (jj + 1 < ns + 1 && cum2[jj + 1] < target) ++jj;
        double f = (target - cum2[jj]) / std::max(cum2[jj + 1] - cum2[jj], 1e-300);
        Vec2 a = snapped[jj % ns];
        Vec2 b = snapped[(jj + 1) % ns];
        pts_[i] = snap(a + delta(a, b) * f);
      }
    }
    cum_g_.assign(n_resample + 1, 0.0);
    for (int i = 0; i < n_resample; ++i) {
      Vec2 a = pts_[i];
      Vec2 b = a + delta(a, pts_[(i + 1) % n_resample]);
      cum_g_[i + 1] = cum_g_[i] + m.conf((a + b) * 0.5) * delta(a, b).norm();
    }
    g_len_ = cum_g_[n_resample];
  }

  // periodic Catmull-Rom in the uniform arclength parameter
  Vec2 interp(double s) const {
    int n = size();
    double u = s / chart_len_ * n;
    double iu = std::floor(u);
    double f = u - iu;
    int i = int(iu) % n;
    if (i < 0) i += n;
    Vec2 p1 = pts_[i];
    Vec2 p0 = p1 + delta(p1, pts_[(i - 1 + n) % n]);
    Vec2 p2 = p1 + delta(p1, pts_[(i + 1) % n]);
    Vec2 p3 = p1 + delta(p1, pts_[(i + 2) % n]);
    double f2 = f * f, f3 = f2 * f;
    return p1 * (1.0 - 2.5 * f2 + 1.5 * f3) + p2 * (0.5 * f + 2.0 * f2 - 1.5 * f3) +
           p0 * (-0.5 * f + f2 - 0.5 * f3) + p3 * (-0.5 * f2 + 0.5 * f3);
  }
};

// Compact domain with smooth boundary given by a defining function rho
// (positive inside, zero on the boundary).
struct Domain {
  std::function<double(Vec2)> rho;
  std::function<Vec2(Vec2)> grad_rho;
  std::vector<BoundaryComponent> components;
  double ambient_margin = 0.5;
  BBox bbox;                       // bounding box of the domain
  std::optional<double> period_x;  // matches the metric's period on cylinder charts

  bool inside(const Vec2& p) const { return rho(p) >= 0.0; }

  // rho normalized by |grad rho|: approximate signed chart distance near the boundary
  double rho_hat(const Vec2& p) const {
    double g = grad_rho(p).norm();
    return rho(p) / std::max(g, 1e-300);
  }

  struct Loc { int component; double s; double dist; };
  Loc locate_boundary(const Vec2& p) const {
    Loc best{-1, 0.0, std::numeric_limits<double>::max()};
    for (int c = 0; c < int(components.size()); ++c) {
      auto [s, d] = components[c].locate(p);
      if (d < best.dist) best = {c, s, d};
    }
    return best;
  }

  double total_boundary_g_length() const {
    double L = 0.0;
    for (const auto& c : components) L += c.g_length();
    return L;
  }

  // domain diameter estimate in g-units; used for trapping budgets
  double diameter_estimate(const ConformalMetric& m) const {
    double emax = 0.0;
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; j <= 16; ++j) {
        Vec2 p{bbox.lo.x + bbox.width() * i / 16.0, bbox.lo.y + bbox.height() * j / 16.0};
        if (inside(p)) emax = std::max(emax, m.conf(p));
      }
    return bbox.diag() * std::max(emax, 1.0);
  }
};

enum class BoundaryClass { incoming, outgoing, glancing };

// Transversality measure at a boundary phase point: cosine of the chart angle between
// the direction and the inward normal. Equals X rho scaled so that |grad rho|_g = 1;
// conformal charts preserve angles, so no metric factor appears.
inline double normal_cosine(const Domain& d, const UnitTangent& y) {
  Vec2 n = d.grad_rho(y.pos());
  return y.dir().dot(n) / std::max(n.norm(), 1e-300);
}

inline BoundaryClass classify_boundary_point(const ConformalMetric& /*m*/, const Domain& d,
                                             const UnitTangent& y, double eps_g = 1e-7,
                                             double boundary_tol = 1e-6) {
  if (std::abs(d.rho_hat(y.pos())) > boundary_tol)
    throw std::invalid_argument("classify_boundary_point: point not on boundary");
  double c = normal_cosine(d, y);
  if (c > eps_g) return BoundaryClass::incoming;
  if (c < -eps_g) return BoundaryClass::outgoing;
  return BoundaryClass::glancing;
}

// trace one closed component of {rho = 0} starting near seed; adaptive step,
// Newton-corrected onto the level set
inline std::vector<Vec2> trace_level_set(const std::function<double(Vec2)>& rho,
                                         const std::function<Vec2(Vec2)>& grad_rho,
                                         Vec2 seed, double step_max = 4e-3,
                                         double step_min = 2e-4) {
  auto project = [&](Vec2 p) {
    for (int it = 0; it < 60; ++it) {
      double r = rho(p);
      Vec2 g = grad_rho(p);
      double g2 = std::max(g.norm2(), 1e-300);
      p -= g * (r / g2);
      if (std::abs(r) < 1e-14) break;
    }
    return p;
  };
  Vec2 p = project(seed);
  std::vector<Vec2> out;
  out.push_back(p);
  Vec2 start = p;
  double traveled = 0.0;
  for (int guard = 0; guard < 4000000; ++guard) {
    Vec2 g = grad_rho(p);
    // orientation such that rot90(tangent) points to the rho-increasing side
    Vec2 t = Vec2{g.y, -g.x}.normalized();
    Vec2 g2 = grad_rho(project(p + t * step_min));
    double dang = std::abs(wrap_angle_signed(std::atan2(g2.y, g2.x) - std::atan2(g.y, g.x)));
    double kappa = dang / step_min + 1e-9;
    double ds = std::clamp(0.02 / kappa, step_min, step_max);
    Vec2 pn = project(p + t * ds);
    traveled += (pn - p).norm();
    p = pn;
    if (traveled > 4.0 * ds && (p - start).norm() < 0.75 * ds) break;
    out.push_back(p);
  }
  return out;
}

}  // namespace lensray

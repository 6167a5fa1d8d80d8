#pragma once

#include <functional>

#include "lensray/domain.hpp"
#include "lensray/flow.hpp"
#include "lensray/metric.hpp"

namespace lensray {

// Integral of F over the domain (chart measure dx dy) on an nx-by-ny grid.
// Cells fully inside count with the midpoint rule; cells cut by the boundary get a
// subsampled inside-fraction, so the boundary error is O(h / subsample^2).
inline double masked_area_integral(const Domain& d, const std::function<double(Vec2)>& F,
                                   int nx, int ny, int subsample = 12) {
  double hx = d.bbox.width() / nx, hy = d.bbox.height() / ny;
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      Vec2 c{d.bbox.lo.x + (i + 0.5) * hx, d.bbox.lo.y + (j + 0.5) * hy};
      double safety = 1.2 * std::hypot(hx, hy);
      double rh = d.rho_hat(c);
      if (rh > safety) {
        total += F(c) * hx * hy;
        continue;
      }
      if (rh < -safety) continue;
      // cut cell: subsample the inside fraction and average F over inside points
      int cnt = 0;
      double acc = 0.0;
      for (int a = 0; a < subsample; ++a)
        for (int b = 0; b < subsample; ++b) {
          Vec2 p{c.x + hx * ((a + 0.5) / subsample - 0.5),
                 c.y + hy * ((b + 0.5) / subsample - 0.5)};
          if (d.inside(p)) {
            acc += F(p);
            ++cnt;
          }
        }
      total += acc * (hx * hy) / (subsample * subsample);
    }
  }
  return total;
}

// g-area of the domain
inline double domain_area(const ConformalMetric& m, const Domain& d, int nx = 400,
                          int ny = 400) {
  return masked_area_integral(
      d, [&](Vec2 p) { return std::exp(2.0 * m.lambda(p)); }, nx, ny);
}

// composite Simpson along a stored path: endpoints + recorded midpoints per interval
inline double path_integral(const GeodesicPath& path,
                            const std::function<double(const UnitTangent&)>& f) {
  double acc = 0.0;
  for (size_t i = 0; i + 1 < path.samples.size(); ++i) {
    double h = path.samples[i + 1].t - path.samples[i].t;
    acc += h / 6.0 *
           (f(path.samples[i].y) + 4.0 * f(path.midpoints[i].y) + f(path.samples[i + 1].y));
  }
  return acc;
}

// g-arclength of a boundary arc [s0, s1] (chart parameters, s1 > s0 allowed to wrap)
inline double boundary_arc_g_length(const ConformalMetric& m, const BoundaryComponent& bc,
                                    double s0, double s1, int n = 4096) {
  double L = bc.chart_length();
  double span = s1 - s0;
  if (span < 0) span += L;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double sa = s0 + span * i / n, sb = s0 + span * (i + 1) / n;
    Vec2 a = bc.point(sa), b = bc.point(sb);
    acc += m.conf(bc.point(0.5 * (sa + sb))) * bc.chart_delta(a, b).norm();
  }
  return acc;
}

}  // namespace lensray

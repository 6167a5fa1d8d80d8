#pragma once

#include <optional>
#include <vector>

#include "lensray/domain.hpp"
#include "lensray/metric.hpp"
#include "lensray/ode.hpp"

namespace lensray {

struct SolverOptions {
  double ode_tol = 1e-9;        // per-step error target
  double h_max = 0.05;          // max sample spacing (g-arclength)
  double boundary_tol = 1e-10;  // event refinement tolerance on rho_hat
  double glancing_eps = 1e-7;   // |cos angle to boundary| threshold
  double touch_window = 1e-8;   // min rho_hat counted as a tangential contact
  double degenerate_eps = 1e-5; // |X^2 rho| threshold for tangency order > 2
  double t_budget_factor = 100.0;
};

enum class EventKind { transversal_exit, transversal_entry, glancing_touch };

struct BoundaryEvent {
  double t;
  UnitTangent y;      // on the boundary (|rho_hat| <= boundary_tol)
  EventKind kind;
  bool degenerate = false;
};

enum class Terminal { exited, budget_exhausted };

struct PathSample {
  double t;
  UnitTangent y;
};

struct GeodesicPath {
  std::vector<PathSample> samples;    // accepted steps, event points included
  std::vector<PathSample> midpoints;  // one per consecutive sample pair
  std::vector<BoundaryEvent> events;
  Terminal terminal = Terminal::budget_exhausted;
};

namespace detail {

using State3 = std::array<double, 3>;

inline UnitTangent to_ut(const State3& s) { return {s[0], s[1], s[2]}; }
inline State3 to_state(const UnitTangent& y) { return {y.x, y.y, y.theta}; }

struct FlowRhs {
  const ConformalMetric* m;
  void operator()(const State3& s, State3& d) const {
    Vec2 p{s[0], s[1]};
    double el = std::exp(-m->lambda(p));
    Vec2 gl = m->grad_lambda(p);
    double c = std::cos(s[2]), sn = std::sin(s[2]);
    d[0] = el * c;
    d[1] = el * sn;
    d[2] = el * (-gl.x * sn + gl.y * c);
  }
};

}  // namespace detail

// project a near-boundary phase point onto the boundary along grad rho
inline UnitTangent project_to_boundary(const Domain& d, UnitTangent y) {
  Vec2 p = y.pos();
  for (int it = 0; it < 50; ++it) {
    double r = d.rho(p);
    Vec2 g = d.grad_rho(p);
    p -= g * (r / std::max(g.norm2(), 1e-300));
    if (std::abs(r) < 1e-15) break;
  }
  return {p, y.theta};
}

// curvature of the boundary relative to the flow at a glancing phase point:
// second derivative of rho_hat along the trajectory (negative = convex side,
// tangent trajectories leave; positive = concave, they enter)
inline double glancing_second_derivative(const ConformalMetric& m, const Domain& d,
                                         const UnitTangent& y, double dt = 1e-4) {
  detail::FlowRhs rhs{&m};
  auto st = detail::to_state(y);
  detail::State3 k1;
  rhs(st, k1);
  auto plus = Dopri5<3>::probe(rhs, st, k1, dt);
  detail::State3 k1m;
  rhs(st, k1m);
  auto minus = Dopri5<3>::probe(rhs, st, k1m, -dt);
  double r0 = d.rho_hat(y.pos());
  double rp = d.rho_hat({plus[0], plus[1]});
  double rm = d.rho_hat({minus[0], minus[1]});
  return (rp - 2.0 * r0 + rm) / (dt * dt);
}

// Adaptive integration of the unit-speed geodesic flow with boundary event detection.
// Exits (sign changes of rho) are refined to |rho_hat| <= boundary_tol; tangential
// touches (interior minima of rho_hat dipping below touch_window without crossing)
// are recorded and integration continues, matching the closed-domain exit semantics.
inline GeodesicPath integrate_geodesic(const ConformalMetric& m, const Domain& d,
                                       const UnitTangent& y0, double t_max,
                                       const SolverOptions& opt = {}) {
  GeodesicPath path;
  detail::FlowRhs rhs{&m};
  using D5 = Dopri5<3>;

  detail::State3 y = detail::to_state(y0);
  double t = 0.0;
  path.samples.push_back({t, y0});
  if (t_max <= 0.0) return path;

  detail::State3 k1;
  rhs(y, k1);

  // suppress events until the trajectory separates from a boundary start;
  // outgoing starts are not suppressed (their crossing at t ~ 0 is a real exit)
  bool released = d.rho_hat(y0.pos()) > 3.0 * opt.touch_window ||
                  normal_cosine(d, y0) < -opt.glancing_eps;

  // probe state at t0 + dt inside the current step
  auto probe_state = [&](const detail::State3& base, const detail::State3& kbase,
                         double dt) { return D5::probe(rhs, base, kbase, dt); };

  double h = std::min(opt.h_max, t_max / 4.0);
  if (h <= 0.0) h = opt.h_max;
  int guard_max = int(2e6);
  for (int guard = 0; guard < guard_max && t < t_max; ++guard) {
    double rh0 = d.rho_hat({y[0], y[1]});
    double el = std::exp(-m.lambda({y[0], y[1]}));
    // keep steps small near the boundary so dips cannot be jumped over
    double h_near = std::clamp(std::abs(rh0) / std::max(el, 1e-12), 1e-3, opt.h_max);
    double h_try = std::min({h, h_near, t_max - t});

    detail::State3 y5, k7;
    double err;
    for (int att = 0; att < 60; ++att) {
      D5::step(rhs, y, k1, h_try, y5, err, k7, opt.ode_tol, opt.ode_tol);
      if (err <= 1.0 || h_try <= 1e-12) break;
      h_try = std::max(h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0), 1e-12);
    }
    if (h_try <= 1e-12)
      throw std::runtime_error("integrate_geodesic: step-size underflow at t = " +
                               std::to_string(t));
    double t1 = t + h_try;

    // Deep-interior steps cannot reach the boundary: rho_hat decreases along the flow
    // at most at rate |grad rho_hat| e^{-lambda}, which stays below 4 on the band
    // rho_hat <= 4 h_max for every catalog defining function. Skip the event scan there.
    double rh1 = d.rho_hat({y5[0], y5[1]});
    if (std::min(rh0, rh1) > 4.0 * h_try) {
      path.midpoints.push_back({t + 0.5 * h_try,
                                detail::to_ut(probe_state(y, k1, 0.5 * h_try))});
      path.samples.push_back({t1, detail::to_ut(y5)});
      y = y5;
      k1 = k7;
      t = t1;
      released = true;
      h = std::min(opt.h_max,
                   h_try * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0));
      continue;
    }

    // scan rho_hat on the step at five points
    std::array<double, 5> ts, rr;
    std::array<detail::State3, 5> ys;
    ys[0] = y;
    ys[4] = y5;
    for (int q = 1; q <= 3; ++q) ys[q] = probe_state(y, k1, h_try * q / 4.0);
    for (int q = 0; q < 5; ++q) {
      ts[q] = t + h_try * q / 4.0;
      rr[q] = d.rho_hat({ys[q][0], ys[q][1]});
    }

    auto rho_at = [&](double tt) {
      auto s = probe_state(y, k1, tt - t);
      return d.rho_hat({s[0], s[1]});
    };
    auto state_at = [&](double tt) { return probe_state(y, k1, tt - t); };
    auto drho_at = [&](double tt) {
      auto s = state_at(tt);
      Vec2 g = d.grad_rho({s[0], s[1]});
      Vec2 v{std::cos(s[2]), std::sin(s[2])};
      return v.dot(g) / std::max(g.norm(), 1e-300);
    };

    std::optional<double> exit_t;
    for (int q = 0; q < 4 && !exit_t; ++q) {
      bool sub_released = released || rr[q] > 3.0 * opt.touch_window;
      if (rr[q + 1] < -opt.boundary_tol) {
        // crossing in this subinterval (or a dip that already crossed)
        double ta = ts[q], tb = ts[q + 1];
        double fa = rr[q], fb = rr[q + 1];
        if (fa <= 0.0) {
          exit_t = ta;
        } else {
          exit_t = brent_root([&](double tt) { return rho_at(tt); }, ta, tb, fa, fb,
                              1e-14, opt.boundary_tol * 0.5);
        }
        if (!sub_released && exit_t) {
          // still attached to the start contact: ignore and keep going
          exit_t.reset();
          continue;
        }
      } else {
        // look for an interior minimum of rho_hat
        double da = drho_at(ts[q]), db = drho_at(ts[q + 1]);
        if (da < 0.0 && db > 0.0) {
          double tmin = brent_root([&](double tt) { return drho_at(tt); }, ts[q],
                                   ts[q + 1], da, db, 1e-13, 1e-14);
          double rmin = rho_at(tmin);
          if (rmin < -opt.boundary_tol) {
            if (sub_released) {
              double fa = rr[q];
              exit_t = (fa <= 0.0) ? ts[q]
                                   : brent_root([&](double tt) { return rho_at(tt); },
                                                ts[q], tmin, fa, rmin, 1e-14,
                                                opt.boundary_tol * 0.5);
            }
          } else if (rmin <= opt.touch_window && sub_released) {
            auto s = state_at(tmin);
            UnitTangent yt = project_to_boundary(d, detail::to_ut(s));
            BoundaryEvent ev{tmin, yt, EventKind::glancing_touch, false};
            double d2 = glancing_second_derivative(m, d, yt);
            Vec2 g = d.grad_rho(yt.pos());
            double w = Vec2{std::cos(yt.theta), std::sin(yt.theta)}.dot(g) /
                       std::max(g.norm(), 1e-300);
            ev.degenerate = std::abs(w) <= opt.glancing_eps &&
                            std::abs(d2) <= opt.degenerate_eps;
            path.events.push_back(ev);
            path.midpoints.push_back(
                {0.5 * (t + tmin), detail::to_ut(state_at(0.5 * (t + tmin)))});
            path.samples.push_back({tmin, detail::to_ut(s)});
            // restart the step from the touch
            y = s;
            rhs(y, k1);
            t = tmin;
            released = true;
            goto next_step;
          }
        }
      }
      if (!released && rr[q + 1] > 3.0 * opt.touch_window) released = true;
    }

    if (exit_t) {
      auto s = state_at(*exit_t);
      UnitTangent ye = project_to_boundary(d, detail::to_ut(s));
      path.events.push_back({*exit_t, ye, EventKind::transversal_exit, false});
      path.midpoints.push_back(
          {0.5 * (t + *exit_t), detail::to_ut(state_at(0.5 * (t + *exit_t)))});
      path.samples.push_back({*exit_t, ye});
      path.terminal = Terminal::exited;
      return path;
    }

    path.midpoints.push_back({t + 0.5 * h_try, detail::to_ut(ys[2])});
    path.samples.push_back({t1, detail::to_ut(y5)});
    y = y5;
    k1 = k7;  // FSAL
    t = t1;
    if (!released && d.rho_hat({y[0], y[1]}) > 3.0 * opt.touch_window) released = true;
    h = std::min(opt.h_max, h_try * std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2),
                                               0.2, 5.0));
  next_step:;
  }
  path.terminal = Terminal::budget_exhausted;
  return path;
}

enum class ExitStatus { exited, trapped_budget };
enum class ContactKind { transversal, glancing };

struct ExitResult {
  ExitStatus status = ExitStatus::trapped_budget;
  std::optional<double> tau_plus;
  std::optional<UnitTangent> exit_point;
  ContactKind exit_kind = ContactKind::transversal;
  bool degenerate = false;
};

namespace detail {

// classify a boundary-start phase point; returns an immediate ExitResult if the
// trajectory leaves at t = 0 (outgoing or convex-glancing start)
inline std::optional<ExitResult> immediate_exit(const ConformalMetric& m, const Domain& d,
                                                const UnitTangent& y,
                                                const SolverOptions& opt) {
  if (std::abs(d.rho_hat(y.pos())) > 3.0 * opt.touch_window) return std::nullopt;
  double w = normal_cosine(d, y);
  if (w < -opt.glancing_eps) {
    ExitResult r;
    r.status = ExitStatus::exited;
    r.tau_plus = 0.0;
    r.exit_point = y;
    r.exit_kind = ContactKind::transversal;
    return r;
  }
  if (std::abs(w) <= opt.glancing_eps) {
    double d2 = glancing_second_derivative(m, d, y);
    if (d2 < -opt.degenerate_eps) {
      ExitResult r;
      r.status = ExitStatus::exited;
      r.tau_plus = 0.0;
      r.exit_point = y;
      r.exit_kind = ContactKind::glancing;
      return r;
    }
    if (std::abs(d2) <= opt.degenerate_eps) {
      ExitResult r;
      r.status = ExitStatus::exited;
      r.tau_plus = 0.0;
      r.exit_point = y;
      r.exit_kind = ContactKind::glancing;
      r.degenerate = true;
      return r;
    }
    // concave glancing: the trajectory enters the interior
  }
  return std::nullopt;
}

}  // namespace detail

// forward exit time from the closed domain
inline ExitResult exit_time(const ConformalMetric& m, const Domain& d, const UnitTangent& y,
                            double t_budget, const SolverOptions& opt = {}) {
  if (auto r = detail::immediate_exit(m, d, y, opt)) return *r;
  GeodesicPath path = integrate_geodesic(m, d, y, t_budget, opt);
  ExitResult r;
  if (path.terminal != Terminal::exited) return r;  // trapped within budget
  const BoundaryEvent& ev = path.events.back();
  r.status = ExitStatus::exited;
  r.tau_plus = ev.t;
  r.exit_point = ev.y;
  double w = normal_cosine(d, ev.y);
  r.exit_kind = std::abs(w) <= opt.glancing_eps ? ContactKind::glancing
                                                : ContactKind::transversal;
  if (r.exit_kind == ContactKind::glancing) {
    double d2 = glancing_second_derivative(m, d, ev.y);
    r.degenerate = std::abs(d2) <= opt.degenerate_eps;
  }
  return r;
}

struct HitResult {
  ExitStatus status = ExitStatus::trapped_budget;
  std::optional<double> t_plus;
  std::optional<UnitTangent> hit_point;
  ContactKind kind = ContactKind::transversal;
  bool is_final_exit = false;  // first contact is also the exit from the closed domain
  bool degenerate = false;
};

// first boundary contact (open-interior semantics): glancing touches terminate here
inline HitResult hitting_time(const ConformalMetric& m, const Domain& d,
                              const UnitTangent& y, double t_budget,
                              const SolverOptions& opt = {}) {
  HitResult h;
  if (auto r = detail::immediate_exit(m, d, y, opt)) {
    h.status = ExitStatus::exited;
    h.t_plus = 0.0;
    h.hit_point = y;
    h.kind = r->exit_kind;
    h.is_final_exit = true;
    h.degenerate = r->degenerate;
    return h;
  }
  GeodesicPath path = integrate_geodesic(m, d, y, t_budget, opt);
  if (path.events.empty()) return h;  // trapped before any contact
  const BoundaryEvent& ev = path.events.front();
  h.status = ExitStatus::exited;
  h.t_plus = ev.t;
  h.hit_point = ev.y;
  h.kind = ev.kind == EventKind::glancing_touch ? ContactKind::glancing
                                                : ContactKind::transversal;
  if (h.kind == ContactKind::transversal &&
      std::abs(normal_cosine(d, ev.y)) <= opt.glancing_eps)
    h.kind = ContactKind::glancing;
  h.is_final_exit = ev.kind != EventKind::glancing_touch;
  h.degenerate = ev.degenerate;
  return h;
}

// scalar Jacobi equation J'' + K J = 0 along a unit-speed path (normal component in 2D);
// returns (J, J') on the path's sample grid, integrated with RK4 on each interval
inline std::vector<std::array<double, 2>> jacobi_field(const ConformalMetric& m,
                                                       const GeodesicPath& path, double J0,
                                                       double dJ0) {
  size_t n = path.samples.size();
  std::vector<std::array<double, 2>> out(n);
  out[0] = {J0, dJ0};
  for (size_t i = 0; i + 1 < n; ++i) {
    double t0 = path.samples[i].t, t1 = path.samples[i + 1].t;
    double hh = t1 - t0;
    double K0 = curvature(m, path.samples[i].y.pos());
    double Km = curvature(m, path.midpoints[i].y.pos());
    double K1 = curvature(m, path.samples[i + 1].y.pos());
    auto f = [](double K, double J, double dJ) { return std::array<double, 2>{dJ, -K * J}; };
    double J = out[i][0], dJ = out[i][1];
    auto k1 = f(K0, J, dJ);
    auto k2 = f(Km, J + 0.5 * hh * k1[0], dJ + 0.5 * hh * k1[1]);
    auto k3 = f(Km, J + 0.5 * hh * k2[0], dJ + 0.5 * hh * k2[1]);
    auto k4 = f(K1, J + hh * k3[0], dJ + hh * k3[1]);
    out[i + 1] = {J + hh / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
                  dJ + hh / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
  }
  return out;
}

// zeros of the Jacobi field with initial data (0, 1) in (0, T]; cubic Hermite
// refinement between samples, bisected to 1e-6
inline std::vector<double> conjugate_points(const ConformalMetric& m,
                                            const GeodesicPath& path) {
  auto J = jacobi_field(m, path, 0.0, 1.0);
  std::vector<double> zeros;
  for (size_t i = 1; i + 1 < J.size(); ++i) {
    double t0 = path.samples[i].t, t1 = path.samples[i + 1].t;
    double j0 = J[i][0], j1 = J[i + 1][0];
    if (j0 == 0.0) { zeros.push_back(t0); continue; }
    if (j0 * j1 > 0.0) continue;
    double h = t1 - t0, d0 = J[i][1], d1 = J[i + 1][1];
    auto hermite = [&](double tt) {
      double u = (tt - t0) / h;
      double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
      double h10 = u * (1 - u) * (1 - u);
      double h01 = u * u * (3 - 2 * u);
      double h11 = u * u * (u - 1);
      return h00 * j0 + h10 * h * d0 + h01 * j1 + h11 * h * d1;
    };
    double a = t0, b = t1;
    double fa = j0;
    for (int it = 0; it < 80 && b - a > 1e-7; ++it) {
      double mid = 0.5 * (a + b);
      double fm = hermite(mid);
      if (fa * fm <= 0.0) b = mid;
      else { a = mid; fa = fm; }
    }
    zeros.push_back(0.5 * (a + b));
  }
  return zeros;
}

struct TrapResult {
  bool trapped = false;
  std::optional<double> tau_plus;
};

inline TrapResult is_trapped(const ConformalMetric& m, const Domain& d, const UnitTangent& y,
                             double t_budget, const SolverOptions& opt = {}) {
  ExitResult r = exit_time(m, d, y, t_budget, opt);
  if (r.status == ExitStatus::trapped_budget) return {true, std::nullopt};
  return {false, r.tau_plus};
}

}  // namespace lensray

#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "lensray/core.hpp"

namespace lensray {

// Dormand-Prince 5(4) pair, FSAL. Coefficients per the original 1980 paper.
template <int N>
struct Dopri5 {
  using State = std::array<double, N>;
  using Rhs = std::function<void(const State&, State&)>;

  // one step of size h from y with derivative k1 already evaluated;
  // returns 5th-order solution, error estimate and k7 (= f at the new point)
  static void step(const Rhs& f, const State& y, const State& k1, double h, State& out5,
                   double& err_norm, State& k7, double atol, double rtol) {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k2, k3, k4, k5, k6, tmp;
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    f(tmp, k2);
    for (int i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(tmp, k3);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(tmp, k4);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(tmp, k5);
    for (int i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                           a65 * k5[i]);
    f(tmp, k6);
    for (int i = 0; i < N; ++i)
      out5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(out5, k7);
    err_norm = 0.0;
    for (int i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                      e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(out5[i]));
      double q = e / sc;
      err_norm += q * q;
    }
    err_norm = std::sqrt(err_norm / N);
  }

  // single fixed step without error control (probing within an accepted step)
  static State probe(const Rhs& f, const State& y, const State& k1, double h) {
    State out, k7;
    double err;
    step(f, y, k1, h, out, err, k7, 1.0, 1.0);
    return out;
  }
};

}  // namespace lensray

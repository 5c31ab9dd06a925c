#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "keen/errors.hpp"

namespace keen::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

namespace detail {

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, std::initializer_list<std::pair<double, const Vec<N>*>> terms) {
  Vec<N> out = y;
  for (const auto& [coef, k] : terms)
    for (std::size_t i = 0; i < N; ++i) out[i] += h * coef * (*k)[i];
  return out;
}

template <std::size_t N>
bool all_finite(const Vec<N>& y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// One classical fourth-order Runge-Kutta step of y' = f(y).
template <std::size_t N, class Field>
Vec<N> rk4_step(const Field& f, const Vec<N>& y, double h) {
  const Vec<N> k1 = f(y);
  const Vec<N> k2 = f(detail::axpy<N>(y, h, {{0.5, &k1}}));
  const Vec<N> k3 = f(detail::axpy<N>(y, h, {{0.5, &k2}}));
  const Vec<N> k4 = f(detail::axpy<N>(y, h, {{1.0, &k3}}));
  return detail::axpy<N>(y, h, {{1.0 / 6.0, &k1}, {1.0 / 3.0, &k2}, {1.0 / 3.0, &k3}, {1.0 / 6.0, &k4}});
}

template <std::size_t N>
struct EmbeddedStep {
  Vec<N> y;      ///< fifth-order solution
  Vec<N> error;  ///< difference to the embedded fourth-order solution
};

/// Dormand-Prince 5(4) step.
template <std::size_t N, class Field>
EmbeddedStep<N> dopri5_step(const Field& f, const Vec<N>& y, double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                   a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                   b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                   e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

  const Vec<N> k1 = f(y);
  const Vec<N> k2 = f(detail::axpy<N>(y, h, {{a21, &k1}}));
  const Vec<N> k3 = f(detail::axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
  const Vec<N> k4 = f(detail::axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const Vec<N> k5 = f(detail::axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const Vec<N> k6 =
      f(detail::axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  EmbeddedStep<N> out;
  out.y = detail::axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  const Vec<N> k7 = f(out.y);
  for (std::size_t i = 0; i < N; ++i)
    out.error[i] =
        h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  return out;
}

enum class Method { FixedRK4, AdaptiveRK45 };

struct StepControl {
  Method method = Method::AdaptiveRK45;
  double step = 0.01;  ///< fixed step for RK4
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double min_step = 1e-12;
  double max_step = 1.0;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  /// Smallest accepted step that was not shortened to land on a sample time.
  double min_step = std::numeric_limits<double>::infinity();
  double max_step = 0.0;
};

enum class Stop { Completed, Observer };

/// Integrates y' = f(y) from t = 0, calling `observe(t, y)` at t = 0 and every
/// `sample_interval` (plus t_end). Integration stops early once `observe`
/// returns false. Non-finite states raise BlowUpError with the last good sample.
template <std::size_t N, class Field, class Observer>
Stop integrate_sampled(const Field& f, Vec<N> y, double t_end, double sample_interval,
                       const StepControl& ctl, Observer&& observe, Stats* stats_out = nullptr) {
  Stats stats;
  double t = 0.0;
  auto finish = [&](Stop s) {
    if (stats_out) *stats_out = stats;
    return s;
  };
  if (!observe(t, y)) return finish(Stop::Observer);

  auto blow_up = [&](double at) {
    return BlowUpError(at, std::vector<double>(y.begin(), y.end()),
                       "integration produced a non-finite state after t=" + std::to_string(at));
  };

  double h = ctl.method == Method::FixedRK4 ? ctl.step : std::min(ctl.max_step, 1e-2);
  double err_prev = 1e-4;
  for (long k = 1;; ++k) {
    const double t_sample = std::min(t_end, k * sample_interval);
    while (t < t_sample) {
      const double remaining = t_sample - t;
      const bool clipped = h >= remaining * (1.0 - 1e-12);
      const double h_try = clipped ? remaining : h;
      if (ctl.method == Method::FixedRK4) {
        const Vec<N> next = rk4_step<N>(f, y, h_try);
        if (!detail::all_finite<N>(next)) throw blow_up(t);
        y = next;
        t = clipped ? t_sample : t + h_try;
        ++stats.accepted;
        if (!clipped) stats.min_step = std::min(stats.min_step, h_try);
        stats.max_step = std::max(stats.max_step, h_try);
        continue;
      }

      // A stage leaving the field's domain rejects the step; it only ends the
      // run once the step has shrunk to min_step.
      EmbeddedStep<N> trial;
      bool outside = false;
      try {
        trial = dopri5_step<N>(f, y, h_try);
      } catch (const DomainError&) {
        outside = true;
      }
      double err = 0.0;
      bool finite = !outside && detail::all_finite<N>(trial.y);
      for (std::size_t i = 0; i < N && finite; ++i) {
        const double scale =
            ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(trial.y[i]));
        const double ratio = trial.error[i] / scale;
        err += ratio * ratio;
      }
      err = finite ? std::sqrt(err / N) : std::numeric_limits<double>::infinity();

      if (err <= 1.0) {
        y = trial.y;
        t = clipped ? t_sample : t + h_try;
        ++stats.accepted;
        if (!clipped) stats.min_step = std::min(stats.min_step, h_try);
        stats.max_step = std::max(stats.max_step, h_try);
        // PI controller
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04) : 10.0;
        fac = std::clamp(fac, 0.2, 10.0);
        err_prev = std::max(err, 1e-4);
        h = std::min(ctl.max_step, h_try * fac);
      } else {
        ++stats.rejected;
        const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h = h_try * fac;
        if (h < ctl.min_step) {
          if (outside)
            throw DomainError("integration left the field's domain at t=" + std::to_string(t));
          if (!finite) throw blow_up(t);
          throw NumericError("step size fell below min_step=" + std::to_string(ctl.min_step) +
                             " at t=" + std::to_string(t));
        }
      }
    }
    if (!observe(t, y)) return finish(Stop::Observer);
    if (t_sample >= t_end) return finish(Stop::Completed);
  }
}

}  // namespace keen::ode

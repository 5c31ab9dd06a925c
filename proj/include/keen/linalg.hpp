#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace keen {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Spectrum3 = std::array<std::complex<double>, 3>;

namespace detail {

// Roots of x^2 + b x + c; a complex pair is returned exactly conjugate.
inline std::array<std::complex<double>, 2> monic_quadratic_roots(double b, double c) {
  const double half = -0.5 * b;
  const double disc = half * half - c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // larger-magnitude root first, then Vieta for the other
    const double big = half >= 0.0 ? half + s : half - s;
    const double small = big != 0.0 ? c / big : 0.0;
    return {std::complex<double>(big, 0.0), std::complex<double>(small, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half, im), std::complex<double>(half, -im)};
}

inline std::array<std::complex<double>, 2> eigenvalues_2x2(double a, double b, double c,
                                                           double d) {
  if (b == 0.0 || c == 0.0) return {std::complex<double>(a, 0.0), std::complex<double>(d, 0.0)};
  return monic_quadratic_roots(-(a + d), a * d - b * c);
}

// Real root of x^3 + a2 x^2 + a1 x + a0 improved by one guarded Newton step.
inline double polish_cubic_root(double x, double a2, double a1, double a0) {
  auto poly = [&](double t) { return ((t + a2) * t + a1) * t + a0; };
  const double f = poly(x);
  const double slope = (3.0 * x + 2.0 * a2) * x + a1;
  if (slope == 0.0 || f == 0.0) return x;
  const double next = x - f / slope;
  return std::isfinite(next) && std::abs(poly(next)) < std::abs(f) ? next : x;
}

inline Spectrum3 monic_cubic_roots(double a2, double a1, double a0) {
  const double shift = a2 / 3.0;
  const double p = a1 - a2 * shift;
  const double q = 2.0 * shift * shift * shift - shift * a1 + a0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  if (disc <= 0.0) {
    // three real roots: trigonometric form on the depressed cubic
    Spectrum3 out;
    if (p == 0.0) {
      const double x = polish_cubic_root(-shift, a2, a1, a0);
      out.fill(std::complex<double>(x, 0.0));
      return out;
    }
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
      out[k] = std::complex<double>(polish_cubic_root(t - shift, a2, a1, a0), 0.0);
    }
    return out;
  }

  // one real root (Cardano), pair from the deflated quadratic
  const double sq = std::sqrt(disc);
  const double u = std::cbrt(-0.5 * q - std::copysign(sq, q));
  const double v = u != 0.0 ? -p / (3.0 * u) : 0.0;
  const double real_root = polish_cubic_root(u + v - shift, a2, a1, a0);
  const double b1 = a2 + real_root;
  const double b0 = a1 + real_root * b1;
  const auto pair = monic_quadratic_roots(b1, b0);
  return {std::complex<double>(real_root, 0.0), pair[0], pair[1]};
}

inline void sort_by_real_part_desc(Spectrum3& ev) {
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
  });
}

}  // namespace detail

/// Eigenvalues of a real 3x3 matrix from its characteristic cubic, sorted by
/// real part descending. A row or column whose off-diagonal entries vanish is
/// deflated first, so triangular input returns its diagonal exactly.
inline Spectrum3 eigenvalues_3x3(const Matrix3& m) {
  Spectrum3 ev;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    const bool row_clear = m[k][i] == 0.0 && m[k][j] == 0.0;
    const bool col_clear = m[i][k] == 0.0 && m[j][k] == 0.0;
    if (row_clear || col_clear) {
      const int lo = std::min(i, j), hi = std::max(i, j);
      const auto rest = detail::eigenvalues_2x2(m[lo][lo], m[lo][hi], m[hi][lo], m[hi][hi]);
      ev = {std::complex<double>(m[k][k], 0.0), rest[0], rest[1]};
      detail::sort_by_real_part_desc(ev);
      return ev;
    }
  }

  double scale = 0.0;
  for (const auto& row : m)
    for (double x : row) scale = std::max(scale, std::abs(x));
  Matrix3 a = m;
  for (auto& row : a)
    for (double& x : row) x /= scale;

  const double trace = a[0][0] + a[1][1] + a[2][2];
  const double minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] -
                        a[0][2] * a[2][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                     a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  ev = detail::monic_cubic_roots(-trace, minors, -det);
  for (auto& x : ev) x *= scale;
  detail::sort_by_real_part_desc(ev);
  return ev;
}

}  // namespace keen

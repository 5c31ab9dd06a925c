#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "keen/errors.hpp"
#include "keen/model.hpp"

namespace keen {

/// Zero wage share and employment with a finite residual debt ratio.
struct TrivialDeflation {
  double d0 = 0.0;
  double pi0 = 0.0;  ///< 1 - r*d0
};

struct Interior {
  double omega1 = 0.0;
  double lambda1 = 0.0;
  double d1 = 0.0;
};

/// Zero wage share with any employment rate; exists only under a parameter coincidence.
struct LineSegment {
  double d1 = 0.0;
  double d_star = 0.0;                ///< debt ratio where the debt equation is stationary at omega = 0
  double coincidence_residual = 0.0;  ///< |1 - r*d1 - kappa^{-1}(nu(alpha+beta+delta))|
  double debt_gap = 0.0;              ///< |d1 - d_star|
};

/// Divergent debt ratio; only ever produced as a simulation outcome.
struct ExplosiveDebt {};

using EquilibriumKind = std::variant<TrivialDeflation, Interior, LineSegment, ExplosiveDebt>;

struct SearchInterval {
  double lo = -1000.0;
  double hi = 1000.0;
  int samples = 100000;
};

/// Left-hand side of the equation whose roots are the debt ratios of the
/// (0, 0, d) equilibria: d(r - kappa(1-rd)/nu + delta) + kappa(1-rd) - 1.
inline double origin_debt_residual(double d, const EconomyParams& p,
                                   const InvestmentFunction& kap) {
  const double investment = kap.eval(1.0 - p.r * d);
  return d * (p.r - investment / p.nu + p.delta) + investment - 1.0;
}

inline double origin_debt_residual_slope(double d, const EconomyParams& p,
                                         const InvestmentFunction& kap) {
  const double pi = 1.0 - p.r * d;
  const double investment = kap.eval(pi);
  const double slope = kap.prime(pi);
  return p.r + p.delta - investment / p.nu + p.r * slope * (d / p.nu - 1.0);
}

namespace detail {

inline double checked_residual(double d, const EconomyParams& p, const InvestmentFunction& kap) {
  const double f = origin_debt_residual(d, p, kap);
  if (!std::isfinite(f))
    throw NumericError("debt equilibrium residual is not finite at d=" + std::to_string(d));
  return f;
}

// Bisection down to 1e-6 width, then Newton with the analytic slope kept
// inside the bracket.
inline double refine_root(double lo, double hi, double f_lo, const EconomyParams& p,
                          const InvestmentFunction& kap) {
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = checked_residual(mid, p, kap);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double f = checked_residual(x, p, kap);
    if (std::abs(f) < 1e-12) break;
    if ((f < 0.0) == (f_lo < 0.0)) lo = x; else hi = x;
    const double slope = origin_debt_residual_slope(x, p, kap);
    double next = x - f / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (next == x) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Every sign-change bracketed root of the origin debt equation in `search`,
/// sorted ascending and deduplicated at 1e-8.
inline std::vector<double> find_d0_roots(const EconomyParams& p, const InvestmentFunction& kap,
                                         const SearchInterval& search = {}) {
  if (!std::isfinite(search.lo) || !std::isfinite(search.hi) || !(search.lo < search.hi))
    throw RangeError("debt root search interval must be finite and non-empty");
  if (search.samples < 100) throw RangeError("debt root search needs at least 100 samples");

  std::vector<double> roots;
  const double width = search.hi - search.lo;
  double x_prev = search.lo;
  double f_prev = detail::checked_residual(x_prev, p, kap);
  if (f_prev == 0.0) roots.push_back(x_prev);
  for (int i = 1; i <= search.samples; ++i) {
    const double x = i == search.samples ? search.hi : search.lo + width * i / search.samples;
    const double f = detail::checked_residual(x, p, kap);
    if (f == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      roots.push_back(detail::refine_root(x_prev, x, f_prev, p, kap));
    }
    x_prev = x;
    f_prev = f;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots)
    if (unique.empty() || r - unique.back() > 1e-8) unique.push_back(r);
  return unique;
}

inline TrivialDeflation make_trivial_deflation(double d0, const EconomyParams& p) {
  return {d0, 1.0 - p.r * d0};
}

/// The equilibrium with positive wage share and employment.
inline Interior interior_equilibrium(const EconomyParams& p, const PhillipsCurve& phi,
                                     const InvestmentFunction& kap) {
  const double breakeven = p.breakeven_investment();
  double profit = 0.0;
  try {
    profit = kap.inverse(breakeven);
  } catch (const RangeError& e) {
    throw RangeError(std::string(assumption::kappa_floor) + ": " + e.what());
  }
  double lambda1 = 0.0;
  try {
    lambda1 = phi.inverse(p.alpha);
  } catch (const RangeError& e) {
    throw RangeError(std::string(assumption::phillips_at_zero) + ": " + e.what());
  }
  const double d1 = (breakeven - profit) / (p.alpha + p.beta);
  return {1.0 - profit - p.r * d1, lambda1, d1};
}

inline LineSegment line_equilibrium_residuals(const EconomyParams& p,
                                              const InvestmentFunction& kap) {
  const double breakeven = p.breakeven_investment();
  const double profit = kap.inverse(breakeven);
  LineSegment seg;
  seg.d1 = (breakeven - profit) / (p.alpha + p.beta);
  seg.d_star = (breakeven - 1.0) / (p.alpha + p.beta - p.r);
  seg.coincidence_residual = std::abs(1.0 - p.r * seg.d1 - profit);
  seg.debt_gap = std::abs(seg.d1 - seg.d_star);
  return seg;
}

/// Reports the (0, lambda, d1) family only when both consistency conditions
/// hold strictly within `tol`; otherwise nullopt.
inline std::optional<LineSegment> line_equilibrium_check(const EconomyParams& p,
                                                         const PhillipsCurve& /*phi*/,
                                                         const InvestmentFunction& kap,
                                                         double tol) {
  const LineSegment seg = line_equilibrium_residuals(p, kap);
  if (seg.coincidence_residual < tol && seg.debt_gap < tol) return seg;
  return std::nullopt;
}

}  // namespace keen

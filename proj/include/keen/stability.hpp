#pragma once

#include <array>
#include <cmath>
#include <string>

#include "keen/equilibria.hpp"
#include "keen/errors.hpp"
#include "keen/linalg.hpp"
#include "keen/model.hpp"

namespace keen {

enum class Classification { Stable, Unstable, Marginal };
enum class SpectrumSource { ClosedFormOrigin, NumericGeneral };

inline constexpr double kMarginalTolerance = 1e-9;

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Stable: return "stable";
    case Classification::Unstable: return "unstable";
    case Classification::Marginal: return "marginal";
  }
  return "?";
}

inline const char* to_string(SpectrumSource s) {
  return s == SpectrumSource::ClosedFormOrigin ? "closed_form_origin" : "numeric_general";
}

struct StabilityReport {
  Spectrum3 eigenvalues{};
  Classification classification = Classification::Marginal;
  SpectrumSource source = SpectrumSource::NumericGeneral;
};

/// Stable when every real part is below -tol, unstable when any exceeds +tol.
inline StabilityReport classify(const Spectrum3& eigenvalues, SpectrumSource source,
                                double tol = kMarginalTolerance) {
  bool all_below = true;
  bool any_above = false;
  for (const auto& ev : eigenvalues) {
    if (!(ev.real() < -tol)) all_below = false;
    if (ev.real() > tol) any_above = true;
  }
  StabilityReport out{eigenvalues, Classification::Marginal, source};
  if (any_above) out.classification = Classification::Unstable;
  else if (all_below) out.classification = Classification::Stable;
  return out;
}

/// Closed-form Jacobian at (0, 0, d0). Lower triangular: only the diagonal
/// and the (debt, wage) entry are non-zero.
inline Matrix3 jacobian_at_origin(const EconomyParams& p, const PhillipsCurve& phi,
                                  const InvestmentFunction& kap, double d0) {
  const double residual = origin_debt_residual(d0, p, kap);
  if (!(std::abs(residual) < 1e-6))
    throw StaleRootError("d0=" + std::to_string(d0) +
                         " does not solve the debt equilibrium equation (residual " +
                         std::to_string(residual) + ")");
  const double pi0 = 1.0 - p.r * d0;
  const double investment = kap.eval(pi0);
  const double slope = kap.prime(pi0);
  Matrix3 j{};
  j[0][0] = phi.eval(0.0) - p.alpha;
  j[1][1] = (investment - p.breakeven_investment()) / p.nu;
  j[2][2] = (p.carrying_cost() - investment + p.r * (d0 - p.nu) * slope) / p.nu;
  j[2][0] = ((d0 - p.nu) * slope + p.nu) / p.nu;
  return j;
}

/// The three diagonal entries of the origin Jacobian, which are its exact
/// eigenvalues: wage decay, employment growth and debt relaxation rates.
inline std::array<double, 3> origin_eigenvalues(const EconomyParams& p, const PhillipsCurve& phi,
                                                const InvestmentFunction& kap, double d0) {
  const Matrix3 j = jacobian_at_origin(p, phi, kap, d0);
  return {j[0][0], j[1][1], j[2][2]};
}

inline StabilityReport origin_stability(const EconomyParams& p, const PhillipsCurve& phi,
                                        const InvestmentFunction& kap, double d0) {
  const auto ev = origin_eigenvalues(p, phi, kap, d0);
  return classify({std::complex<double>(ev[0]), std::complex<double>(ev[1]),
                   std::complex<double>(ev[2])},
                  SpectrumSource::ClosedFormOrigin);
}

/// Central-difference Jacobian of the vector field.
inline Matrix3 numeric_jacobian(const State& s, const EconomyParams& p, const PhillipsCurve& phi,
                                const InvestmentFunction& kap, double h = 1e-6) {
  if (!(h >= 1e-8 && h <= 1e-4))
    throw RangeError("finite-difference step must lie in [1e-8, 1e-4], got " + std::to_string(h));
  Matrix3 j{};
  const Vec3 base = s.as_array();
  for (int col = 0; col < 3; ++col) {
    Vec3 up = base, down = base;
    up[col] += h;
    down[col] -= h;
    const Vec3 f_up = keen_vector_field(State::from_array(up), p, phi, kap);
    const Vec3 f_down = keen_vector_field(State::from_array(down), p, phi, kap);
    for (int row = 0; row < 3; ++row) j[row][col] = (f_up[row] - f_down[row]) / (2.0 * h);
  }
  return j;
}

inline StabilityReport interior_stability(const Interior& eq, const EconomyParams& p,
                                          const PhillipsCurve& phi, const InvestmentFunction& kap,
                                          double h = 1e-6) {
  const Matrix3 j = numeric_jacobian({eq.omega1, eq.lambda1, eq.d1}, p, phi, kap, h);
  return classify(eigenvalues_3x3(j), SpectrumSource::NumericGeneral);
}

}  // namespace keen

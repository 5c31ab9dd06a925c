#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "keen/equilibria.hpp"
#include "keen/errors.hpp"
#include "keen/model.hpp"
#include "keen/stability.hpp"

// Synthesis of an exponential investment function whose (0, 0, d0)
// equilibrium has negative debt and is linearly stable, and the algebra of
// the locus where the employment and debt eigenvalues vanish together.

namespace keen {

namespace constraint {
inline constexpr const char* d0_below_bound = "d0_below_admissible_bound";
inline constexpr const char* floor_below_carrying_cost = "floor_below_carrying_cost";
inline constexpr const char* positive_exponential_part = "positive_exponential_part";
inline constexpr const char* negative_debt = "negative_debt";
inline constexpr const char* kappa2_above_bound = "kappa2_above_lower_bound";
}  // namespace constraint

/// Largest debt ratio for which the employment eigenvalue at (0, 0, d0) is
/// negative: (nu(alpha+beta+delta) - 1)/(alpha+beta-r). Negative whenever it
/// is defined.
inline double admissible_d0_bound(const EconomyParams& p) {
  const double breakeven = p.breakeven_investment();
  if (!(breakeven < 1.0))
    throw AssumptionError(assumption::breakeven_below_one,
                          "nu(alpha+beta+delta) = " + std::to_string(breakeven) +
                              " must be below 1");
  if (!(p.r < p.alpha + p.beta))
    throw AssumptionError(assumption::interest_below_growth,
                          "r = " + std::to_string(p.r) + " must be below alpha + beta = " +
                              std::to_string(p.alpha + p.beta));
  return (breakeven - 1.0) / (p.alpha + p.beta - p.r);
}

/// Investment share that makes d an equilibrium debt ratio at zero wages and
/// employment: (1 - d(r+delta))/(1 - d/nu).
inline double kappa_at_equilibrium(double d, const EconomyParams& p) {
  const double denom = 1.0 - d / p.nu;
  if (denom == 0.0) throw DomainError("equilibrium investment has a pole at d = nu");
  return (1.0 - d * (p.r + p.delta)) / denom;
}

/// Lower bound on kappa2 that makes the debt eigenvalue negative.
inline double kappa2_lower_bound(double c, double d0, const EconomyParams& p) {
  const double carrying = p.carrying_cost();
  if (!(c < carrying))
    throw ConstraintError(constraint::floor_below_carrying_cost, c,
                          "floor c = " + std::to_string(c) + " must be below nu(r+delta) = " +
                              std::to_string(carrying));
  if (!(d0 < 0.0))
    throw ConstraintError(constraint::negative_debt, d0,
                          "d0 = " + std::to_string(d0) + " must be negative");
  const double k0 = kappa_at_equilibrium(d0, p) - c;
  if (!(k0 > 0.0))
    throw ConstraintError(constraint::positive_exponential_part, k0,
                          "kappa(pi0) - c = " + std::to_string(k0) + " must be positive");
  return (c - carrying + k0) / (k0 * p.r * (d0 - p.nu));
}

/// Investment function with floor c and sensitivity kappa2 whose amplitude
/// places an origin equilibrium at d0. No regime checks beyond kappa1 > 0.
/// When kappa1 = k0*exp(-kappa2*pi0) is not a normal double the amplitude is
/// quoted at pi0 instead (shift = pi0).
inline InvestmentFunction realize_kappa(double d0, double c, double kappa2,
                                        const EconomyParams& p) {
  const double k0 = kappa_at_equilibrium(d0, p) - c;
  if (!(k0 > 0.0))
    throw ConstraintError(constraint::positive_exponential_part, k0,
                          "kappa(pi0) - c = " + std::to_string(k0) + " must be positive");
  const double pi0 = 1.0 - p.r * d0;
  const double kappa1 = k0 * std::exp(-kappa2 * pi0);
  if (std::isnormal(kappa1) && std::isfinite(std::exp(kappa2 * pi0))) return {c, kappa1, kappa2};
  return {c, k0, kappa2, pi0};
}

struct ConstructionCertificate {
  double d0 = 0.0;
  double d0_bound = 0.0;
  double c = 0.0;
  double kappa2 = 0.0;
  double kappa1 = 0.0;  ///< unshifted amplitude
  double shift = 0.0;   ///< nonzero when the built function quotes its amplitude at pi0
  double pi0 = 0.0;
  double kappa_at_pi0 = 0.0;
  double k0_at_pi0 = 0.0;
  double kappa2_lower_bound = 0.0;
  double residual = 0.0;  ///< debt-equation residual at d0 under the built function
  std::array<double, 3> eigenvalues{};
};

struct Construction {
  InvestmentFunction kappa;
  ConstructionCertificate certificate;
};

/// Builds kappa(x) = c + kappa1*exp(kappa2*x) so that (0, 0, d0) is a stable
/// equilibrium with negative debt. Every inadmissible input is rejected with a
/// named ConstraintError or AssumptionError; nothing is clamped.
inline Construction build_kappa(double d0, double c, double kappa2, const EconomyParams& p,
                                const PhillipsCurve& phi) {
  ConstructionCertificate cert;
  cert.d0 = d0;
  cert.c = c;
  cert.kappa2 = kappa2;
  cert.d0_bound = admissible_d0_bound(p);
  if (!(d0 < cert.d0_bound))
    throw ConstraintError(constraint::d0_below_bound, d0,
                          "d0 = " + std::to_string(d0) + " must be below the admissible bound " +
                              std::to_string(cert.d0_bound));
  cert.kappa2_lower_bound = kappa2_lower_bound(c, d0, p);
  const double threshold = std::max(0.0, cert.kappa2_lower_bound);
  if (!(kappa2 > threshold))
    throw ConstraintError(constraint::kappa2_above_bound, kappa2,
                          "kappa2 = " + std::to_string(kappa2) + " must exceed " +
                              std::to_string(threshold));

  cert.pi0 = 1.0 - p.r * d0;
  cert.kappa_at_pi0 = kappa_at_equilibrium(d0, p);
  cert.k0_at_pi0 = cert.kappa_at_pi0 - c;
  const InvestmentFunction kap = realize_kappa(d0, c, kappa2, p);
  cert.kappa1 = kap.unshifted_kappa1();
  cert.shift = kap.shift;
  cert.residual = origin_debt_residual(d0, p, kap);
  cert.eigenvalues = origin_eigenvalues(p, phi, kap, d0);
  for (double ev : cert.eigenvalues)
    if (!(ev < 0.0))
      throw NumericError("constructed equilibrium has a non-negative eigenvalue " +
                         std::to_string(ev));
  return {kap, cert};
}

/// Coefficients of a*B^2 + b*B + c0 = 0 in B = nu(alpha+beta+delta), obtained
/// by substituting d = (1-B)/(r+delta) into the double-zero conditions.
struct DoubleZeroQuadratic {
  double a = 0.0;
  double b = 0.0;
  double c0 = 0.0;
  double carrying = 0.0;  ///< A = nu(r+delta)
  double scale = 0.0;     ///< r*kappa2/(r+delta)
  double r_plus_delta = 0.0;

  double discriminant() const { return b * b - 4.0 * a * c0; }

  /// Real roots, ascending. A vanishing leading coefficient gives the linear root.
  std::vector<double> real_roots() const {
    if (a == 0.0) {
      if (b == 0.0) return {};
      return {-c0 / b};
    }
    const double disc = discriminant();
    if (disc < 0.0) return {};
    const double s = std::sqrt(disc);
    const double big = -0.5 * (b + std::copysign(s, b));
    std::vector<double> roots{big / a};
    if (big != 0.0) roots.push_back(c0 / big);
    std::sort(roots.begin(), roots.end());
    return roots;
  }

  /// Debt ratio paired with a root B by the substitution above.
  double debt_for(double B) const { return (1.0 - B) / r_plus_delta; }
};

inline DoubleZeroQuadratic double_zero_quadratic(double c, double kappa2, const EconomyParams& p) {
  const double rd = p.r + p.delta;
  if (rd == 0.0) throw DomainError("double-zero quadratic is degenerate for r + delta = 0");
  DoubleZeroQuadratic q;
  q.r_plus_delta = rd;
  q.carrying = p.nu * rd;
  q.scale = p.r * kappa2 / rd;
  const double A = q.carrying;
  q.a = -q.scale;
  q.b = -1.0 + q.scale * (1.0 - A) + q.scale * c;
  q.c0 = A - q.scale * (1.0 - A) * c;
  return q;
}

/// The double-zero conditions with the debt ratio eliminated exactly:
/// (A - B)^2 + r*nu*kappa2*(1 - A)*(B - c) = 0, paired with
/// d = nu(1 - B)/(A - B).
struct DoubleZeroExact {
  double carrying = 0.0;
  double linear = 0.0;  ///< coefficient of B in the monic form
  double constant = 0.0;
  double nu = 0.0;

  double discriminant() const { return linear * linear - 4.0 * constant; }
  std::vector<double> real_roots() const {
    const double disc = discriminant();
    if (disc < 0.0) return {};
    const double s = std::sqrt(disc);
    const double big = -0.5 * (linear + std::copysign(s, linear));
    std::vector<double> roots{big};
    if (big != 0.0) roots.push_back(constant / big);
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  double debt_for(double B) const {
    if (B == carrying) throw DomainError("double-zero debt ratio is undefined at B = nu(r+delta)");
    return nu * (1.0 - B) / (carrying - B);
  }
};

inline DoubleZeroExact double_zero_exact(double c, double kappa2, const EconomyParams& p) {
  DoubleZeroExact q;
  q.nu = p.nu;
  q.carrying = p.carrying_cost();
  const double s = p.r * p.nu * kappa2 * (1.0 - q.carrying);
  q.linear = -2.0 * q.carrying + s;
  q.constant = q.carrying * q.carrying - s * c;
  return q;
}

/// Economy and investment function realizing a double-zero candidate: the
/// growth rate alpha is shifted so that nu(alpha+beta+delta) = B, and kappa is
/// realized with an origin equilibrium at `debt`.
struct DoubleZeroRealization {
  EconomyParams economy;
  InvestmentFunction kappa;
  double debt = 0.0;
};

inline DoubleZeroRealization realize_double_zero(double c, double kappa2, double B, double debt,
                                                 const EconomyParams& p) {
  DoubleZeroRealization out;
  out.economy = p;
  out.economy.alpha = B / p.nu - p.delta - p.beta;
  out.kappa = realize_kappa(debt, c, kappa2, out.economy);
  out.debt = debt;
  return out;
}

enum class ClosedFormBranch {
  ClosedForm,             ///< bounds on c evaluated
  OneMinusANonPositive,   ///< 1 - nu(r+delta) <= 0: reported always true
  NegativeRadicand,       ///< 1 - 2nu(r+delta) < 0: inequality holds vacuously
};

inline const char* to_string(ClosedFormBranch b) {
  switch (b) {
    case ClosedFormBranch::ClosedForm: return "closed_form";
    case ClosedFormBranch::OneMinusANonPositive: return "one_minus_A_nonpositive";
    case ClosedFormBranch::NegativeRadicand: return "negative_radicand";
  }
  return "?";
}

struct DoubleZeroQuery {
  double A = 0.0;
  double one_minus_A = 0.0;
  double one_minus_2A = 0.0;
  DoubleZeroQuadratic quadratic;
  std::vector<double> B_roots;
  double discriminant = 0.0;
  bool numeric_condition_met = false;

  ClosedFormBranch closed_branch = ClosedFormBranch::ClosedForm;
  double closed_discriminant = 0.0;  ///< discriminant behind the closed-form bounds
  double closed_c_upper = 0.0;       ///< c >= this satisfies the closed form
  double closed_c_lower = 0.0;       ///< c <= this satisfies the closed form
  bool closed_condition_met = false;

  DoubleZeroExact exact;
  std::vector<double> exact_B_roots;
  bool exact_condition_met = false;
};

/// Necessary condition for the employment and debt eigenvalues at the origin
/// to vanish together. The direct discriminant, the closed-form bounds on c
/// and the exactly eliminated system are reported side by side.
inline DoubleZeroQuery double_zero_necessary(double c, double kappa2, const EconomyParams& p) {
  if (!(kappa2 > 0.0))
    throw DomainError("double-zero condition requires kappa2 > 0, got " + std::to_string(kappa2));
  DoubleZeroQuery q;
  q.quadratic = double_zero_quadratic(c, kappa2, p);
  q.A = q.quadratic.carrying;
  q.one_minus_A = 1.0 - q.A;
  q.one_minus_2A = 1.0 - 2.0 * q.A;
  q.discriminant = q.quadratic.discriminant();
  q.B_roots = q.quadratic.real_roots();
  q.numeric_condition_met = !q.B_roots.empty();

  const double s = q.quadratic.scale;
  q.closed_discriminant =
      q.quadratic.b * q.quadratic.b - 4.0 * s * s * q.one_minus_2A * c;
  if (q.one_minus_A <= 0.0) {
    q.closed_branch = ClosedFormBranch::OneMinusANonPositive;
    q.closed_condition_met = true;
  } else if (q.one_minus_2A < 0.0) {
    q.closed_branch = ClosedFormBranch::NegativeRadicand;
    q.closed_condition_met = true;
  } else {
    const double half_width =
        2.0 * std::sqrt(q.quadratic.r_plus_delta * q.one_minus_2A / (p.r * kappa2));
    q.closed_c_upper = half_width + q.one_minus_A;
    q.closed_c_lower = -half_width + q.one_minus_A;
    q.closed_condition_met = c >= q.closed_c_upper || c <= q.closed_c_lower;
  }

  q.exact = double_zero_exact(c, kappa2, p);
  q.exact_B_roots = q.exact.real_roots();
  q.exact_condition_met =
      std::any_of(q.exact_B_roots.begin(), q.exact_B_roots.end(), [c](double B) { return B > c; });
  return q;
}

}  // namespace keen

#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "keen/errors.hpp"

namespace keen {

using Vec3 = std::array<double, 3>;
using Vec2 = std::array<double, 2>;

/// Structural rates of the economy. All rates are per year.
struct EconomyParams {
  double nu = 0.0;      ///< capital-to-output ratio (years)
  double alpha = 0.0;   ///< productivity growth
  double beta = 0.0;    ///< labor-force growth
  double delta = 0.0;   ///< depreciation
  double r = 0.0;       ///< real interest rate

  /// Growth-adjusted break-even investment share, nu*(alpha+beta+delta).
  double breakeven_investment() const { return nu * (alpha + beta + delta); }
  /// nu*(r+delta), the capital cost of carrying debt.
  double carrying_cost() const { return nu * (r + delta); }

  bool well_formed() const {
    return std::isfinite(nu) && std::isfinite(alpha) && std::isfinite(beta) &&
           std::isfinite(delta) && std::isfinite(r) && nu > 0.0 && delta >= 0.0 &&
           alpha + beta > 0.0;
  }
};

/// Wage-bargaining curve. Closed over the two forms the model uses.
struct PhillipsCurve {
  enum class Kind { Linear, Rational };

  Kind kind = Kind::Rational;
  double phi0 = 0.0;
  double phi1 = 0.0;

  /// Phi(lambda) = -phi0 + phi1*lambda
  static PhillipsCurve linear(double phi0, double phi1) {
    return {Kind::Linear, phi0, phi1};
  }
  /// Phi(lambda) = phi1/(1-lambda)^2 - phi0, for lambda < 1
  static PhillipsCurve rational(double phi0, double phi1) {
    return {Kind::Rational, phi0, phi1};
  }

  double eval(double lambda) const {
    if (kind == Kind::Linear) return -phi0 + phi1 * lambda;
    check_domain(lambda);
    const double gap = 1.0 - lambda;
    return phi1 / (gap * gap) - phi0;
  }

  double derivative(double lambda) const {
    if (kind == Kind::Linear) return phi1;
    check_domain(lambda);
    const double gap = 1.0 - lambda;
    return 2.0 * phi1 / (gap * gap * gap);
  }

  /// Employment rate at which the curve takes the value `y`.
  double inverse(double y) const {
    if (kind == Kind::Linear) {
      if (!std::isfinite(y)) throw RangeError("phillips inverse: non-finite argument");
      return (y + phi0) / phi1;
    }
    // lambda = 1 - sqrt(phi1/(y+phi0)), restricted to [0, 1)
    const double shifted = y + phi0;
    if (!(shifted > 0.0) || !std::isfinite(shifted))
      throw RangeError("phillips inverse: value " + std::to_string(y) +
                       " is not attained on [0, 1)");
    const double lambda = 1.0 - std::sqrt(phi1 / shifted);
    if (lambda < 0.0)
      throw RangeError("phillips inverse: value " + std::to_string(y) +
                       " lies below the curve's value at zero employment");
    return lambda;
  }

  /// True when `lambda` reaches the rational curve's singularity.
  bool outside_domain(double lambda) const {
    return kind == Kind::Rational && !(lambda < 1.0);
  }

 private:
  void check_domain(double lambda) const {
    if (outside_domain(lambda))
      throw DomainError("rational phillips curve evaluated at lambda=" +
                        std::to_string(lambda) + " (domain is lambda < 1)");
  }
};

/// Investment share kappa(x) = c + kappa1*exp(kappa2*(x - shift)) of net
/// profit x. The usual form has shift = 0; a nonzero shift quotes the
/// amplitude at another profit level when exp(kappa2*x) leaves the range of
/// a double.
struct InvestmentFunction {
  double c = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double shift = 0.0;

  /// The part above the floor.
  double exponential_part(double x) const { return kappa1 * std::exp(kappa2 * (x - shift)); }
  double eval(double x) const { return c + exponential_part(x); }
  double prime(double x) const { return kappa2 * exponential_part(x); }

  /// Net profit at which investment equals `y`; requires y > c.
  double inverse(double y) const {
    if (!(y > c))
      throw RangeError("investment inverse: value " + std::to_string(y) +
                       " does not exceed the floor c=" + std::to_string(c));
    return shift + std::log((y - c) / kappa1) / kappa2;
  }

  /// Amplitude in the unshifted form (may under- or overflow).
  double unshifted_kappa1() const { return kappa1 * std::exp(-kappa2 * shift); }

  /// Limit of kappa as profit goes to minus infinity (for kappa2 > 0).
  double floor() const { return c; }
};

/// Intensive state: wage share, employment rate and debt ratio.
struct State {
  double omega = 0.0;
  double lambda = 0.0;
  double d = 0.0;

  Vec3 as_array() const { return {omega, lambda, d}; }
  static State from_array(const Vec3& v) { return {v[0], v[1], v[2]}; }
  bool finite() const {
    return std::isfinite(omega) && std::isfinite(lambda) && std::isfinite(d);
  }
};

/// Net profit share 1 - omega - r*d.
inline double net_profit(const State& s, const EconomyParams& p) {
  return 1.0 - s.omega - p.r * s.d;
}

/// Right-hand side of the three-dimensional wage/employment/debt system.
inline Vec3 keen_vector_field(const State& s, const EconomyParams& p,
                              const PhillipsCurve& phi, const InvestmentFunction& kap) {
  const double pi = net_profit(s, p);
  const double investment = kap.eval(pi);
  const double omega_dot = s.omega * (phi.eval(s.lambda) - p.alpha);
  const double lambda_dot =
      s.lambda * (investment / p.nu - p.alpha - p.beta - p.delta);
  const double d_dot =
      s.d * (p.r - investment / p.nu + p.delta) + investment - (1.0 - s.omega);
  return {omega_dot, lambda_dot, d_dot};
}

/// Two-dimensional Goodwin cycle with a linear Phillips curve.
inline Vec2 goodwin_vector_field(double omega, double lambda, const EconomyParams& p,
                                 double phi0, double phi1) {
  return {omega * (-phi0 + phi1 * lambda - p.alpha),
          lambda * ((1.0 - omega) / p.nu - p.alpha - p.beta - p.delta)};
}

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const AssumptionCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace assumption {
inline constexpr const char* economy_well_formed = "economy_well_formed";
inline constexpr const char* phillips_well_formed = "phillips_well_formed";
inline constexpr const char* kappa_smooth = "kappa_continuously_differentiable";
inline constexpr const char* kappa_increasing = "kappa_increasing";
inline constexpr const char* kappa_floor = "kappa_floor_below_breakeven";
inline constexpr const char* kappa_tail = "kappa_tail_decay";
inline constexpr const char* phillips_increasing = "phillips_increasing";
inline constexpr const char* phillips_at_zero = "phillips_at_zero_below_productivity";
inline constexpr const char* breakeven_below_one = "breakeven_investment_below_one";
inline constexpr const char* interest_below_growth = "interest_below_growth";
}  // namespace assumption

/// Checks every structural assumption; failures are entries, never exceptions.
inline AssumptionReport validate_assumptions(const EconomyParams& p, const PhillipsCurve& phi,
                                             const InvestmentFunction& kap) {
  AssumptionReport report;
  auto add = [&](const char* name, bool ok, std::string detail) {
    report.checks.push_back({name, ok, std::move(detail)});
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  add(assumption::economy_well_formed, p.well_formed(),
      "nu > 0, delta >= 0, alpha + beta > 0, all finite");
  add(assumption::phillips_well_formed,
      std::isfinite(phi.phi0) && std::isfinite(phi.phi1) && phi.phi0 > 0.0 && phi.phi1 > 0.0,
      "phi0 > 0 and phi1 > 0");

  const bool kappa_finite =
      std::isfinite(kap.c) && std::isfinite(kap.kappa1) && std::isfinite(kap.kappa2) &&
      std::isfinite(kap.shift);
  add(assumption::kappa_smooth, kappa_finite, "exponential family is smooth for finite coefficients");
  add(assumption::kappa_increasing, kappa_finite && kap.kappa1 > 0.0 && kap.kappa2 > 0.0,
      "kappa1 = " + num(kap.kappa1) + ", kappa2 = " + num(kap.kappa2) + " must both be positive");

  const double breakeven = p.breakeven_investment();
  add(assumption::kappa_floor, kap.c < breakeven,
      "floor c = " + num(kap.c) + " must be below nu(alpha+beta+delta) = " + num(breakeven));
  add(assumption::kappa_tail, kap.kappa2 > 0.0,
      "pi^2 kappa'(pi) -> 0 at -inf holds automatically for exponential kappa with kappa2 > 0");

  // Both curve forms have phi1 as the sign of their slope.
  add(assumption::phillips_increasing, phi.phi1 > 0.0, "phillips slope sign follows phi1");
  const double phi_zero = phi.eval(0.0);
  add(assumption::phillips_at_zero, phi_zero < p.alpha,
      "Phi(0) = " + num(phi_zero) + " must be below alpha = " + num(p.alpha));

  add(assumption::breakeven_below_one, breakeven < 1.0,
      "nu(alpha+beta+delta) = " + num(breakeven) + " must be below 1");
  add(assumption::interest_below_growth, p.r < p.alpha + p.beta,
      "r = " + num(p.r) + " must be below alpha + beta = " + num(p.alpha + p.beta));
  return report;
}

}  // namespace keen

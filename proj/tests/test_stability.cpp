#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "keen/equilibria.hpp"
#include "keen/stability.hpp"
#include "oracles.hpp"

using namespace keen;
using namespace keen::testing;

namespace {

double root() { return find_d0_roots(example_economy(), example_kappa())[0]; }

double max_abs_diff(const Matrix3& a, const Matrix3& b) {
  double m = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

}  // namespace

TEST(OriginJacobian, WageEntry) {
  const auto j = jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), root());
  EXPECT_NEAR(j[0][0], -0.0900, 1e-12);
}

TEST(OriginJacobian, StructuralZeros) {
  const auto j = jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), root());
  EXPECT_EQ(j[0][1], 0.0);
  EXPECT_EQ(j[0][2], 0.0);
  EXPECT_EQ(j[1][0], 0.0);
  EXPECT_EQ(j[1][2], 0.0);
  EXPECT_EQ(j[2][1], 0.0);
}

TEST(OriginJacobian, MatchesFiniteDifferences) {
  const double d0 = root();
  const auto closed = jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), d0);
  const auto fd = numeric_jacobian({0, 0, d0}, example_economy(), example_phillips(),
                                   example_kappa(), 1e-5);
  EXPECT_LT(max_abs_diff(closed, fd), 1e-6);
}

TEST(OriginJacobian, StaleRootRejected) {
  EXPECT_THROW(jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), -9.0),
               StaleRootError);
}

TEST(OriginEigenvalues, WorkedExample) {
  const auto ev = origin_eigenvalues(example_economy(), example_phillips(), example_kappa(), root());
  EXPECT_NEAR(ev[0], -0.0900, 1e-6);
  EXPECT_LT(ev[1], 0.0);
  EXPECT_LT(std::abs(ev[1]), 1e-3);
  EXPECT_LT(ev[2], 0.0);
  EXPECT_NEAR(ev[1], kEmploymentEigenvalue, 1e-12);
  EXPECT_NEAR(ev[2], kDebtEigenvalue, 1e-12);
  const auto direct = origin_rates_direct(example_economy(), example_kappa(), root());
  EXPECT_NEAR(ev[1], direct[0], 1e-15);
  EXPECT_NEAR(ev[2], direct[1], 1e-15);
}

TEST(OriginEigenvalues, AgreeWithGeneralSolver) {
  const double d0 = root();
  const auto ev = origin_eigenvalues(example_economy(), example_phillips(), example_kappa(), d0);
  const auto general =
      eigenvalues_3x3(jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), d0));
  std::array<double, 3> sorted = ev;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(general[k].real(), sorted[k], 1e-9);
}

TEST(OriginEigenvalues, RandomDrawsTriangularAndSigned) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  while (checked < 1000) {
    EconomyParams p{1 + 4 * u(rng), 0.01 + 0.09 * u(rng), 0.01 + 0.09 * u(rng),
                    0.01 + 0.19 * u(rng), 0.1 * u(rng)};
    const InvestmentFunction kap{0.5 * u(rng), 0.01 + 0.2 * u(rng), 0.1 + 2 * u(rng)};
    const auto phi = PhillipsCurve::rational(0.02 + 0.05 * u(rng), 1e-5 + 1e-3 * u(rng));
    std::vector<double> roots;
    try {
      roots = find_d0_roots(p, kap, {-200, 200, 2000});
    } catch (const NumericError&) {
      continue;
    }
    for (double d0 : roots) {
      const auto j = jacobian_at_origin(p, phi, kap, d0);
      EXPECT_EQ(j[0][1], 0.0);
      EXPECT_EQ(j[0][2], 0.0);
      EXPECT_EQ(j[1][0], 0.0);
      EXPECT_EQ(j[1][2], 0.0);
      EXPECT_EQ(j[2][1], 0.0);
      if (validate_assumptions(p, phi, kap).find(assumption::phillips_at_zero)->passed) {
        EXPECT_LT(j[0][0], 0.0);
      }
      const auto general = eigenvalues_3x3(j);
      std::array<double, 3> diag{j[0][0], j[1][1], j[2][2]};
      std::sort(diag.begin(), diag.end(), std::greater<>());
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(general[k].real(), diag[k], 1e-12);
      ++checked;
    }
  }
}

TEST(NumericJacobian, ExactOnAffineField) {
  // kappa2 -> tiny makes investment affine to within rounding; Phillips linear
  const EconomyParams p{2.0, 0.02, 0.01, 0.05, 0.0};
  const InvestmentFunction kap{0.1, 0.2, 1e-9};
  const auto phi = PhillipsCurve::linear(0.03, 0.2);
  const State s{0.4, 0.6, 1.5};
  const auto j = numeric_jacobian(s, p, phi, kap, 1e-4);
  // exact partials of the quadratic field
  const double k = kap.eval(net_profit(s, p));
  EXPECT_NEAR(j[0][0], phi.eval(s.lambda) - p.alpha, 1e-10);
  EXPECT_NEAR(j[0][1], s.omega * phi.phi1, 1e-10);
  EXPECT_NEAR(j[1][1], k / p.nu - p.alpha - p.beta - p.delta, 1e-10);
  EXPECT_NEAR(j[2][0], 1.0, 1e-9);
  EXPECT_NEAR(j[2][2], p.r - k / p.nu + p.delta, 1e-9);
}

TEST(NumericJacobian, SecondOrderConvergence) {
  const double d0 = root();
  const auto closed = jacobian_at_origin(example_economy(), example_phillips(), example_kappa(), d0);
  auto err = [&](double h) {
    return max_abs_diff(closed, numeric_jacobian({0, 0, d0}, example_economy(), example_phillips(),
                                                 example_kappa(), h));
  };
  const double e1 = err(1e-4), e2 = err(5e-5);
  EXPECT_GT(e1 / e2, 3.5);
  EXPECT_LT(e1 / e2, 4.5);
}

TEST(NumericJacobian, StepOutOfRange) {
  EXPECT_THROW(numeric_jacobian({0, 0, 0}, example_economy(), example_phillips(), example_kappa(), 1e-3),
               RangeError);
  EXPECT_THROW(numeric_jacobian({0, 0, 0}, example_economy(), example_phillips(), example_kappa(), 1e-9),
               RangeError);
}

TEST(Classify, WorkedExampleStable) {
  const auto rep = origin_stability(example_economy(), example_phillips(), example_kappa(), root());
  EXPECT_EQ(rep.classification, Classification::Stable);
  EXPECT_EQ(rep.source, SpectrumSource::ClosedFormOrigin);
}

TEST(Classify, Marginal) {
  EXPECT_EQ(classify({-1.0, 0.0, -2.0}, SpectrumSource::NumericGeneral).classification,
            Classification::Marginal);
}

TEST(Classify, Unstable) {
  EXPECT_EQ(classify({0.1, -1.0, -1.0}, SpectrumSource::NumericGeneral).classification,
            Classification::Unstable);
}

TEST(Classify, PositiveRootIsUnstable) {
  const double d0 = find_d0_roots(example_economy(), example_kappa())[1];
  EXPECT_EQ(origin_stability(example_economy(), example_phillips(), example_kappa(), d0).classification,
            Classification::Unstable);
}

TEST(Classify, InteriorUsesGeneralSolver) {
  const auto eq = interior_equilibrium(example_economy(), example_phillips(), example_kappa());
  const auto rep = interior_stability(eq, example_economy(), example_phillips(), example_kappa());
  EXPECT_EQ(rep.source, SpectrumSource::NumericGeneral);
}

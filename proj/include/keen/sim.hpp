#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "keen/construct.hpp"
#include "keen/equilibria.hpp"
#include "keen/errors.hpp"
#include "keen/model.hpp"
#include "keen/ode.hpp"
#include "keen/parallel.hpp"
#include "keen/stability.hpp"

namespace keen {

struct IntegratorConfig {
  ode::Method method = ode::Method::AdaptiveRK45;
  double step = 0.01;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double min_step = 1e-12;
  double max_step = 0.0;  ///< 0 means sample_interval
  double t_end = 100.0;   ///< years
  double sample_interval = 1.0;
  double d_explode = 1e6;
  double eq_tol = 1e-8;
  /// Largest state distance at which a converged run is attributed to a
  /// known equilibrium.
  double match_radius = 1e-2;
  int converge_samples = 5;

  double effective_max_step() const { return max_step > 0.0 ? max_step : sample_interval; }

  void validate() const {
    auto fail = [](const std::string& what) { throw RangeError("integrator: " + what); };
    if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end must be positive and finite");
    if (!(sample_interval > 0.0)) fail("sample_interval must be positive");
    if (!(d_explode > 0.0)) fail("d_explode must be positive");
    if (!(eq_tol > 0.0)) fail("eq_tol must be positive");
    if (converge_samples < 1) fail("converge_samples must be at least 1");
    if (method == ode::Method::FixedRK4) {
      if (!(step > 0.0)) fail("fixed step must be positive");
    } else {
      if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) fail("rel_tol must lie in (0, 1e-3]");
      if (!(abs_tol > 0.0)) fail("abs_tol must be positive");
      if (!(min_step > 0.0 && min_step < effective_max_step()))
        fail("min_step must be positive and below max_step");
    }
  }

  ode::StepControl step_control() const {
    return {method, step, rel_tol, abs_tol, min_step, effective_max_step()};
  }
};

struct Termination {
  enum class Kind { ReachedTEnd, ConvergedTo, ExplosiveDebt, DomainExit };
  Kind kind = Kind::ReachedTEnd;
  int equilibrium = -1;        ///< index into the known equilibria, -1 when unmatched
  std::string equilibrium_id;  ///< empty when unmatched
  double distance = std::numeric_limits<double>::quiet_NaN();

  std::string label() const {
    switch (kind) {
      case Kind::ReachedTEnd: return "reached_t_end";
      case Kind::ConvergedTo:
        return equilibrium >= 0 ? "converged:" + equilibrium_id : "converged:unmatched";
      case Kind::ExplosiveDebt: return "explosive_debt";
      case Kind::DomainExit: return "domain_exit";
    }
    return "?";
  }
};

struct KnownEquilibrium {
  std::string id;
  State point;
};

/// Equilibria a converging run can be attributed to: every located origin
/// root ("origin_<k>", ascending debt) and the interior point when it exists.
inline std::vector<KnownEquilibrium> known_equilibria(const EconomyParams& p,
                                                      const PhillipsCurve& phi,
                                                      const InvestmentFunction& kap,
                                                      const SearchInterval& search = {}) {
  std::vector<KnownEquilibrium> out;
  const auto roots = find_d0_roots(p, kap, search);
  for (std::size_t k = 0; k < roots.size(); ++k)
    out.push_back({"origin_" + std::to_string(k), {0.0, 0.0, roots[k]}});
  try {
    const Interior eq = interior_equilibrium(p, phi, kap);
    const State s{eq.omega1, eq.lambda1, eq.d1};
    if (s.finite() && !phi.outside_domain(s.lambda)) out.push_back({"interior", s});
  } catch (const RangeError&) {
  }
  return out;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  Termination termination;
  ode::Stats stats;
};

namespace detail {

inline double distance(const State& a, const State& b) {
  return std::hypot(a.omega - b.omega, a.lambda - b.lambda, a.d - b.d);
}

inline double norm(const Vec3& v) { return std::hypot(v[0], v[1], v[2]); }

}  // namespace detail

/// Integrates the wage/employment/debt system from `s0`, sampling every
/// `cfg.sample_interval` years. Stops on divergent debt, on leaving the
/// Phillips curve's domain, or once the field norm stays below eq_tol for
/// `converge_samples` consecutive samples.
inline Trajectory integrate(const State& s0, const EconomyParams& p, const PhillipsCurve& phi,
                            const InvestmentFunction& kap, const IntegratorConfig& cfg,
                            const std::vector<KnownEquilibrium>& known) {
  cfg.validate();
  if (!s0.finite()) throw DomainError("initial state is not finite");
  if (phi.outside_domain(s0.lambda))
    throw DomainError("initial employment rate lies outside the Phillips curve's domain");

  Trajectory traj;
  int quiet = 0;
  auto field = [&](const Vec3& y) { return keen_vector_field(State::from_array(y), p, phi, kap); };
  auto observe = [&](double t, const Vec3& y) {
    const State s = State::from_array(y);
    traj.times.push_back(t);
    traj.states.push_back(s);
    if (std::abs(s.d) > cfg.d_explode) {
      traj.termination.kind = Termination::Kind::ExplosiveDebt;
      return false;
    }
    if (phi.outside_domain(s.lambda)) {
      traj.termination.kind = Termination::Kind::DomainExit;
      return false;
    }
    quiet = detail::norm(field(y)) < cfg.eq_tol ? quiet + 1 : 0;
    if (quiet >= cfg.converge_samples) {
      Termination& term = traj.termination;
      term.kind = Termination::Kind::ConvergedTo;
      for (std::size_t k = 0; k < known.size(); ++k) {
        const double dist = detail::distance(s, known[k].point);
        if (!(dist >= term.distance)) {
          term.distance = dist;
          term.equilibrium = static_cast<int>(k);
        }
      }
      if (term.equilibrium >= 0 && term.distance <= cfg.match_radius) {
        term.equilibrium_id = known[term.equilibrium].id;
      } else {
        term.equilibrium = -1;
      }
      return false;
    }
    return true;
  };

  try {
    ode::integrate_sampled<3>(field, s0.as_array(), cfg.t_end, cfg.sample_interval,
                              cfg.step_control(), observe, &traj.stats);
  } catch (const DomainError&) {
    traj.termination.kind = Termination::Kind::DomainExit;
  }
  return traj;
}

inline Trajectory integrate(const State& s0, const EconomyParams& p, const PhillipsCurve& phi,
                            const InvestmentFunction& kap, const IntegratorConfig& cfg) {
  return integrate(s0, p, phi, kap, cfg, known_equilibria(p, phi, kap));
}

/// Conserved quantity of the Goodwin cycle:
/// omega/nu - (1/nu - alpha-beta-delta) ln(omega) + phi1*lambda - (phi0+alpha) ln(lambda).
inline double goodwin_conserved(double omega, double lambda, const EconomyParams& p, double phi0,
                                double phi1) {
  const double growth = p.alpha + p.beta + p.delta;
  return omega / p.nu - (1.0 / p.nu - growth) * std::log(omega) + phi1 * lambda -
         (phi0 + p.alpha) * std::log(lambda);
}

/// Interior rest point (omega*, lambda*) of the Goodwin cycle.
inline Vec2 goodwin_equilibrium(const EconomyParams& p, double phi0, double phi1) {
  return {1.0 - p.nu * (p.alpha + p.beta + p.delta), (phi0 + p.alpha) / phi1};
}

struct GoodwinTrajectory {
  std::vector<double> times;
  std::vector<double> omega;
  std::vector<double> lambda;
  std::vector<double> conserved;
  Termination termination;
  ode::Stats stats;
};

inline GoodwinTrajectory integrate_goodwin(double omega0, double lambda0, const EconomyParams& p,
                                           double phi0, double phi1,
                                           const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(omega0 > 0.0) || !(lambda0 > 0.0))
    throw DomainError("Goodwin cycle needs positive initial wage share and employment");
  GoodwinTrajectory traj;
  auto field = [&](const Vec2& y) { return goodwin_vector_field(y[0], y[1], p, phi0, phi1); };
  auto observe = [&](double t, const Vec2& y) {
    traj.times.push_back(t);
    traj.omega.push_back(y[0]);
    traj.lambda.push_back(y[1]);
    traj.conserved.push_back(goodwin_conserved(y[0], y[1], p, phi0, phi1));
    return true;
  };
  ode::integrate_sampled<2>(field, Vec2{omega0, lambda0}, cfg.t_end, cfg.sample_interval,
                            cfg.step_control(), observe, &traj.stats);
  return traj;
}

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;

  double value(int i) const { return count == 1 ? lo : lo + (hi - lo) * i / (count - 1); }
};

struct BasinGrid {
  GridAxis omega, lambda, d;
  std::size_t size() const {
    return static_cast<std::size_t>(omega.count) * lambda.count * d.count;
  }
};

struct BasinPoint {
  State start;
  std::string label;
  Termination termination;
  State final_state;
};

struct BasinResult {
  std::vector<BasinPoint> points;  ///< omega outermost, d innermost
  std::map<std::string, std::size_t> counts;
};

/// Labels every grid start by how its trajectory terminates. Per-point
/// failures become labels; points run concurrently but results keep grid order.
inline BasinResult basin_sample(const BasinGrid& grid, const EconomyParams& p,
                                const PhillipsCurve& phi, const InvestmentFunction& kap,
                                const IntegratorConfig& cfg, const SearchInterval& search = {}) {
  for (const GridAxis* axis : {&grid.omega, &grid.lambda, &grid.d})
    if (axis->count < 1 || !std::isfinite(axis->lo) || !std::isfinite(axis->hi))
      throw RangeError("basin grid axes need finite bounds and at least one point");
  if (grid.size() > 1000000) throw RangeError("basin grid is limited to 10^6 points");
  cfg.validate();

  const auto known = known_equilibria(p, phi, kap, search);
  BasinResult result;
  result.points.resize(grid.size());
  parallel_for(grid.size(), [&](std::size_t idx) {
    const int k = static_cast<int>(idx % grid.d.count);
    const int j = static_cast<int>((idx / grid.d.count) % grid.lambda.count);
    const int i = static_cast<int>(idx / (static_cast<std::size_t>(grid.d.count) * grid.lambda.count));
    BasinPoint& pt = result.points[idx];
    pt.start = {grid.omega.value(i), grid.lambda.value(j), grid.d.value(k)};
    try {
      const Trajectory traj = integrate(pt.start, p, phi, kap, cfg, known);
      pt.termination = traj.termination;
      pt.label = traj.termination.label();
      pt.final_state = traj.states.back();
    } catch (const DomainError&) {
      pt.termination.kind = Termination::Kind::DomainExit;
      pt.label = pt.termination.label();
      pt.final_state = pt.start;
    } catch (const Error&) {
      pt.label = "numeric_failure";
      pt.final_state = pt.start;
    }
  });
  for (const auto& pt : result.points) ++result.counts[pt.label];
  return result;
}

/// Request to synthesize kappa from a target negative-debt equilibrium.
struct KappaBuildRequest {
  double d0 = 0.0;
  double c = 0.0;
  double kappa2 = 0.0;
};

using KappaSpec = std::variant<InvestmentFunction, KappaBuildRequest>;

struct ModelSetup {
  EconomyParams economy;
  PhillipsCurve phillips;
  KappaSpec kappa;
  SearchInterval search;
};

/// Parameter names accepted by sweeps and overrides.
inline const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names{
      "economy.nu",   "economy.alpha",    "economy.beta",       "economy.delta",
      "economy.r",    "phillips.phi0",    "phillips.phi1",      "kappa.c",
      "kappa.kappa1", "kappa.kappa2",     "kappa_build.d0",     "kappa_build.c",
      "kappa_build.kappa2"};
  return names;
}

inline void set_parameter(ModelSetup& m, const std::string& name, double value) {
  auto* literal = std::get_if<InvestmentFunction>(&m.kappa);
  auto* build = std::get_if<KappaBuildRequest>(&m.kappa);
  if (name == "economy.nu") m.economy.nu = value;
  else if (name == "economy.alpha") m.economy.alpha = value;
  else if (name == "economy.beta") m.economy.beta = value;
  else if (name == "economy.delta") m.economy.delta = value;
  else if (name == "economy.r") m.economy.r = value;
  else if (name == "phillips.phi0") m.phillips.phi0 = value;
  else if (name == "phillips.phi1") m.phillips.phi1 = value;
  else if (literal && name == "kappa.c") literal->c = value;
  else if (literal && name == "kappa.kappa1") literal->kappa1 = value;
  else if (literal && name == "kappa.kappa2") literal->kappa2 = value;
  else if (build && name == "kappa_build.d0") build->d0 = value;
  else if (build && name == "kappa_build.c") build->c = value;
  else if (build && name == "kappa_build.kappa2") build->kappa2 = value;
  else throw RangeError("unknown or inapplicable sweep parameter '" + name + "'");
}

struct SweepAxis {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  double value(int i) const { return count == 1 ? start : start + (stop - start) * i / (count - 1); }
};

struct SweepRoot {
  double d0 = 0.0;
  std::array<double, 3> eigenvalues{};
  Classification classification = Classification::Marginal;
};

struct SweepRow {
  std::size_t index = 0;
  std::vector<double> values;  ///< one per axis
  std::string status = "ok";
  std::vector<std::string> failed_assumptions;
  InvestmentFunction kappa;  ///< the function actually analysed
  std::optional<bool> construction_admissible;  ///< set for build requests
  std::vector<SweepRoot> roots;
};

namespace detail {

inline void analyse_point(const ModelSetup& m, SweepRow& row) {
  if (const auto* build = std::get_if<KappaBuildRequest>(&m.kappa)) {
    // Realize the amplitude without the construction's inequalities, so a
    // sweep may cross their boundaries; admissibility is recorded separately.
    try {
      build_kappa(build->d0, build->c, build->kappa2, m.economy, m.phillips);
      row.construction_admissible = true;
    } catch (const Error&) {
      row.construction_admissible = false;
    }
    row.kappa = realize_kappa(build->d0, build->c, build->kappa2, m.economy);
  } else {
    row.kappa = std::get<InvestmentFunction>(m.kappa);
  }
  for (const auto& check : validate_assumptions(m.economy, m.phillips, row.kappa).checks)
    if (!check.passed) row.failed_assumptions.push_back(check.name);
  for (double d0 : find_d0_roots(m.economy, row.kappa, m.search)) {
    SweepRoot root;
    root.d0 = d0;
    root.eigenvalues = origin_eigenvalues(m.economy, m.phillips, row.kappa, d0);
    root.classification = origin_stability(m.economy, m.phillips, row.kappa, d0).classification;
    row.roots.push_back(root);
  }
}

}  // namespace detail

/// Origin-equilibrium roots, eigenvalues and classes over a grid of at most
/// two parameter axes (last axis varies fastest).
inline std::vector<SweepRow> sweep(const std::vector<SweepAxis>& axes, const ModelSetup& base) {
  if (axes.size() > 2) throw RangeError("sweep supports at most two axes");
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.count < 1) throw RangeError("sweep axis '" + axis.param + "' needs count >= 1");
    total *= static_cast<std::size_t>(axis.count);
  }
  if (total > 10000) throw RangeError("sweep is limited to 10^4 points");
  {
    ModelSetup probe = base;
    for (const auto& axis : axes) set_parameter(probe, axis.param, axis.start);
  }

  std::vector<SweepRow> rows(total);
  parallel_for(total, [&](std::size_t idx) {
    SweepRow& row = rows[idx];
    row.index = idx;
    ModelSetup m = base;
    std::size_t rem = idx;
    row.values.resize(axes.size());
    for (std::size_t a = axes.size(); a-- > 0;) {
      const int i = static_cast<int>(rem % axes[a].count);
      rem /= axes[a].count;
      row.values[a] = axes[a].value(i);
      set_parameter(m, axes[a].param, row.values[a]);
    }
    try {
      detail::analyse_point(m, row);
    } catch (const Error& e) {
      row.status = e.what();
    }
  });
  return rows;
}

}  // namespace keen

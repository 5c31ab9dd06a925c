#pragma once

// Subcommands of the `keen` tool. Each takes a parsed RunConfig, writes its
// report to `out` (or into files under --out) and returns an exit status.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "keen/config.hpp"
#include "keen/construct.hpp"
#include "keen/keen.hpp"

namespace keen {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int domain = 2;
inline constexpr int usage = 64;
inline constexpr int numeric = 70;
}  // namespace exit_code

/// Maps a failure to the tool's exit status.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return exit_code::usage;
  if (dynamic_cast<const NumericError*>(&e)) return exit_code::numeric;
  if (dynamic_cast<const Error*>(&e)) return exit_code::domain;
  return exit_code::numeric;
}

struct CommandOptions {
  std::optional<std::string> out_dir;
  std::string format;  ///< "csv", "json", or empty for the command's default
};

namespace cmd_detail {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// RFC 4180 field quoting.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

inline Json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

inline Json eigen_json(const Spectrum3& ev) {
  Json arr = Json::array();
  for (const auto& z : ev) arr.push_back(Json{{"re", z.real()}, {"im", z.imag()}});
  return arr;
}

inline Json eigen_json(const std::array<double, 3>& ev) {
  Json arr = Json::array();
  for (double x : ev) arr.push_back(x);
  return arr;
}

inline Json economy_json(const EconomyParams& p) {
  return {{"nu", p.nu}, {"alpha", p.alpha}, {"beta", p.beta}, {"delta", p.delta}, {"r", p.r}};
}

inline Json kappa_json(const InvestmentFunction& k) {
  Json j{{"c", k.c}, {"kappa1", k.kappa1}, {"kappa2", k.kappa2}};
  if (k.shift != 0.0) j["shift"] = k.shift;
  return j;
}

inline std::string format_or(const CommandOptions& opt, const std::string& fallback,
                             std::initializer_list<const char*> allowed) {
  const std::string f = opt.format.empty() ? fallback : opt.format;
  for (const char* a : allowed)
    if (f == a) return f;
  throw ConfigError("format '" + f + "' is not available for this command");
}

/// Writes `content` to <out_dir>/<name>, or to `out` when no directory is set.
inline void emit(const CommandOptions& opt, const std::string& name, const std::string& content,
                 std::ostream& out) {
  if (!opt.out_dir) {
    out << content;
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(*opt.out_dir, ec);
  const auto path = std::filesystem::path(*opt.out_dir) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  file << content;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline InvestmentFunction resolve_kappa(const RunConfig& cfg) {
  if (const auto* k = std::get_if<InvestmentFunction>(&cfg.model.kappa)) return *k;
  const auto& req = std::get<KappaBuildRequest>(cfg.model.kappa);
  return build_kappa(req.d0, req.c, req.kappa2, cfg.model.economy, cfg.model.phillips).kappa;
}

inline Json termination_json(const Termination& t, double t_final) {
  Json j{{"label", t.label()}, {"t_final", t_final}};
  if (t.kind == Termination::Kind::ConvergedTo) {
    j["equilibrium"] = t.equilibrium_id.empty() ? Json(nullptr) : Json(t.equilibrium_id);
    j["distance"] = number_or_string(t.distance);
  }
  return j;
}

inline Json stats_json(const ode::Stats& s) {
  return {{"accepted_steps", s.accepted},
          {"rejected_steps", s.rejected},
          {"min_step", number_or_string(s.min_step)},
          {"max_step", s.max_step}};
}

}  // namespace cmd_detail

inline int cmd_validate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  using namespace cmd_detail;
  const std::string fmt = format_or(opt, "text", {"text", "json"});
  const auto report =
      validate_assumptions(cfg.model.economy, cfg.model.phillips, resolve_kappa(cfg));
  if (fmt == "json") {
    Json checks = Json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    emit(opt, "validate.json", dump({{"all_passed", report.all_passed()}, {"checks", checks}}), out);
  } else {
    std::ostringstream text;
    for (const auto& c : report.checks)
      text << (c.passed ? "pass  " : "FAIL  ") << c.name << ": " << c.detail << "\n";
    text << (report.all_passed() ? "all assumptions hold\n" : "some assumptions fail\n");
    emit(opt, "validate.txt", text.str(), out);
  }
  return report.all_passed() ? exit_code::ok : exit_code::domain;
}

inline Json equilibria_report(const RunConfig& cfg) {
  using namespace cmd_detail;
  const auto& p = cfg.model.economy;
  const auto& phi = cfg.model.phillips;
  const InvestmentFunction kap = resolve_kappa(cfg);

  Json origin = Json::array();
  const auto roots = find_d0_roots(p, kap, cfg.model.search);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const auto rep = origin_stability(p, phi, kap, roots[k]);
    origin.push_back({{"id", "origin_" + std::to_string(k)},
                      {"d0", roots[k]},
                      {"profit", 1.0 - p.r * roots[k]},
                      {"residual", origin_debt_residual(roots[k], p, kap)},
                      {"eigenvalues", eigen_json(origin_eigenvalues(p, phi, kap, roots[k]))},
                      {"classification", to_string(rep.classification)},
                      {"spectrum", to_string(rep.source)}});
  }

  Json interior;
  try {
    const Interior eq = interior_equilibrium(p, phi, kap);
    const auto f = keen_vector_field({eq.omega1, eq.lambda1, eq.d1}, p, phi, kap);
    const auto rep = interior_stability(eq, p, phi, kap);
    interior = {{"present", true},
                {"omega", eq.omega1},
                {"lambda", eq.lambda1},
                {"d", eq.d1},
                {"residual", std::hypot(f[0], f[1], f[2])},
                {"eigenvalues", eigen_json(rep.eigenvalues)},
                {"classification", to_string(rep.classification)},
                {"spectrum", to_string(rep.source)}};
  } catch (const RangeError& e) {
    interior = {{"present", false}, {"reason", e.what()}};
  }

  Json line;
  try {
    const auto seg = line_equilibrium_residuals(p, kap);
    const bool present = line_equilibrium_check(p, phi, kap, 1e-9).has_value();
    line = {{"present", present},
            {"d1", seg.d1},
            {"d_star", number_or_string(seg.d_star)},
            {"coincidence_residual", seg.coincidence_residual},
            {"debt_gap", number_or_string(seg.debt_gap)},
            {"tolerance", 1e-9}};
  } catch (const Error& e) {
    line = {{"present", false}, {"reason", e.what()}};
  }

  return {{"economy", economy_json(p)},
          {"kappa", kappa_json(kap)},
          {"origin", origin},
          {"interior", interior},
          {"line", line},
          {"explosive_debt", {{"omega", 0.0}, {"lambda", 0.0}, {"d", "+inf"}}}};
}

inline int cmd_equilibria(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  cmd_detail::format_or(opt, "json", {"json"});
  cmd_detail::emit(opt, "equilibria.json", cmd_detail::dump(equilibria_report(cfg)), out);
  return exit_code::ok;
}

inline int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  using namespace cmd_detail;
  const std::string fmt = format_or(opt, "csv", {"csv", "json"});
  if (!cfg.initial_state) throw ConfigError("simulate needs an 'initial_state' block");
  const State s0 = *cfg.initial_state;
  const auto& p = cfg.model.economy;
  const auto& phi = cfg.model.phillips;

  Json meta{{"tool", "keen"}, {"version", kToolVersion}, {"model", cfg.simulate_model}};
  std::ostringstream csv;
  Json series;

  if (cfg.simulate_model == "goodwin") {
    if (phi.kind != PhillipsCurve::Kind::Linear)
      throw DomainError("the Goodwin cycle is defined for the linear Phillips curve");
    const auto traj = integrate_goodwin(s0.omega, s0.lambda, p, phi.phi0, phi.phi1, cfg.integrator);
    meta["termination"] = termination_json(traj.termination, traj.times.back());
    meta["stats"] = stats_json(traj.stats);
    csv << "t,omega,lambda,V\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      csv << num(traj.times[i]) << ',' << num(traj.omega[i]) << ',' << num(traj.lambda[i]) << ','
          << num(traj.conserved[i]) << '\n';
    series = {{"t", traj.times}, {"omega", traj.omega}, {"lambda", traj.lambda}, {"V", traj.conserved}};
  } else {
    const InvestmentFunction kap = resolve_kappa(cfg);
    const auto known = known_equilibria(p, phi, kap, cfg.model.search);
    const auto traj = integrate(s0, p, phi, kap, cfg.integrator, known);
    meta["termination"] = termination_json(traj.termination, traj.times.back());
    meta["stats"] = stats_json(traj.stats);
    Json ids = Json::array();
    for (const auto& k : known) ids.push_back(k.id);
    meta["known_equilibria"] = ids;
    csv << "t,omega,lambda,d,pi\n";
    std::vector<double> om, la, dd, pi;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const State& s = traj.states[i];
      const double profit = net_profit(s, p);
      csv << num(traj.times[i]) << ',' << num(s.omega) << ',' << num(s.lambda) << ',' << num(s.d)
          << ',' << num(profit) << '\n';
      om.push_back(s.omega);
      la.push_back(s.lambda);
      dd.push_back(s.d);
      pi.push_back(profit);
    }
    series = {{"t", traj.times}, {"omega", om}, {"lambda", la}, {"d", dd}, {"pi", pi}};
  }
  meta["config"] = cfg.source;

  if (fmt == "json") {
    Json doc = meta;
    doc["trajectory"] = series;
    emit(opt, "trajectory.json", dump(doc), out);
  } else {
    emit(opt, "trajectory.csv", csv.str(), out);
    if (opt.out_dir) emit(opt, "trajectory.meta.json", dump(meta), out);
  }
  return exit_code::ok;
}

inline int cmd_build_kappa(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  using namespace cmd_detail;
  format_or(opt, "json", {"json"});
  const auto* req = std::get_if<KappaBuildRequest>(&cfg.model.kappa);
  if (!req) throw ConfigError("build-kappa needs a 'kappa_build' block");
  const auto built = build_kappa(req->d0, req->c, req->kappa2, cfg.model.economy, cfg.model.phillips);
  const auto& c = built.certificate;
  Json cert{{"d0", c.d0},
            {"d0_bound", c.d0_bound},
            {"c", c.c},
            {"kappa2", c.kappa2},
            {"kappa2_lower_bound", c.kappa2_lower_bound},
            {"pi0", c.pi0},
            {"kappa_at_pi0", c.kappa_at_pi0},
            {"exponential_part_at_pi0", c.k0_at_pi0},
            {"kappa1", c.kappa1},
            {"shift", c.shift},
            {"residual", c.residual},
            {"eigenvalues", eigen_json(c.eigenvalues)}};
  emit(opt, "kappa.json",
       dump({{"kappa", kappa_json(built.kappa)}, {"certificate", cert}}), out);
  return exit_code::ok;
}

inline Json double_zero_report(const RunConfig& cfg) {
  using namespace cmd_detail;
  double c = 0, kappa2 = 0;
  if (const auto* k = std::get_if<InvestmentFunction>(&cfg.model.kappa)) {
    c = k->c;
    kappa2 = k->kappa2;
  } else {
    const auto& req = std::get<KappaBuildRequest>(cfg.model.kappa);
    c = req.c;
    kappa2 = req.kappa2;
  }
  const auto& p = cfg.model.economy;
  const auto q = double_zero_necessary(c, kappa2, p);

  // realize every candidate root and report the two eigenvalues it produces
  auto realize = [&](double B, double debt) {
    Json j{{"B", B}, {"d", debt}, {"B_above_c", B > c}};
    try {
      const auto real = realize_double_zero(c, kappa2, B, debt, p);
      const auto ev = origin_eigenvalues(real.economy, cfg.model.phillips, real.kappa, debt);
      j["alpha"] = real.economy.alpha;
      j["kappa1"] = real.kappa.kappa1;
      j["eigenvalue2"] = ev[1];
      j["eigenvalue3"] = ev[2];
    } catch (const Error& e) {
      j["error"] = e.what();
    }
    return j;
  };

  Json quad_roots = Json::array();
  for (double B : q.B_roots) quad_roots.push_back(realize(B, q.quadratic.debt_for(B)));
  Json exact_roots = Json::array();
  for (double B : q.exact_B_roots) {
    if (B == q.exact.carrying) continue;
    exact_roots.push_back(realize(B, q.exact.debt_for(B)));
  }

  Json closed{{"branch", to_string(q.closed_branch)},
              {"discriminant", q.closed_discriminant},
              {"condition_met", q.closed_condition_met}};
  if (q.closed_branch == ClosedFormBranch::ClosedForm) {
    closed["c_upper"] = q.closed_c_upper;
    closed["c_lower"] = q.closed_c_lower;
  }
  return {{"c", c},
          {"kappa2", kappa2},
          {"A", q.A},
          {"one_minus_A", q.one_minus_A},
          {"one_minus_2A", q.one_minus_2A},
          {"quadratic",
           {{"a", q.quadratic.a},
            {"b", q.quadratic.b},
            {"c0", q.quadratic.c0},
            {"discriminant", q.discriminant},
            {"condition_met", q.numeric_condition_met},
            {"debt_substitution", "(1-B)/(r+delta)"},
            {"roots", quad_roots}}},
          {"closed_form", closed},
          {"exact",
           {{"linear", q.exact.linear},
            {"constant", q.exact.constant},
            {"discriminant", q.exact.discriminant()},
            {"condition_met", q.exact_condition_met},
            {"debt_substitution", "nu(1-B)/(nu(r+delta)-B)"},
            {"roots", exact_roots}}}};
}

inline int cmd_double_zero(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  cmd_detail::format_or(opt, "json", {"json"});
  cmd_detail::emit(opt, "double_zero.json", cmd_detail::dump(double_zero_report(cfg)), out);
  return exit_code::ok;
}

inline int cmd_sweep(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out) {
  using namespace cmd_detail;
  const std::string fmt = format_or(opt, "csv", {"csv", "json"});
  const auto rows = sweep(cfg.sweep_axes, cfg.model);

  auto admissible = [](const SweepRow& r) -> std::string {
    if (!r.construction_admissible) return "";
    return *r.construction_admissible ? "true" : "false";
  };
  auto joined = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
    return s;
  };

  if (fmt == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json params = Json::object();
      for (std::size_t a = 0; a < cfg.sweep_axes.size(); ++a) params[cfg.sweep_axes[a].param] = r.values[a];
      Json roots = Json::array();
      for (const auto& root : r.roots)
        roots.push_back({{"d0", root.d0},
                         {"eigenvalues", eigen_json(root.eigenvalues)},
                         {"classification", to_string(root.classification)}});
      Json row{{"index", r.index}, {"params", params}, {"status", r.status}};
      if (r.construction_admissible) row["construction_admissible"] = *r.construction_admissible;
      row["failed_assumptions"] = r.failed_assumptions;
      row["kappa"] = kappa_json(r.kappa);
      row["roots"] = roots;
      arr.push_back(row);
    }
    emit(opt, "sweep.json", dump(arr), out);
    return exit_code::ok;
  }

  std::ostringstream csv;
  csv << "index";
  for (const auto& a : cfg.sweep_axes) csv << ',' << csv_field(a.param);
  csv << ",status,construction_admissible,failed_assumptions,kappa1,root,d0,eigenvalue1,eigenvalue2,"
         "eigenvalue3,classification\n";
  for (const auto& r : rows) {
    std::ostringstream head;
    head << r.index;
    for (double v : r.values) head << ',' << num(v);
    head << ',' << csv_field(r.status) << ',' << admissible(r) << ','
         << csv_field(joined(r.failed_assumptions)) << ',' << num(r.kappa.kappa1);
    if (r.roots.empty()) {
      csv << head.str() << ",,,,,,\n";
      continue;
    }
    for (std::size_t k = 0; k < r.roots.size(); ++k) {
      const auto& root = r.roots[k];
      csv << head.str() << ',' << k << ',' << num(root.d0) << ',' << num(root.eigenvalues[0]) << ','
          << num(root.eigenvalues[1]) << ',' << num(root.eigenvalues[2]) << ','
          << to_string(root.classification) << '\n';
    }
  }
  emit(opt, "sweep.csv", csv.str(), out);
  return exit_code::ok;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"validate", "equilibria",  "simulate",
                                              "build-kappa", "double-zero", "sweep"};
  return names;
}

inline int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt,
                       std::ostream& out) {
  if (name == "validate") return cmd_validate(cfg, opt, out);
  if (name == "equilibria") return cmd_equilibria(cfg, opt, out);
  if (name == "simulate") return cmd_simulate(cfg, opt, out);
  if (name == "build-kappa") return cmd_build_kappa(cfg, opt, out);
  if (name == "double-zero") return cmd_double_zero(cfg, opt, out);
  if (name == "sweep") return cmd_sweep(cfg, opt, out);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace keen

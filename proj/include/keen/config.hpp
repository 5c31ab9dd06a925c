#pragma once

// JSON run configuration for the command-line front end. Parsing is strict:
// unknown keys, missing required keys and wrong types are usage errors.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "keen/sim.hpp"

namespace keen {

using Json = nlohmann::ordered_json;

/// Malformed configuration or command line (exit status 64).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  ModelSetup model;
  IntegratorConfig integrator;
  std::optional<State> initial_state;
  std::vector<SweepAxis> sweep_axes;
  std::string simulate_model = "keen";
  Json source;  ///< the document after overrides, echoed into metadata
};

namespace config_detail {

class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(where() + "must be an object");
  }

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    for (const auto& [key, _] : obj_.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError("unknown key '" + qualified(key) + "'");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  double number(const char* key) const {
    const Json& v = required(key);
    if (!v.is_number()) throw ConfigError("'" + qualified(key) + "' must be a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  int integer(const char* key, int fallback) const {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + qualified(key) + "' must be an integer");
    return v.get<int>();
  }

  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError("'" + qualified(key) + "' must be a string");
    return v.get<std::string>();
  }

  Reader child(const char* key) const { return {required(key), qualified(key)}; }
  const Json& raw(const char* key) const { return required(key); }

 private:
  const Json& required(const char* key) const {
    if (!has(key)) throw ConfigError("missing required key '" + qualified(key) + "'");
    return obj_.at(key);
  }
  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "configuration " : "'" + path_ + "' "; }

  const Json& obj_;
  std::string path_;
};

inline std::pair<int, int> line_and_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Json parse_scalar(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return Json(text);
  }
}

}  // namespace config_detail

/// Parses JSON text, reporting syntax errors with line and column.
inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte is one past the offending character
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = config_detail::line_and_column(text, at);
    // drop the library's own "[json.exception...] parse error at ...: " prefix
    const std::string msg = e.what();
    const auto col_at = msg.find("column ");
    const auto tail = msg.find(": ", col_at == std::string::npos ? 0 : col_at);
    const std::string reason = tail == std::string::npos ? msg : msg.substr(tail + 2);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + reason);
  }
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

/// Applies a `dotted.key=value` override. The value is read as JSON when it
/// parses, otherwise as a string.
inline void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' must have the form key=value");
  const std::string key = assignment.substr(0, eq);
  Json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
    if (!node->is_object()) throw ConfigError("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = config_detail::parse_scalar(assignment.substr(eq + 1));
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = Json::object();
    start = dot + 1;
  }
}

inline RunConfig parse_run_config(const Json& doc) {
  using config_detail::Reader;
  RunConfig cfg;
  cfg.source = doc;
  const Reader root(doc, "");
  root.only({"economy", "phillips", "kappa", "kappa_build", "integrator", "search", "initial_state",
             "sweep", "simulate"});

  const Reader econ = root.child("economy");
  econ.only({"nu", "alpha", "beta", "delta", "r"});
  cfg.model.economy = {econ.number("nu"), econ.number("alpha"), econ.number("beta"),
                       econ.number("delta"), econ.number("r")};

  const Reader phil = root.child("phillips");
  phil.only({"variant", "phi0", "phi1"});
  const std::string variant = phil.string("variant", "rational");
  if (variant == "rational")
    cfg.model.phillips = PhillipsCurve::rational(phil.number("phi0"), phil.number("phi1"));
  else if (variant == "linear")
    cfg.model.phillips = PhillipsCurve::linear(phil.number("phi0"), phil.number("phi1"));
  else
    throw ConfigError("'phillips.variant' must be \"linear\" or \"rational\"");

  if (root.has("kappa") == root.has("kappa_build"))
    throw ConfigError("exactly one of 'kappa' and 'kappa_build' must be given");
  if (root.has("kappa")) {
    const Reader k = root.child("kappa");
    k.only({"c", "kappa1", "kappa2", "shift"});
    cfg.model.kappa =
        InvestmentFunction{k.number("c"), k.number("kappa1"), k.number("kappa2"), k.number("shift", 0.0)};
  } else {
    const Reader k = root.child("kappa_build");
    k.only({"d0", "c", "kappa2"});
    cfg.model.kappa = KappaBuildRequest{k.number("d0"), k.number("c"), k.number("kappa2")};
  }

  if (root.has("integrator")) {
    const Reader in = root.child("integrator");
    in.only({"method", "step", "rel_tol", "abs_tol", "min_step", "max_step", "t_end",
             "sample_interval", "d_explode", "eq_tol", "match_radius", "converge_samples"});
    IntegratorConfig& ic = cfg.integrator;
    const std::string method = in.string("method", "rk45");
    if (method == "rk45") ic.method = ode::Method::AdaptiveRK45;
    else if (method == "rk4") ic.method = ode::Method::FixedRK4;
    else throw ConfigError("'integrator.method' must be \"rk45\" or \"rk4\"");
    ic.step = in.number("step", ic.step);
    ic.rel_tol = in.number("rel_tol", ic.rel_tol);
    ic.abs_tol = in.number("abs_tol", ic.abs_tol);
    ic.min_step = in.number("min_step", ic.min_step);
    ic.max_step = in.number("max_step", ic.max_step);
    ic.t_end = in.number("t_end", ic.t_end);
    ic.sample_interval = in.number("sample_interval", ic.sample_interval);
    ic.d_explode = in.number("d_explode", ic.d_explode);
    ic.eq_tol = in.number("eq_tol", ic.eq_tol);
    ic.match_radius = in.number("match_radius", ic.match_radius);
    ic.converge_samples = in.integer("converge_samples", ic.converge_samples);
  }

  if (root.has("search")) {
    const Reader s = root.child("search");
    s.only({"lo", "hi", "samples"});
    SearchInterval& si = cfg.model.search;
    si.lo = s.number("lo", si.lo);
    si.hi = s.number("hi", si.hi);
    si.samples = s.integer("samples", si.samples);
  }

  if (root.has("initial_state")) {
    const Reader s = root.child("initial_state");
    s.only({"omega", "lambda", "d"});
    cfg.initial_state = State{s.number("omega"), s.number("lambda"), s.number("d")};
  }

  if (root.has("sweep")) {
    const Reader s = root.child("sweep");
    s.only({"axes"});
    const Json& axes = s.raw("axes");
    if (!axes.is_array()) throw ConfigError("'sweep.axes' must be an array");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const Reader a(axes[i], "sweep.axes[" + std::to_string(i) + "]");
      a.only({"param", "start", "stop", "count"});
      SweepAxis axis;
      axis.param = a.string("param", "");
      if (axis.param.empty()) throw ConfigError("sweep axis " + std::to_string(i) + " needs 'param'");
      axis.start = a.number("start");
      axis.stop = a.number("stop");
      axis.count = a.integer("count", 1);
      cfg.sweep_axes.push_back(axis);
    }
  }

  if (root.has("simulate")) {
    const Reader s = root.child("simulate");
    s.only({"model"});
    cfg.simulate_model = s.string("model", "keen");
    if (cfg.simulate_model != "keen" && cfg.simulate_model != "goodwin")
      throw ConfigError("'simulate.model' must be \"keen\" or \"goodwin\"");
  }
  return cfg;
}

inline RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides) {
  Json doc = load_json_file(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_run_config(doc);
}

}  // namespace keen

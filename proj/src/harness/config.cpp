#include "inertia/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "inertia/errors.hpp"
#include "inertia/harness/toml_lite.hpp"

namespace inertia::harness {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// "LeastSquares", "least_squares" and "least-squares" all become "leastsquares".
std::string normalize_kind(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) ==
        allowed.end()) {
      throw ConfigError(where + key + ": unknown field");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + key + ": missing required field");
  return obj.at(key);
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field + ": expected a number");
  return v.get<double>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
  return as_number(require(obj, key, where), where + key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + key + ": expected a string");
  return v.get<std::string>();
}

Vector as_vector(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field + ": expected a nonempty array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = as_number(v[i], field + "[" + std::to_string(i) + "]");
    if (!std::isfinite(out(static_cast<Eigen::Index>(i)))) {
      throw ConfigError(field + "[" + std::to_string(i) + "]: must be finite");
    }
  }
  return out;
}

Matrix as_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw ConfigError(field + ": expected a nonempty array of rows");
  const std::size_t rows = v.size();
  std::size_t cols = 0;
  Matrix out;
  for (std::size_t i = 0; i < rows; ++i) {
    Vector row = as_vector(v[i], field + "[" + std::to_string(i) + "]");
    if (i == 0) {
      cols = static_cast<std::size_t>(row.size());
      out.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw ConfigError(field + ": rows have different lengths");
    }
    out.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return out;
}

int int_field(const json& obj, const char* key, const std::string& where) {
  const double v = number_field(obj, key, where);
  if (v != std::floor(v) || std::abs(v) > 1e6) throw ConfigError(where + key + ": expected an integer");
  return static_cast<int>(v);
}

DampingSchedule parse_damping(const json& doc) {
  const json& d = require(doc, "damping", "");
  if (!d.is_object()) throw ConfigError("damping: expected a table");
  check_keys(d, "damping.", {"c", "alpha"});
  const double c = number_field(d, "c", "damping.");
  const double alpha = number_field(d, "alpha", "damping.");
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw HypothesisError("damping.alpha: must lie in [0, 1), got " + fmt(alpha));
  }
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw ConfigError("damping.c: must be a finite positive number, got " + fmt(c));
  }
  return DampingSchedule(c, alpha);
}

template <class F>
auto wrap(const std::string& field, F&& build) {
  try {
    return build();
  } catch (const HypothesisError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(field + ": " + e.what());
  } catch (const ShapeError& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

Potential parse_potential(const json& doc) {
  const json& p = require(doc, "potential", "");
  if (!p.is_object()) throw ConfigError("potential: expected a table");
  const std::string w = "potential.";
  const std::string raw = string_field(p, "kind", w);
  const std::string kind = normalize_kind(raw);
  if (kind == "zero") {
    check_keys(p, w, {"kind", "dim"});
    const int dim = int_field(p, "dim", w);
    return wrap("potential", [&] { return Potential::zero(dim); });
  }
  if (kind == "quadratic") {
    check_keys(p, w, {"kind", "A", "b"});
    Matrix a = as_matrix(require(p, "A", w), w + "A");
    Vector b = p.contains("b") ? as_vector(p.at("b"), w + "b") : Vector::Zero(a.rows());
    return wrap("potential", [&] { return Potential::quadratic(a, b); });
  }
  if (kind == "leastsquares") {
    check_keys(p, w, {"kind", "M", "y"});
    Matrix m = as_matrix(require(p, "M", w), w + "M");
    Vector y = p.contains("y") ? as_vector(p.at("y"), w + "y") : Vector::Zero(m.rows());
    return wrap("potential", [&] { return Potential::least_squares(m, y); });
  }
  if (kind == "evenpower") {
    check_keys(p, w, {"kind", "dim", "p", "scale"});
    const int dim = int_field(p, "dim", w);
    const int power = int_field(p, "p", w);
    const double scale = p.contains("scale") ? as_number(p.at("scale"), w + "scale") : 1.0;
    return wrap("potential", [&] { return Potential::even_power(dim, power, scale); });
  }
  if (kind == "distballsq") {
    check_keys(p, w, {"kind", "center", "radius"});
    Vector center = as_vector(require(p, "center", w), w + "center");
    const double radius = number_field(p, "radius", w);
    return wrap("potential", [&] { return Potential::dist_ball_sq(center, radius); });
  }
  throw ConfigError("potential.kind: unknown potential kind '" + raw +
                    "' (expected Zero, Quadratic, LeastSquares, EvenPower or DistBallSq)");
}

SourceTerm parse_source(const json& doc, int dim) {
  if (!doc.contains("source")) return SourceTerm::zero(dim);
  const json& s = doc.at("source");
  if (!s.is_object()) throw ConfigError("source: expected a table");
  const std::string w = "source.";
  const std::string raw = string_field(s, "kind", w);
  const std::string kind = normalize_kind(raw);
  if (kind == "zero") {
    check_keys(s, w, {"kind"});
    return SourceTerm::zero(dim);
  }
  if (kind == "powerdecay" || kind == "oscillatingpowerdecay") {
    const bool osc = kind == "oscillatingpowerdecay";
    if (osc) {
      check_keys(s, w, {"kind", "direction", "amplitude", "beta", "omega"});
    } else {
      check_keys(s, w, {"kind", "direction", "amplitude", "beta"});
    }
    Vector direction = as_vector(require(s, "direction", w), w + "direction");
    if (direction.size() != dim) {
      throw ConfigError("source.direction: has " + std::to_string(direction.size()) +
                        " entries but the potential lives in dimension " + std::to_string(dim));
    }
    const double amplitude = number_field(s, "amplitude", w);
    const double beta = number_field(s, "beta", w);
    if (osc) {
      const double omega = number_field(s, "omega", w);
      return wrap("source", [&] {
        return SourceTerm::oscillating_power_decay(direction, amplitude, beta, omega);
      });
    }
    return wrap("source", [&] { return SourceTerm::power_decay(direction, amplitude, beta); });
  }
  throw ConfigError("source.kind: unknown source kind '" + raw +
                    "' (expected Zero, PowerDecay or OscillatingPowerDecay)");
}

SolverOverrides parse_solver(const json& doc) {
  SolverOverrides out;
  if (!doc.contains("solver")) return out;
  const json& s = doc.at("solver");
  if (!s.is_object()) throw ConfigError("solver: expected a table");
  check_keys(s, "solver.", {"rel_tol", "abs_tol", "max_step", "t0", "points_per_decade"});
  auto opt = [&](const char* key, std::optional<double>& slot) {
    if (s.contains(key)) slot = as_number(s.at(key), std::string("solver.") + key);
  };
  opt("rel_tol", out.rel_tol);
  opt("abs_tol", out.abs_tol);
  opt("max_step", out.max_step);
  opt("t0", out.t0);
  opt("points_per_decade", out.points_per_decade);
  return out;
}

// Returns an empty string when the hypotheses behind `tag` hold.
std::string hypothesis_violation(const TheoremTag& tag, const Dynamics& dyn) {
  const double alpha = dyn.damping.alpha();
  auto condition = [&](double nu) -> std::string {
    const WeightedCondition wc = satisfies_weighted_condition(dyn.source, nu);
    if (wc.holds) return {};
    return "source violates int (1+t)^" + fmt(nu) + " |g(t)| dt < inf (beta - nu - 1 = " +
           fmt(wc.margin) + " <= 0)";
  };
  switch (tag.id) {
    case TheoremId::T1:
      return condition(alpha);
    case TheoremId::T2:
      if (!(tag.nu >= alpha && tag.nu <= (1.0 + alpha) / 2.0)) {
        return "nu = " + fmt(tag.nu) + " must lie in [alpha, (1+alpha)/2] = [" + fmt(alpha) + ", " +
               fmt((1.0 + alpha) / 2.0) + "]";
      }
      return condition(tag.nu);
    case TheoremId::T3: {
      if (!dyn.potential.has_interior_argmin()) return "arg min of the potential has empty interior";
      return condition(alpha);
    }
    case TheoremId::T4:
      if (!dyn.potential.is_even()) return "potential is not even (Phi(-x) != Phi(x))";
      return condition((1.0 + alpha) / 2.0);
  }
  return {};
}

}  // namespace

std::string TheoremTag::label() const {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: {
      std::ostringstream os;
      os << "T2(" << nu << ")";
      return os.str();
    }
    case TheoremId::T3: return "T3";
    case TheoremId::T4: return "T4";
  }
  return "?";
}

TheoremTag parse_tag(std::string_view text) {
  const std::string s(text);
  if (s == "T1") return {TheoremId::T1, 0.0};
  if (s == "T3") return {TheoremId::T3, 0.0};
  if (s == "T4") return {TheoremId::T4, 0.0};
  if (s.size() > 4 && s.rfind("T2(", 0) == 0 && s.back() == ')') {
    const std::string inner = s.substr(3, s.size() - 4);
    std::size_t used = 0;
    double nu = 0.0;
    try {
      nu = std::stod(inner, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == inner.size() && std::isfinite(nu)) return {TheoremId::T2, nu};
  }
  throw ConfigError("tags: unknown theorem tag '" + s + "' (expected T1, T2(nu), T3 or T4)");
}

SolverSettings ScenarioConfig::solver_settings() const {
  SolverSettings s;
  s.t_end = t_end;
  if (solver.rel_tol) s.rel_tol = *solver.rel_tol;
  if (solver.abs_tol) s.abs_tol = *solver.abs_tol;
  if (solver.max_step) s.max_step = *solver.max_step;
  if (solver.t0) s.t0 = *solver.t0;
  if (solver.points_per_decade) s.points_per_decade = *solver.points_per_decade;
  return s;
}

double ScenarioConfig::velocity_weight_nu() const {
  for (const auto& tag : tags) {
    if (tag.id == TheoremId::T2) return tag.nu;
  }
  return (1.0 + dynamics.damping.alpha()) / 2.0;
}

bool ScenarioConfig::has_tag(TheoremId id) const {
  return std::any_of(tags.begin(), tags.end(), [&](const TheoremTag& t) { return t.id == id; });
}

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a table at the top level");
  check_keys(doc, "", {"name", "damping", "potential", "source", "x0", "v0", "t_end", "solver",
                       "tags", "exploratory"});
  const std::string name = string_field(doc, "name", "");
  if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
    throw ConfigError("name: must be nonempty and must not contain path separators");
  }

  DampingSchedule damping = parse_damping(doc);
  Potential potential = parse_potential(doc);
  const int dim = potential.dim();
  SourceTerm source = parse_source(doc, dim);

  Vector x0 = as_vector(require(doc, "x0", ""), "x0");
  if (x0.size() != dim) {
    throw ConfigError("x0: has " + std::to_string(x0.size()) + " entries, expected " +
                      std::to_string(dim));
  }
  Vector v0 = doc.contains("v0") ? as_vector(doc.at("v0"), "v0") : Vector::Zero(dim);
  if (v0.size() != dim) {
    throw ConfigError("v0: has " + std::to_string(v0.size()) + " entries, expected " +
                      std::to_string(dim));
  }
  const double t_end = number_field(doc, "t_end", "");
  if (!(t_end >= 10.0) || !std::isfinite(t_end)) {
    throw ConfigError("t_end: must be finite and >= 10, got " + fmt(t_end));
  }

  bool exploratory = false;
  if (doc.contains("exploratory")) {
    if (!doc.at("exploratory").is_boolean()) throw ConfigError("exploratory: expected a boolean");
    exploratory = doc.at("exploratory").get<bool>();
  }

  std::vector<TheoremTag> tags;
  if (doc.contains("tags")) {
    const json& t = doc.at("tags");
    if (!t.is_array()) throw ConfigError("tags: expected an array of strings");
    std::set<TheoremId> seen;
    for (const auto& item : t) {
      if (!item.is_string()) throw ConfigError("tags: expected an array of strings");
      TheoremTag tag = parse_tag(item.get<std::string>());
      if (!seen.insert(tag.id).second) throw ConfigError("tags: duplicate tag " + tag.label());
      tags.push_back(tag);
    }
  }

  ScenarioConfig cfg{name,        Dynamics{damping, potential, source},
                     x0,          v0,
                     t_end,       parse_solver(doc),
                     tags,        exploratory,
                     {},          doc};
  cfg.solver_settings().validate();

  for (const auto& tag : cfg.tags) {
    const std::string why = hypothesis_violation(tag, cfg.dynamics);
    if (why.empty()) continue;
    if (!exploratory) throw HypothesisError("tags: " + tag.label() + " hypothesis fails: " + why);
    cfg.hypothesis_notes.push_back(tag.label() + ": " + why);
  }
  return cfg;
}

ScenarioConfig parse_config(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("json: ") + e.what());
    }
    return config_from_json(doc);
  }
  return config_from_json(parse_toml(text));
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const HypothesisError& e) {
    throw HypothesisError(path + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace inertia::harness

#include "sobolev/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sobolev/errors.hpp"

namespace sobolev {

using nlohmann::json;

namespace {

const std::set<std::string, std::less<>> kKeys = {
    "bounded.breakpoints", "bounded.values", "bounded.left_tail", "bounded.right_tail",
    "density.breakpoints", "density.values", "atoms",
    "well.alpha", "well.beta", "well.b", "well.c",
    "a", "window", "step", "h_target", "margin", "tol", "omega", "max_iter", "method", "jobs", "out",
    "refine_width",
    "verify.tol", "verify.base_m", "verify.perturbations", "verify.comparisons",
    "trapped.alpha", "trapped.betas", "trapped.widths"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drop a trailing `#` comment that is not inside a JSON string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted && c == '\\') {
      ++i;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, i);
    }
  }
  return line;
}

double number(const json& j, std::string_view what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + ": must be finite");
  return v;
}

std::vector<double> numbers(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::vector<Atom> atoms_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("atoms: expected [[location, weight], ...]");
  std::vector<Atom> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ConfigError("atoms: each entry must be [location, weight]");
    }
    out.push_back({number(pair[0], "atoms"), number(pair[1], "atoms")});
  }
  return out;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view what) {
  if (!obj.is_object()) throw ConfigError(std::string(what) + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError(std::string(what) + ": unknown key '" + k + "'");
    }
  }
}

PiecewiseConstant piecewise_from_json(const json& obj, bool with_tails, std::string_view what) {
  if (with_tails) {
    check_keys(obj, {"breakpoints", "values", "left_tail", "right_tail"}, what);
  } else {
    check_keys(obj, {"breakpoints", "values"}, what);
  }
  const std::string w(what);
  auto bp = obj.contains("breakpoints") ? numbers(obj["breakpoints"], w + ".breakpoints")
                                        : std::vector<double>{};
  auto vals = obj.contains("values") ? numbers(obj["values"], w + ".values") : std::vector<double>{};
  double left = 0.0, right = 0.0;
  if (with_tails) {
    const bool has_l = obj.contains("left_tail"), has_r = obj.contains("right_tail");
    if (has_l) left = number(obj["left_tail"], w + ".left_tail");
    if (has_r) right = number(obj["right_tail"], w + ".right_tail");
    // A constant needs only one of the tails.
    if (bp.empty() && has_l != has_r) {
      if (has_l) right = left;
      else left = right;
    } else if (!has_l || !has_r) {
      throw ConfigError(w + ": left_tail and right_tail are required");
    }
  }
  try {
    return PiecewiseConstant(std::move(bp), std::move(vals), left, right);
  } catch (const Error& e) {
    throw ConfigError(w + ": " + e.what());
  }
}

json piecewise_to_json(const PiecewiseConstant& f, bool with_tails) {
  json j;
  j["breakpoints"] = f.breakpoints();
  j["values"] = f.values();
  if (with_tails) {
    j["left_tail"] = f.left_tail();
    j["right_tail"] = f.right_tail();
  }
  return j;
}

template <class T>
T positive_integer(const json& j, std::string_view key) {
  if (!j.is_number_integer() || j.get<long long>() <= 0) {
    throw ConfigError(std::string(key) + ": expected a positive integer");
  }
  return static_cast<T>(j.get<long long>());
}

}  // namespace

double require_positive(std::string_view key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + ": must be a positive number");
  }
  return v;
}

std::optional<Method> parse_method_option(std::string_view name) {
  if (name == "auto") return std::nullopt;
  try {
    return parse_method(name);
  } catch (const InvalidInput&) {
    throw ConfigError("method: expected auto, linear, obstacle or transfer");
  }
}

Potential potential_from_json(const json& j) {
  if (j.is_number()) return Potential::constant(number(j, "potential"));
  check_keys(j, {"bounded", "density", "atoms"}, "potential");
  if (!j.contains("bounded")) throw ConfigError("potential: 'bounded' is required");
  BoundedPart bounded(piecewise_from_json(j["bounded"], true, "bounded"));
  DensityPart density;
  if (j.contains("density")) {
    density = DensityPart(piecewise_from_json(j["density"], false, "density"));
  }
  auto atoms = j.contains("atoms") ? atoms_from_json(j["atoms"]) : std::vector<Atom>{};
  return Potential(std::move(bounded), std::move(density), std::move(atoms));
}

json potential_to_json(const Potential& p) {
  json j;
  j["bounded"] = piecewise_to_json(p.bounded(), true);
  j["density"] = piecewise_to_json(p.density(), false);
  json atoms = json::array();
  for (const auto& a : p.atoms()) atoms.push_back({a.location, a.weight});
  j["atoms"] = atoms;
  return j;
}

Measure measure_from_json(const json& j) {
  check_keys(j, {"density", "atoms"}, "measure");
  DensityPart density;
  if (j.contains("density")) {
    density = DensityPart(piecewise_from_json(j["density"], false, "density"));
  }
  auto atoms = j.contains("atoms") ? atoms_from_json(j["atoms"]) : std::vector<Atom>{};
  return Measure(std::move(density), std::move(atoms));
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, json> flat;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!kKeys.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    if (flat.contains(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    json parsed = json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;
    flat.emplace(key, std::move(parsed));
  }

  RunConfig cfg;
  auto take = [&](std::string_view key) -> const json* {
    auto it = flat.find(std::string(key));
    return it == flat.end() ? nullptr : &it->second;
  };

  json pot = json::object();
  for (const auto& [key, value] : flat) {
    const auto dot = key.find('.');
    const std::string head = key.substr(0, dot);
    if (head == "bounded" || head == "density") pot[head][key.substr(dot + 1)] = value;
  }
  if (const auto* atoms = take("atoms")) pot["atoms"] = *atoms;
  const bool has_well = take("well.alpha") || take("well.beta") || take("well.b") || take("well.c");
  if (has_well) {
    if (!pot.empty()) throw ConfigError("well.* cannot be combined with bounded/density/atoms");
    WellParameters w;
    for (auto [key, field] : {std::pair{"well.alpha", &w.alpha}, std::pair{"well.beta", &w.beta},
                              std::pair{"well.b", &w.b}, std::pair{"well.c", &w.c}}) {
      const auto* v = take(key);
      if (!v) throw ConfigError(std::string(key) + ": required with the other well.* keys");
      *field = number(*v, key);
    }
    try {
      trapped_mode_criterion(w);
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    cfg.well = w;
  } else if (!pot.empty()) {
    cfg.potential = potential_from_json(pot);
  }

  if (const auto* v = take("a")) cfg.a = number(*v, "a");
  if (const auto* v = take("window")) {
    const auto w = numbers(*v, "window");
    if (w.size() != 2 || w[0] > w[1]) throw ConfigError("window: expected [lo, hi] with lo <= hi");
    cfg.window = Window{w[0], w[1]};
  }
  for (auto [key, field] : {std::pair{"step", &cfg.step}, std::pair{"h_target", &cfg.h},
                            std::pair{"margin", &cfg.margin}, std::pair{"tol", &cfg.tol},
                            std::pair{"refine_width", &cfg.refine_width}}) {
    if (const auto* v = take(key)) *field = require_positive(key, number(*v, key));
  }
  if (const auto* v = take("omega")) {
    const double w = number(*v, "omega");
    if (!(w > 0.0 && w < 2.0)) throw ConfigError("omega: must lie in (0, 2)");
    cfg.omega = w;
  }
  if (const auto* v = take("max_iter")) cfg.max_iter = positive_integer<long>(*v, "max_iter");
  if (const auto* v = take("jobs")) cfg.jobs = positive_integer<unsigned>(*v, "jobs");
  if (const auto* v = take("method")) {
    if (!v->is_string()) throw ConfigError("method: expected a name");
    cfg.method = parse_method_option(v->get<std::string>());
  }
  if (const auto* v = take("out")) {
    if (!v->is_string()) throw ConfigError("out: expected a path");
    cfg.out = v->get<std::string>();
  }

  if (const auto* v = take("verify.tol")) {
    cfg.verify_tol = require_positive("verify.tol", number(*v, "verify.tol"));
  }
  if (const auto* v = take("verify.base_m")) cfg.verify_base_m = number(*v, "verify.base_m");
  if (const auto* v = take("verify.perturbations")) {
    if (!v->is_array()) throw ConfigError("verify.perturbations: expected an array");
    for (const auto& m : *v) cfg.perturbations.push_back(measure_from_json(m));
  }
  if (const auto* v = take("verify.comparisons")) {
    if (!v->is_array()) throw ConfigError("verify.comparisons: expected an array");
    for (const auto& c : *v) {
      check_keys(c, {"upper", "lower"}, "verify.comparisons");
      if (!c.contains("upper") || !c.contains("lower")) {
        throw ConfigError("verify.comparisons: each entry needs 'upper' and 'lower'");
      }
      cfg.comparisons.push_back({potential_from_json(c["upper"]), potential_from_json(c["lower"])});
    }
  }
  if (const auto* v = take("trapped.alpha")) {
    cfg.trapped_alpha = require_positive("trapped.alpha", number(*v, "trapped.alpha"));
  }
  if (const auto* v = take("trapped.betas")) {
    for (double b : numbers(*v, "trapped.betas")) {
      cfg.trapped_betas.push_back(require_positive("trapped.betas", b));
    }
  }
  if (const auto* v = take("trapped.widths")) {
    for (double w : numbers(*v, "trapped.widths")) {
      cfg.trapped_widths.push_back(require_positive("trapped.widths", w));
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

Potential RunConfig::resolved_potential() const {
  if (potential) return *potential;
  if (well) return make_well(*well);
  throw ConfigError("no potential configured (bounded.* or well.*)");
}

InnerOptions RunConfig::inner_options() const {
  InnerOptions o;
  if (method) o.method = *method;
  o.grid.h_target = h;
  o.grid.margin = margin;
  if (tol) o.obstacle.tol = *tol;
  if (omega) o.obstacle.omega = *omega;
  if (max_iter) o.obstacle.max_iter = *max_iter;
  return o;
}

SweepOptions RunConfig::sweep_options() const {
  SweepOptions o;
  o.inner = inner_options();
  o.jobs = jobs.value_or(0);
  return o;
}

MinimizeOptions RunConfig::minimize_options() const {
  MinimizeOptions o;
  o.sweep = sweep_options();
  o.window = window;
  o.step = step;
  o.refine_width = refine_width;
  return o;
}

}  // namespace sobolev

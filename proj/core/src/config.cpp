#include "peakon/config.hpp"

#include <fstream>
#include <sstream>

#include "peakon/error.hpp"

namespace peakon {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

/// Drops a trailing comment outside double quotes.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (!quoted && (s[i] == '#' || s[i] == ';')) return s.substr(0, i);
  }
  return s;
}

std::string unquote(const std::string& v, int line) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find('"') != std::string::npos) throw ConfigError("unbalanced quotes", line);
  return v;
}

double to_double(const std::string& key, const std::string& v, int line) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigError("'" + key + "' expects a number, got '" + v + "'", line);
  return d;
}

std::vector<double> to_list(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) out.push_back(to_double(key, trim(item), line));
  if (out.empty()) throw ConfigError("'" + key + "' expects a comma-separated list", line);
  return out;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' expects true or false, got '" + v + "'", line);
}

}  // namespace

void RunConfig::validate() const {
  if (f.empty()) throw ConfigError("missing field 'f' in [equation]", 0);
  if (g.empty()) throw ConfigError("missing field 'g' in [equation]", 0);
  const std::pair<const char*, double> positive[] = {{"quad_tol", quad_tol}, {"ode_tol", ode_tol},
                                                     {"eps_ext", eps_ext},   {"A_max", A_max},
                                                     {"gap_min", gap_min},   {"sample_dt", sample_dt},
                                                     {"slope_tol", slope_tol}};
  for (const auto& [name, v] : positive)
    if (!(v > 0)) throw ConfigError(std::string("'") + name + "' must be positive", 0);
  if (ladder_points < 3) throw ConfigError("'ladder_points' must be at least 3", 0);
  if (a.size() != x.size()) throw ConfigError("'a' and 'x' must have the same length", 0);
}

RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int line = 0;
  int equation_line = 0;
  bool have_f = false, have_g = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("malformed section header", line);
      section = trim(text.substr(1, text.size() - 2));
      if (section != "equation" && section != "run" && section != "tolerances" && section != "output")
        throw ConfigError("unknown section [" + section + "]", line);
      if (section == "equation") equation_line = line;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = unquote(trim(text.substr(eq + 1)), line);
    if (key.empty()) throw ConfigError("empty key", line);
    if (section.empty()) throw ConfigError("'" + key + "' appears before any section", line);

    if (section == "equation") {
      if (key == "f" || key == "g") {
        if (value.empty()) throw ConfigError("field '" + key + "' is empty", line);
        const ParseOutcome parsed = try_parse_expr(value);
        if (!parsed.expr) throw ConfigError("field '" + key + "': " + parsed.message, line);
        (key == "f" ? cfg.f : cfg.g) = value;
        (key == "f" ? have_f : have_g) = true;
      } else {
        cfg.params[key] = to_double(key, value, line);
      }
    } else if (section == "run") {
      if (key == "mode") {
        static const char* modes[] = {"simulate", "simulate-n", "classify", "verify", "design-breather", "catalog"};
        bool ok = false;
        for (const char* m : modes) ok = ok || value == m;
        if (!ok) throw ConfigError("unknown mode '" + value + "'", line);
        cfg.mode = value;
      } else if (key == "t0") {
        cfg.t0 = to_double(key, value, line);
      } else if (key == "horizon") {
        cfg.horizon = to_double(key, value, line);
      } else if (key == "sample_dt") {
        cfg.sample_dt = to_double(key, value, line);
      } else if (key == "A") {
        cfg.A = to_double(key, value, line);
      } else if (key == "X") {
        cfg.X = to_double(key, value, line);
      } else if (key == "a") {
        cfg.a = to_list(key, value, line);
      } else if (key == "x") {
        cfg.x = to_list(key, value, line);
      } else if (key == "oscillatory") {
        cfg.oscillatory = to_bool(key, value, line);
      } else {
        throw ConfigError("unknown key '" + key + "' in [run]", line);
      }
    } else if (section == "tolerances") {
      if (key == "quad_tol") {
        cfg.quad_tol = to_double(key, value, line);
      } else if (key == "ode_tol") {
        cfg.ode_tol = to_double(key, value, line);
      } else if (key == "eps_ext") {
        cfg.eps_ext = to_double(key, value, line);
      } else if (key == "A_max") {
        cfg.A_max = to_double(key, value, line);
      } else if (key == "gap_min") {
        cfg.gap_min = to_double(key, value, line);
      } else if (key == "slope_tol") {
        cfg.slope_tol = to_double(key, value, line);
      } else if (key == "ladder_points") {
        cfg.ladder_points = static_cast<int>(to_double(key, value, line));
      } else {
        throw ConfigError("unknown key '" + key + "' in [tolerances]", line);
      }
      const double v = to_double(key, value, line);
      if (!(v > 0)) throw ConfigError("'" + key + "' must be positive", line);
    } else {
      if (key == "csv") {
        cfg.csv_path = value;
      } else if (key == "report") {
        cfg.report_path = value;
      } else {
        throw ConfigError("unknown key '" + key + "' in [output]", line);
      }
    }
  }
  const bool needs_equation = cfg.mode != "catalog" && cfg.mode != "design-breather";
  if (needs_equation) {
    if (!equation_line) throw ConfigError("missing section [equation]", line);
    if (!have_f) throw ConfigError("missing field 'f' in [equation]", equation_line);
    if (!have_g) throw ConfigError("missing field 'g' in [equation]", equation_line);
  }
  if (cfg.a.size() != cfg.x.size()) throw ConfigError("'a' and 'x' must have the same length", line);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

}  // namespace peakon

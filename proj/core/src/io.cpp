#include "peakon/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "peakon/error.hpp"

#ifndef PEAKON_VERSION
#define PEAKON_VERSION "0.0.0"
#endif

namespace peakon {

using nlohmann::ordered_json;

const char* version() { return PEAKON_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_comment(const NonlinearitySpec& spec, const std::map<std::string, double>& tolerances) {
  std::ostringstream os;
  os << "# peakon " << version() << "; f = " << spec.f_text << "; g = " << spec.g_text << "; params:";
  for (const auto& [k, v] : spec.params) os << ' ' << k << '=' << format_double(v);
  os << "; tolerances:";
  for (const auto& [k, v] : tolerances) os << ' ' << k << '=' << format_double(v);
  return os.str();
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const std::string& comment) {
  if (!comment.empty()) out << comment << '\n';
  out << "t,A,X,Xdot,Xddot,M,H1\n";
  for (const auto& s : traj.samples) {
    out << format_double(s.t) << ',' << format_double(s.A) << ',' << format_double(s.X) << ','
        << format_double(s.Xdot) << ',' << format_double(s.Xddot) << ',' << format_double(2 * s.A) << ','
        << format_double(2 * s.A * s.A) << '\n';
  }
}

void write_ntrajectory_csv(std::ostream& out, const NTrajectory& traj, const std::string& comment) {
  if (!comment.empty()) out << comment << '\n';
  const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().a.size();
  out << 't';
  for (std::size_t i = 1; i <= n; ++i) out << ",a_" << i;
  for (std::size_t i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",M,H1\n";
  for (const auto& s : traj.samples) {
    out << format_double(s.t);
    for (double v : s.a) out << ',' << format_double(v);
    for (double v : s.x) out << ',' << format_double(v);
    const Functionals f = functionals_of(s.t, s.a, s.x);
    out << ',' << format_double(f.M) << ',' << format_double(f.H1) << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  if (t == "inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw ConfigError("not a number: '" + t + "'", line);
  return v;
}

ordered_json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

template <typename T>
void put_optional(ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = number(*v);
}

ordered_json events_json(const std::vector<EventRecord>& events) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : events) {
    ordered_json ev;
    ev["kind"] = to_string(e.kind);
    ev["time"] = number(e.time);
    ordered_json payload = ordered_json::object();
    for (const auto& [k, v] : e.payload) payload[k] = number(v);
    ev["payload"] = payload;
    arr.push_back(ev);
  }
  return arr;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
  Trajectory traj;
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  int it = -1, iA = -1, iX = -1, iV = -1, iAcc = -1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
        const std::string name = trim(cells[k]);
        if (name == "t") it = k;
        if (name == "A") iA = k;
        if (name == "X") iX = k;
        if (name == "Xdot") iV = k;
        if (name == "Xddot") iAcc = k;
      }
      if (it < 0 || iA < 0 || iX < 0) throw ConfigError("trajectory CSV needs columns t, A, X", lineno);
      continue;
    }
    if (cells.size() != header.size()) throw ConfigError("row has the wrong number of columns", lineno);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    traj.samples.push_back({parse_number(cells[it], lineno), parse_number(cells[iA], lineno),
                            parse_number(cells[iX], lineno), iV >= 0 ? parse_number(cells[iV], lineno) : nan,
                            iAcc >= 0 ? parse_number(cells[iAcc], lineno) : nan});
    if (traj.samples.size() > 1 && !(traj.samples.back().t > traj.samples[traj.samples.size() - 2].t))
      throw ConfigError("sample times must be strictly increasing", lineno);
  }
  if (header.empty()) throw ConfigError("trajectory CSV has no header", lineno);
  return traj;
}

std::string report_json(const BehaviorReport& r) {
  ordered_json j;
  j["mode"] = r.mode;
  j["direction"] = r.direction;
  ordered_json amp;
  amp["class"] = to_string(r.amplitude);
  put_optional(amp, "value", r.amplitude_value);
  put_optional(amp, "time", r.amplitude_time);
  if (r.extinction) amp["extinction"] = to_string(*r.extinction);
  j["amplitude"] = amp;
  ordered_json pos;
  pos["class"] = to_string(r.position);
  put_optional(pos, "value", r.position_value);
  put_optional(pos, "time", r.position_time);
  if (r.position_bounded) pos["bounded"] = *r.position_bounded;
  j["position"] = pos;
  ordered_json rev = ordered_json::array();
  for (double t : r.reversals) rev.push_back(number(t));
  j["reversals"] = rev;
  ordered_json evs = ordered_json::array();
  for (const auto& e : r.evidence) {
    ordered_json ev;
    ev["condition"] = e.condition;
    ordered_json probes = ordered_json::array();
    for (const auto& [x, v] : e.probes) probes.push_back({number(x), number(v)});
    ev["probes"] = probes;
    put_optional(ev, "statistic", e.statistic);
    ev["verdict"] = to_string(e.verdict);
    if (!e.detail.empty()) ev["detail"] = e.detail;
    evs.push_back(ev);
  }
  j["evidence"] = evs;
  j["notes"] = r.notes;
  return j.dump(2);
}

std::string verification_json(const VerificationReport& r) {
  ordered_json j;
  j["max_ode_residual"] = number(r.max_ode_residual);
  j["functional_drift"] = {{"M", number(r.functional_drift.M)}, {"H1", number(r.functional_drift.H1)}};
  j["functional_identity"] = number(r.functional_identity);
  j["offpeak_residual"] = number(r.offpeak_residual);
  j["offpeak_order"] = number(r.offpeak_order);
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = number(c.value);
    cj["threshold"] = number(c.threshold);
    cj["pass"] = c.pass;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["passed"] = r.passed();
  return j.dump(2);
}

std::string run_json(const Trajectory& traj) {
  ordered_json j;
  j["termination"] = to_string(traj.termination);
  if (!traj.message.empty()) j["message"] = traj.message;
  j["direction"] = traj.direction;
  j["steps"] = traj.steps;
  j["samples"] = traj.samples.size();
  j["events"] = events_json(traj.events);
  return j.dump(2);
}

std::string run_json(const NTrajectory& traj) {
  ordered_json j;
  j["termination"] = to_string(traj.termination);
  if (!traj.message.empty()) j["message"] = traj.message;
  j["direction"] = traj.direction;
  j["steps"] = traj.steps;
  j["samples"] = traj.samples.size();
  j["events"] = events_json(traj.events);
  return j.dump(2);
}

}  // namespace peakon

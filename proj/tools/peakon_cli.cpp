// Command-line front end: simulations, classification sweeps, verification and
// figure data.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "peakon/analytic.hpp"
#include "peakon/classify.hpp"
#include "peakon/config.hpp"
#include "peakon/error.hpp"
#include "peakon/io.hpp"
#include "peakon/npeakon.hpp"
#include "peakon/reduce.hpp"
#include "peakon/single.hpp"
#include "peakon/verify.hpp"

namespace fs = std::filesystem;
using namespace peakon;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kEarly = 3 };

struct Flags {
  std::string config;
  std::string f, g;
  std::vector<std::string> params;
  std::optional<double> t0, horizon, sample_dt;
  std::string init_A, init_X;
  std::string out, report;
  std::string sweep;
  bool oscillatory = false;
  int jobs = 0;
  std::string csv_in;
  std::string catalog_id;
  std::string figure;
  double breather_a = 1, breather_kappa = 1, breather_c = 0;
};

void add_common(CLI::App* cmd, Flags& fl) {
  cmd->add_option("--config", fl.config, "INI run description");
  cmd->add_option("--f", fl.f, "f(u, ux) expression");
  cmd->add_option("--g", fl.g, "g(u, ux) expression");
  cmd->add_option("--param", fl.params, "parameter k=v (repeatable)")->allow_extra_args(false);
  cmd->add_option("--t0", fl.t0, "initial time");
  cmd->add_option("--horizon", fl.horizon, "final time (may be below t0)");
  cmd->add_option("--sample-dt", fl.sample_dt, "output sampling interval");
  cmd->add_option("--init-A", fl.init_A, "initial amplitude (comma list for simulate-n)");
  cmd->add_option("--init-X", fl.init_X, "initial position (comma list for simulate-n)");
  cmd->add_option("--out", fl.out, "CSV output path (stdout if omitted)");
  cmd->add_option("--report", fl.report, "JSON report path");
  cmd->add_flag("--oscillatory", fl.oscillatory, "continue through amplitude turning points");
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::istringstream is(s);
  std::string item;
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(std::string("bad number in ") + what + ": '" + item + "'", 0);
    }
  }
  return out;
}

std::pair<std::string, double> parse_assignment(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected k=v, got '" + kv + "'", 0);
  const auto v = parse_list(kv.substr(eq + 1), "--param");
  if (v.size() != 1) throw ConfigError("expected a single value in '" + kv + "'", 0);
  return {kv.substr(0, eq), v.front()};
}

/// Config file first, then command-line flags on top.
RunConfig resolve(const Flags& fl, bool needs_equation = true) {
  RunConfig cfg;
  if (!fl.config.empty()) cfg = load_config(fl.config);
  if (!fl.f.empty()) cfg.f = fl.f;
  if (!fl.g.empty()) cfg.g = fl.g;
  for (const auto& kv : fl.params) cfg.params.insert_or_assign(parse_assignment(kv).first, parse_assignment(kv).second);
  if (fl.t0) cfg.t0 = *fl.t0;
  if (fl.horizon) cfg.horizon = *fl.horizon;
  if (fl.sample_dt) cfg.sample_dt = *fl.sample_dt;
  if (fl.oscillatory) cfg.oscillatory = true;
  if (!fl.out.empty()) cfg.csv_path = fl.out;
  if (!fl.report.empty()) cfg.report_path = fl.report;
  if (needs_equation) {
    if (cfg.f.empty()) throw ConfigError("missing field 'f' (use --f or [equation] f)", 0);
    if (cfg.g.empty()) throw ConfigError("missing field 'g' (use --g or [equation] g)", 0);
  }
  return cfg;
}

std::map<std::string, double> tolerance_map(const RunConfig& cfg) {
  return {{"quad_tol", cfg.quad_tol}, {"ode_tol", cfg.ode_tol}, {"eps_ext", cfg.eps_ext},
          {"A_max", cfg.A_max},       {"gap_min", cfg.gap_min}, {"sample_dt", cfg.sample_dt}};
}

IntegratorOptions integrator_options(const RunConfig& cfg) {
  IntegratorOptions o;
  o.tol = cfg.ode_tol;
  o.sample_dt = cfg.sample_dt;
  o.A_max = cfg.A_max;
  o.eps_ext = cfg.eps_ext;
  o.oscillatory = cfg.oscillatory;
  return o;
}

ReduceOptions reduce_options(const RunConfig& cfg) {
  ReduceOptions o;
  o.quad_tol = cfg.quad_tol;
  return o;
}

/// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write '" + path + "'", 0);
  os << text;
  if (!text.empty() && text.back() != '\n') os << '\n';
}

int exit_for(Termination t) {
  switch (t) {
    case Termination::HorizonReached: return kOk;
    case Termination::DomainError: return kNumeric;
    default: return kEarly;
  }
}

int cmd_simulate(const Flags& fl) {
  RunConfig cfg = resolve(fl);
  if (!fl.init_A.empty()) cfg.A = parse_list(fl.init_A, "--init-A").at(0);
  if (!fl.init_X.empty()) cfg.X = parse_list(fl.init_X, "--init-X").at(0);
  if (!cfg.A) throw ConfigError("missing initial amplitude (--init-A or [run] A)", 0);
  const NonlinearitySpec spec = make_spec(cfg.f, cfg.g, cfg.params);
  ReducedSystem rs(spec, reduce_options(cfg));
  const Trajectory traj = integrate1(rs, {cfg.t0, *cfg.A, cfg.X.value_or(0.0)}, cfg.horizon, integrator_options(cfg));
  std::ostringstream csv;
  write_trajectory_csv(csv, traj, csv_comment(spec, tolerance_map(cfg)));
  emit(cfg.csv_path, csv.str());
  if (!cfg.report_path.empty()) emit(cfg.report_path, run_json(traj));
  if (!traj.message.empty()) std::cerr << "peakon: " << traj.message << '\n';
  return exit_for(traj.termination);
}

int cmd_simulate_n(const Flags& fl) {
  RunConfig cfg = resolve(fl);
  if (!fl.init_A.empty()) cfg.a = parse_list(fl.init_A, "--init-A");
  if (!fl.init_X.empty()) cfg.x = parse_list(fl.init_X, "--init-X");
  if (cfg.a.empty() || cfg.a.size() != cfg.x.size())
    throw ConfigError("simulate-n needs equally long amplitude and position lists", 0);
  const NonlinearitySpec spec = make_spec(cfg.f, cfg.g, cfg.params);
  ReducedSystem rs(spec, reduce_options(cfg));
  NIntegratorOptions o;
  o.tol = cfg.ode_tol;
  o.sample_dt = cfg.sample_dt;
  o.gap_min = cfg.gap_min;
  o.A_max = cfg.A_max;
  const NTrajectory traj = integrateN(rs, {cfg.t0, cfg.a, cfg.x}, cfg.horizon, o);
  std::ostringstream csv;
  write_ntrajectory_csv(csv, traj, csv_comment(spec, tolerance_map(cfg)));
  emit(cfg.csv_path, csv.str());
  if (!cfg.report_path.empty()) emit(cfg.report_path, run_json(traj));
  if (!traj.message.empty()) std::cerr << "peakon: " << traj.message << '\n';
  return exit_for(traj.termination);
}

ClassifyOptions classify_options(const RunConfig& cfg) {
  ClassifyOptions o;
  o.slope_tol = cfg.slope_tol;
  o.ladder_points = cfg.ladder_points;
  o.integrator = integrator_options(cfg);
  return o;
}

/// "name=v1,v2;name2=w1,w2" -> cartesian product in row-major order.
std::vector<ParamMap> expand_sweep(const std::string& spec) {
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  std::istringstream is(spec);
  std::string part;
  while (std::getline(is, part, ';')) {
    if (part.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep axis needs name=v1,v2,...: '" + part + "'", 0);
    std::string name = part.substr(0, eq);
    name.erase(std::remove_if(name.begin(), name.end(), ::isspace), name.end());
    axes.emplace_back(name, parse_list(part.substr(eq + 1), "--sweep"));
  }
  if (axes.empty()) throw ConfigError("empty --sweep", 0);
  std::vector<ParamMap> grid{ParamMap{}};
  for (const auto& [name, values] : axes) {
    std::vector<ParamMap> next;
    for (const auto& base : grid)
      for (double v : values) {
        ParamMap m = base;
        m[name] = v;
        next.push_back(std::move(m));
      }
    grid = std::move(next);
  }
  return grid;
}

int cmd_classify(const Flags& fl) {
  RunConfig cfg = resolve(fl);
  if (!fl.init_A.empty()) cfg.A = parse_list(fl.init_A, "--init-A").at(0);
  if (!fl.init_X.empty()) cfg.X = parse_list(fl.init_X, "--init-X").at(0);
  if (!cfg.A) throw ConfigError("missing initial amplitude (--init-A or [run] A)", 0);
  const PeakonState init{cfg.t0, *cfg.A, cfg.X.value_or(0.0)};
  const ClassifyOptions copts = classify_options(cfg);

  if (fl.sweep.empty()) {
    ReducedSystem rs(make_spec(cfg.f, cfg.g, cfg.params), reduce_options(cfg));
    const BehaviorReport rep = classify_numeric(rs, init, cfg.horizon, copts);
    emit(cfg.report_path.empty() ? cfg.csv_path : cfg.report_path, report_json(rep));
    return rep.amplitude == AmplitudeClass::Undetermined ? kNumeric : kOk;
  }

  const auto grid = expand_sweep(fl.sweep);
  const fs::path dir = cfg.csv_path.empty() ? fs::path("sweep") : fs::path(cfg.csv_path);
  fs::create_directories(dir);
  std::vector<std::string> amp(grid.size()), pos(grid.size()), errors(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      ParamMap params = cfg.params;
      for (const auto& [k, v] : grid[i]) params[k] = v;
      nlohmann::ordered_json job;
      job["params"] = params;
      try {
        ReducedSystem rs(make_spec(cfg.f, cfg.g, params), reduce_options(cfg));
        const BehaviorReport rep = classify_numeric(rs, init, cfg.horizon, copts);
        amp[i] = to_string(rep.amplitude);
        pos[i] = to_string(rep.position);
        job["report"] = nlohmann::ordered_json::parse(report_json(rep));
      } catch (const Error& e) {
        errors[i] = e.what();
        job["error"] = e.what();
      }
      char name[32];
      std::snprintf(name, sizeof name, "job_%04zu.json", i);
      std::ofstream(dir / name, std::ios::binary) << job.dump(2) << '\n';
    }
  };
  unsigned n_workers = fl.jobs > 0 ? static_cast<unsigned>(fl.jobs) : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers, static_cast<unsigned>(grid.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  nlohmann::ordered_json summary = nlohmann::ordered_json::array();
  bool failed = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    nlohmann::ordered_json row;
    char name[32];
    std::snprintf(name, sizeof name, "job_%04zu.json", i);
    row["job"] = name;
    row["params"] = grid[i];
    if (!errors[i].empty()) {
      row["error"] = errors[i];
      failed = true;
    } else {
      row["amplitude"] = amp[i];
      row["position"] = pos[i];
    }
    summary.push_back(row);
  }
  emit(cfg.report_path, summary.dump(2));
  return failed ? kNumeric : kOk;
}

int cmd_verify(const Flags& fl) {
  RunConfig cfg = resolve(fl);
  std::ifstream in(fl.csv_in);
  if (!in) throw ConfigError("cannot open trajectory '" + fl.csv_in + "'", 0);
  const Trajectory traj = read_trajectory_csv(in);
  ReducedSystem rs(make_spec(cfg.f, cfg.g, cfg.params), reduce_options(cfg));
  VerifyOptions vo;
  vo.oscillatory = cfg.oscillatory;
  const VerificationReport rep = verify_trajectory(rs, traj, vo);
  emit(cfg.report_path, verification_json(rep));
  return rep.passed() ? kOk : kNumeric;
}

std::string snippet(const NonlinearitySpec& spec, const std::string& heading) {
  std::ostringstream os;
  if (!heading.empty()) os << "# " << heading << '\n';
  os << "[equation]\n";
  os << "f = \"" << spec.f_text << "\"\n";
  os << "g = \"" << spec.g_text << "\"\n";
  for (const auto& [k, v] : spec.params) os << k << " = " << format_double(v) << '\n';
  return os.str();
}

int cmd_design_breather(const Flags& fl) {
  const NonlinearitySpec spec = design_breather(fl.breather_a, fl.breather_kappa, fl.breather_c);
  std::ostringstream os;
  os << snippet(spec, "breather A = a cos(kappa t), speed c") << "\n[run]\nmode = simulate\nA = "
     << format_double(fl.breather_a) << "\nX = 0\nt0 = 0\nhorizon = "
     << format_double(4 * std::numbers::pi / std::fabs(fl.breather_kappa)) << "\noscillatory = true\n";
  emit(fl.out, os.str());
  return kOk;
}

int cmd_catalog(const Flags& fl) {
  std::ostringstream os;
  if (fl.catalog_id.empty()) {
    for (CatalogId id : all_catalog_ids()) {
      const CatalogEntry e = make_entry(id);
      os << snippet(e.spec, to_string(id)) << "; constants:";
      for (const auto& [k, v] : e.params)
        if (!e.spec.params.count(k)) os << ' ' << k << '=' << format_double(v);
      os << "; domain (" << format_double(e.domain.lo) << ", " << format_double(e.domain.hi) << ")\n\n";
    }
  } else {
    ParamMap overrides;
    for (const auto& kv : fl.params) overrides.insert(parse_assignment(kv));
    CatalogId id;
    try {
      id = catalog_id_from_string(fl.catalog_id);
    } catch (const Error& e) {
      throw ConfigError(e.what(), 0);
    }
    const CatalogEntry e = make_entry(id, overrides);
    os << snippet(e.spec, to_string(e.id));
    os << "; domain (" << format_double(e.domain.lo) << ", " << format_double(e.domain.hi) << ")\n";
  }
  emit(fl.out, os.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// Figure presets

struct Figure {
  CatalogId id;
  double t_lo, t_hi, t_start;
  bool oscillatory;
};

Figure figure_preset(const std::string& name) {
  if (name == "fig1") return {CatalogId::AsymptoticEx2, -10, 10, 0, false};
  if (name == "fig2") return {CatalogId::ReversingEx3, -6, 6, 0, false};
  if (name == "fig3") return {CatalogId::DissipatingEx5, -10, 10, 0, false};
  if (name == "fig4") return {CatalogId::BlowupEx5, -10, 0.99, 0, false};
  if (name == "fig5") return {CatalogId::Breather, 0, 2 * std::numbers::pi, 0, true};
  throw ConfigError("unknown figure '" + name + "' (fig1..fig5)", 0);
}

int cmd_demo(const Flags& fl) {
  const Figure fig = figure_preset(fl.figure);
  const CatalogEntry e = make_entry(fig.id);
  ReducedSystem rs(e.spec);
  IntegratorOptions o;
  o.sample_dt = 0.01;
  o.oscillatory = fig.oscillatory;
  const PeakonState start = exact_state(e, fig.t_start);

  // Integrate away from t_start in both directions; each half runs toward its
  // attracting end state.
  std::vector<TrajectorySample> samples;
  Termination worst = Termination::HorizonReached;
  if (fig.t_lo < fig.t_start) {
    const Trajectory back = integrate1(rs, start, fig.t_lo, o);
    samples.insert(samples.end(), back.samples.begin(), back.samples.end() - 1);
    if (back.termination != Termination::HorizonReached) worst = back.termination;
  }
  const Trajectory fwd = integrate1(rs, start, fig.t_hi, o);
  samples.insert(samples.end(), fwd.samples.begin(), fwd.samples.end());
  if (fwd.termination != Termination::HorizonReached) worst = fwd.termination;

  Trajectory merged;
  merged.samples = samples;
  merged.termination = worst;
  std::ostringstream csv;
  write_trajectory_csv(csv, merged, csv_comment(e.spec, {{"ode_tol", o.tol}, {"sample_dt", o.sample_dt}}));
  const std::string out = fl.out.empty() ? "demo-" + fl.figure + ".csv" : fl.out;
  emit(out, csv.str());

  // u(x, t) on a coarse grid for surface plots.
  std::ostringstream surf;
  surf << "# u(x,t) = A(t) exp(-|x - X(t)|) for " << to_string(e.id) << '\n' << "t,x,u\n";
  const std::size_t stride = std::max<std::size_t>(1, samples.size() / 100);
  for (std::size_t i = 0; i < samples.size(); i += stride) {
    const auto& s = samples[i];
    for (int k = 0; k <= 80; ++k) {
      const double x = s.X - 8 + 0.2 * k;
      surf << format_double(s.t) << ',' << format_double(x) << ','
           << format_double(s.A * std::exp(-std::fabs(x - s.X))) << '\n';
    }
  }
  fs::path sp(out);
  sp.replace_extension(".surface.csv");
  emit(sp.string(), surf.str());
  return exit_for(worst);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamical peakon simulator"};
  app.set_version_flag("--version", std::string(peakon::version()));
  app.require_subcommand(1);
  Flags fl;

  auto* sim = app.add_subcommand("simulate", "integrate a single peakon");
  add_common(sim, fl);
  auto* simn = app.add_subcommand("simulate-n", "integrate an N-peakon superposition");
  add_common(simn, fl);
  auto* cls = app.add_subcommand("classify", "classify amplitude and position behavior");
  add_common(cls, fl);
  cls->add_option("--sweep", fl.sweep, "parameter grid, e.g. \"p=1,2;q=-1,1\"");
  cls->add_option("--jobs", fl.jobs, "worker threads for --sweep");
  auto* ver = app.add_subcommand("verify", "check a trajectory CSV against its equation");
  add_common(ver, fl);
  ver->add_option("trajectory", fl.csv_in, "trajectory CSV")->required();
  auto* brz = app.add_subcommand("design-breather", "equation for A = a cos(kappa t) moving at speed c");
  brz->add_option("--amplitude", fl.breather_a, "a");
  brz->add_option("--kappa", fl.breather_kappa, "kappa");
  brz->add_option("--speed", fl.breather_c, "c");
  brz->add_option("--out", fl.out, "output path");
  auto* cat = app.add_subcommand("catalog", "list closed-form examples as config snippets");
  cat->add_option("id", fl.catalog_id, "entry id");
  cat->add_option("--param", fl.params, "parameter override k=v")->allow_extra_args(false);
  cat->add_option("--out", fl.out, "output path");
  auto* demo = app.add_subcommand("demo", "figure data: trajectory CSV and u(x,t) surface");
  demo->add_option("figure", fl.figure, "fig1..fig5")->required();
  demo->add_option("--out", fl.out, "trajectory CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sim) return cmd_simulate(fl);
    if (*simn) return cmd_simulate_n(fl);
    if (*cls) return cmd_classify(fl);
    if (*ver) return cmd_verify(fl);
    if (*brz) return cmd_design_breather(fl);
    if (*cat) return cmd_catalog(fl);
    if (*demo) return cmd_demo(fl);
  } catch (const ConfigError& e) {
    std::cerr << "peakon: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "peakon: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "peakon: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "peakon: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

#include <sstream>

#include <gtest/gtest.h>

#include "peakon/analytic.hpp"
#include "peakon/config.hpp"
#include "peakon/error.hpp"
#include "peakon/io.hpp"

using namespace peakon;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalChRun) {
  const auto cfg = parse_config_text("[equation]\nf = \"ux\"\ng = u\n[run]\nA = 1\nX = 0\n");
  EXPECT_EQ(cfg.f, "ux");
  EXPECT_EQ(cfg.g, "u");
  EXPECT_EQ(cfg.mode, "simulate");
  EXPECT_EQ(*cfg.A, 1.0);
  EXPECT_EQ(*cfg.X, 0.0);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, FullDocument) {
  const auto cfg = parse_config_text(R"ini(# reversal demo
[equation]
f = "k*(u-2)*(u-1)"   ; f
g = "lam*(3-2*u)"
k = 1
lam = 1
[run]
mode = simulate
t0 = -6
horizon = 6
sample_dt = 0.05
A = 1.0000061
oscillatory = false
[tolerances]
ode_tol = 1e-11
ladder_points = 12
[output]
csv = out.csv
report = out.json
)ini");
  EXPECT_EQ(cfg.params.at("k"), 1.0);
  EXPECT_EQ(cfg.params.at("lam"), 1.0);
  EXPECT_EQ(cfg.t0, -6.0);
  EXPECT_EQ(cfg.sample_dt, 0.05);
  EXPECT_EQ(cfg.ode_tol, 1e-11);
  EXPECT_EQ(cfg.ladder_points, 12);
  EXPECT_EQ(cfg.csv_path, "out.csv");
  EXPECT_EQ(cfg.report_path, "out.json");
}

TEST(Config, MissingGNamesField) {
  const std::string text = "[run]\nA = 1\n[equation]\nf = ux\n";
  EXPECT_EQ(error_line(text), 3);
  EXPECT_NE(error_text(text).find("missing field 'g'"), std::string::npos);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[equation]\nf = ux\ng = u\n[run]\nA = abc\n"), 5);
  EXPECT_EQ(error_line("[equation]\nf = 2u\ng = u\n"), 2);
  EXPECT_EQ(error_line("[equation]\nf = ux\ng = u\n[bogus]\n"), 4);
  EXPECT_EQ(error_line("[equation]\nf = ux\ng = u\n[tolerances]\nquad_tol = -1\n"), 5);
  EXPECT_EQ(error_line("[equation]\nf = ux\ng = u\n[run]\nspeed = 3\n"), 5);
  EXPECT_EQ(error_line("f = ux\n"), 1);
  EXPECT_EQ(error_line("[equation]\nf = ux\ng = u\n[run]\na = 1, 2\nx = 0\n"), 6);
}

TEST(Config, CatalogModeNeedsNoEquation) {
  EXPECT_NO_THROW(parse_config_text("[run]\nmode = catalog\n"));
  EXPECT_EQ(error_line("[run]\nmode = simulate\n"), 2);
}

TEST(Io, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0 / 0.0), "inf");
  EXPECT_EQ(format_double(-1.0 / 0.0), "-inf");
}

TEST(Io, CsvRoundTrip) {
  const auto e = make_entry(CatalogId::AsymptoticEx2);
  ReducedSystem rs(e.spec);
  const auto tr = integrate1(rs, exact_state(e, 0), 1);
  std::stringstream ss;
  write_trajectory_csv(ss, tr, csv_comment(e.spec, {{"ode_tol", 1e-10}}));
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("# peakon ", 0), 0u);
  EXPECT_NE(text.find("\nt,A,X,Xdot,Xddot,M,H1\n"), std::string::npos);
  const auto back = read_trajectory_csv(ss);
  ASSERT_EQ(back.samples.size(), tr.samples.size());
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    EXPECT_EQ(back.samples[i].t, tr.samples[i].t);
    EXPECT_EQ(back.samples[i].A, tr.samples[i].A);
    EXPECT_EQ(back.samples[i].X, tr.samples[i].X);
    EXPECT_EQ(back.samples[i].Xdot, tr.samples[i].Xdot);
  }
}

TEST(Io, CsvErrors) {
  std::stringstream missing("t,A\n0,1\n");
  EXPECT_THROW(read_trajectory_csv(missing), ConfigError);
  std::stringstream order("t,A,X\n0,1,0\n0,1,0\n");
  EXPECT_THROW(read_trajectory_csv(order), ConfigError);
  std::stringstream junk("t,A,X\n0,1,zz\n");
  try {
    read_trajectory_csv(junk);
    ADD_FAILURE();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Io, ReportJsonFields) {
  const auto r = classify_power_family(1, 2, 1, 1, 0);
  const std::string j = report_json(r);
  for (const char* key : {"\"mode\"", "\"amplitude\"", "\"position\"", "\"reversals\"", "\"evidence\"", "\"class\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
  EXPECT_EQ(j, report_json(classify_power_family(1, 2, 1, 1, 0)));
}

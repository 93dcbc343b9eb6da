#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <branegeo/manifest.hpp>
#include <branegeo/report.hpp>
#include <branegeo/verify.hpp>

#include "schema_check.hpp"

using namespace branegeo;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testing_support::read_file;
using testing_support::schema_errors;

namespace {

const std::string kSource = BRANEGEO_SOURCE_DIR;

const std::string kSphere = R"m([ambient]
signature = "+,+,+"
[chart]
params = phi, theta
phi = 0..2*pi
theta = 0..pi
[embedding]
x1 = "sin(theta)*cos(phi)"
x2 = "sin(theta)*sin(phi)"
x3 = "cos(theta)"
)m";

ManifestError manifest_error(const std::string& text) {
  try {
    parse_manifest(text);
  } catch (const ManifestError& e) {
    return e;
  }
  FAIL("manifest was accepted");
  throw;
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("manifest parsing", "[manifest]") {
  const auto mf = parse_manifest(kSphere);
  CHECK(mf.chart.m() == 2);
  CHECK(mf.chart.n() == 3);
  CHECK(mf.chart.params == std::vector<std::string>{"phi", "theta"});
  CHECK_THAT(mf.chart.domain[0].second, WithinRel(2 * M_PI, 1e-15));
  CHECK_FALSE(mf.samples.has_value());

  const auto x = mf.chart.position({0.3, 1.1});
  CHECK_THAT(x[0], WithinRel(std::sin(1.1) * std::cos(0.3), 1e-15));
  CHECK_THAT(x[2], WithinRel(std::cos(1.1), 1e-15));

  const auto file = load_manifest(kSource + "/manifests/sphere.txt");
  CHECK(file.chart.name == "sphere-manifest");
  CHECK(file.samples == 64);
  CHECK(file.seed == 42u);
  CHECK(file.grid == "16x16");
  REQUIRE(file.chart.field("rotation"));
  CHECK(file.chart.field("rotation")->expect_killing);
}

TEST_CASE("manifest errors carry kind and line", "[manifest]") {
  {
    const auto e = manifest_error(replace(kSphere, "x3 = \"cos(theta)\"\n", ""));
    CHECK(e.kind == "DimensionMismatch");
  }
  {
    const auto e = manifest_error(replace(kSphere, "params = phi, theta", "params = phi, phi"));
    CHECK(e.kind == "DuplicateParameter");
    CHECK(e.line == 4);
    CHECK_THAT(std::string(e.what()), ContainsSubstring("phi"));
  }
  {
    const auto e = manifest_error(replace(kSphere, "theta = 0..pi\n", "theta = 0..pi\ncolour = red\n"));
    CHECK(e.kind == "UnknownKey");
    CHECK(e.line == 7);
  }
  {
    const auto e = manifest_error(replace(kSphere, "x2 = \"sin(theta)*sin(phi)\"", "x2 = \"sin(theta*sin(phi)\""));
    CHECK(e.kind == "SyntaxError");
    CHECK(e.line == 9);
  }
  {
    const auto e = manifest_error(replace(kSphere, "\"+,+,+\"", "\"-,+,+\""));
    CHECK(e.kind == "SyntaxError");
    CHECK(e.line == 2);
  }
  CHECK(manifest_error(replace(kSphere, "[chart]", "[charts]")).kind == "UnknownKey");
  CHECK(manifest_error(kSphere + "[killing spin]\nX_phi = \"1\"\n").kind == "DimensionMismatch");
  CHECK_THROWS_AS(load_manifest(kSource + "/manifests/missing.txt"), Error);
}

TEST_CASE("every shipped manifest verifies cleanly", "[manifest][verify]") {
  for (const std::string f : {"sphere", "torus", "catenoid", "ds2", "s3"}) {
    const auto mf = load_manifest(kSource + "/manifests/" + f + ".txt");
    VerifyOptions opt;
    opt.samples = 8;
    const auto r = run_verify(mf.chart, opt);
    INFO(f << "\n" << summary_text(r));
    CHECK(r.exit_code() == 0);
  }
}

TEST_CASE("verify runs and exit codes", "[verify]") {
  VerifyOptions opt;
  opt.samples = 16;
  const auto plane = run_verify(builtin_chart("plane"), opt);
  CHECK(plane.exit_code() == 0);
  CHECK(plane.failures() == 0);

  const auto sphere = run_verify(builtin_chart("sphere"), opt);
  CHECK(sphere.exit_code() == 0);
  int scalars = 0;
  for (const auto& r : sphere.checks)
    if (r.name == "scalar_curvature") {
      ++scalars;
      CHECK_THAT(r.lhs_norm, WithinRel(2.0, 1e-9));
    }
  CHECK(scalars == 16);
  for (const auto& s : sphere.sign_ledger) {
    INFO(s.key);
    CHECK(s.observed() == s.declared);
  }

  opt.order = 2;
  const auto low = run_verify(builtin_chart("sphere"), opt);
  CHECK(low.exit_code() == 3);
  CHECK(low.failures() == 0);
  std::set<std::string> skipped;
  for (const auto& r : low.checks)
    if (r.status == "precondition") skipped.insert(r.name);
  CHECK(skipped == std::set<std::string>{"curvature", "second_derivatives", "killing", "hills"});

  opt.order = 0;
  CHECK_THROWS_AS(run_verify(builtin_chart("sphere"), opt), Error);
}

TEST_CASE("check records obey the tolerance rule", "[verify][property]") {
  VerifyOptions opt;
  opt.samples = 8;
  for (const auto& name : builtin_names()) {
    const auto r = run_verify(builtin_chart(name), opt);
    for (const auto& c : r.checks) {
      if (c.status == "precondition" || c.method == "twist" || c.name == "killing_negative_control") continue;
      INFO(name << " " << c.name);
      CHECK(c.pass == opt.tol.accepts(c.abs_residual, c.lhs_norm, c.rhs_norm));
      CHECK(c.pass == (c.status == "pass"));
      const double denom = c.lhs_norm + c.rhs_norm;
      if (denom > 0) CHECK_THAT(c.rel_residual, WithinRel(c.abs_residual / denom, 1e-12));
    }
  }
}

TEST_CASE("torus scalar report matches the Gaussian curvature", "[report]") {
  const auto chart = builtin_chart("torus");
  ReportOptions opt;
  opt.grid = {16, 16};
  opt.quantities = {"scalar"};
  const auto rep = run_report(chart, opt);
  REQUIRE(rep.rows.size() == 256);
  REQUIRE(rep.columns.size() == 5);
  CHECK(rep.columns[3].name == "scalar");
  CHECK(rep.columns[4].name == "gaussian");
  const double R = 2.0, r = 0.5;
  for (const auto& row : rep.rows) {
    const double v = *row[2];
    const double K = std::cos(v) / (r * (R + r * std::cos(v)));
    CHECK_THAT(*row[3], WithinAbs(2 * K, 1e-6));
    CHECK_THAT(*row[4], WithinAbs(K, 1e-6));
  }
}

TEST_CASE("plane report is flat", "[report]") {
  ReportOptions opt;
  opt.grid = {3, 4};
  opt.quantities = report_quantities();
  const auto rep = run_report(builtin_chart("plane"), opt);
  REQUIRE(rep.rows.size() == 12);
  for (const auto& row : rep.rows)
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
      const auto& name = rep.columns[c].name;
      if (name.rfind("sectional", 0) == 0 || name.rfind("ricci", 0) == 0 || name == "scalar" ||
          name == "curvature_norm" || name.rfind("shape", 0) == 0 || name == "hills_residual")
        CHECK(*row[c] == 0.0);
      if (name == "hills_source_trace") CHECK_FALSE(row[c].has_value());
      if (name == "hills_vacuum") CHECK(*row[c] == 1.0);
      if (name == "g_u_u") CHECK(*row[c] == 1.0);
      if (name == "g_u_v") CHECK(*row[c] == 0.0);
    }
  opt.quantities = {"torsion"};
  CHECK_THROWS_AS(run_report(builtin_chart("plane"), opt), Error);
}

TEST_CASE("outputs are deterministic and schema valid", "[report][verify]") {
  const std::string verify_schema = read_file(kSource + "/schemas/verify.schema.json");
  const std::string report_schema = read_file(kSource + "/schemas/report.schema.json");
  REQUIRE_FALSE(verify_schema.empty());
  REQUIRE_FALSE(report_schema.empty());

  VerifyOptions vo;
  vo.samples = 6;
  for (const auto& name : builtin_names()) {
    const auto chart = builtin_chart(name);
    const auto a = to_json(run_verify(chart, vo)).dump(2);
    const auto b = to_json(run_verify(chart, vo)).dump(2);
    CHECK(a == b);
    INFO(name);
    CHECK(schema_errors(verify_schema, a).empty());
  }
  const auto sphere = builtin_chart("sphere");
  const auto killing = to_json(run_killing(sphere, resolve_field(sphere, "twist"), vo)).dump(2);
  CHECK(schema_errors(verify_schema, killing).empty());

  ReportOptions ro;
  ro.grid = {4, 4};
  ro.quantities = report_quantities();
  const auto r1 = run_report(sphere, ro), r2 = run_report(sphere, ro);
  CHECK(report_csv(r1) == report_csv(r2));
  const auto js = report_json(r1).dump(2);
  CHECK(js == report_json(r2).dump(2));
  CHECK(schema_errors(report_schema, js).empty());

  CHECK_FALSE(schema_errors(verify_schema, js).empty());
}

TEST_CASE("csv layout", "[report]") {
  ReportOptions ro;
  ro.grid = {2, 2};
  ro.quantities = {"metric"};
  const auto csv = report_csv(run_report(builtin_chart("plane"), ro));
  CHECK_THAT(csv, ContainsSubstring("# target: plane\n"));
  CHECK_THAT(csv, ContainsSubstring("# grid: 2x2\n"));
  CHECK_THAT(csv, ContainsSubstring("\nindex,u,v,g_u_u,g_u_v,g_v_v\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2 + 6 + 1 + 4);
  CHECK(csv.find("-0,") == std::string::npos);
}

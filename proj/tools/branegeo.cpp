#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <branegeo/manifest.hpp>
#include <branegeo/report.hpp>
#include <branegeo/verify.hpp>

namespace bg = branegeo;

namespace {

constexpr int kExitInput = 2;

struct Target {
  std::string manifold, manifest;
  bg::ChartOptions chart;
};

struct Resolved {
  bg::Chart chart;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
};

void add_target(CLI::App* cmd, Target& t, bool shape_flags) {
  auto* g = cmd->add_option_group("target");
  g->add_option("--manifold", t.manifold, "builtin manifold name (see 'examples')");
  g->add_option("--manifest", t.manifest, "plain-text manifest file");
  g->require_option(1);
  if (shape_flags) {
    cmd->add_option("--radius", t.chart.radius, "sphere radius")->capture_default_str();
    cmd->add_option("--major", t.chart.major, "torus major radius")->capture_default_str();
    cmd->add_option("--minor", t.chart.minor, "torus minor radius")->capture_default_str();
  }
}

Resolved resolve(const Target& t) {
  if (!t.manifest.empty()) {
    auto mf = bg::load_manifest(t.manifest);
    return {std::move(mf.chart), mf.samples, mf.seed, mf.grid};
  }
  return {bg::builtin_chart(t.manifold, t.chart), {}, {}, {}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw bg::Error("cannot write '" + path + "'");
  f << text;
}

void print_examples() {
  for (const auto& name : bg::builtin_names()) {
    const auto c = bg::builtin_chart(name);
    std::printf("%-15s m=%d n=%d signature=(%d,%d) params=", name.c_str(), c.m(), c.n(), c.ambient.p,
                c.ambient.q);
    for (std::size_t i = 0; i < c.params.size(); ++i)
      std::printf("%s%s[%.6g,%.6g]", i ? "," : "", c.params[i].c_str(), c.domain[i].first, c.domain[i].second);
    std::printf(" fields=");
    for (std::size_t i = 0; i < c.fields.size(); ++i)
      std::printf("%s%s%s", i ? "," : "", c.fields[i].name.c_str(), c.fields[i].expect_killing ? "" : "(control)");
    std::printf("\n");
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = s.find(',', pos);
    out.push_back(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford-algebra brane geometry: identity verification and curvature reports"};
  app.require_subcommand(1);

  auto* ex = app.add_subcommand("examples", "list the builtin manifolds");

  Target vt;
  std::optional<int> v_samples;
  std::optional<std::uint64_t> v_seed;
  std::optional<double> v_tol;
  int v_order = 3;
  std::string v_json;
  auto* ver = app.add_subcommand("verify", "run the identity suite at seeded sample points");
  add_target(ver, vt, true);
  ver->add_option("--samples", v_samples, "number of sample points (default 64)")->check(CLI::PositiveNumber);
  ver->add_option("--seed", v_seed, "sampling seed (default 42)");
  ver->add_option("--tol", v_tol, "relative tolerance (default 1e-8)")->check(CLI::PositiveNumber);
  ver->add_option("--order", v_order, "jet order 1..3")->check(CLI::Range(1, 3))->capture_default_str();
  ver->add_option("--json", v_json, "write the JSON report to FILE ('-' for stdout)");

  Target rt;
  std::string r_grid, r_quant = "metric,shape,curvature,ricci,scalar,hills", r_format = "csv", r_out = "-";
  auto* rep = app.add_subcommand("report", "tabulate geometric quantities over a grid");
  add_target(rep, rt, true);
  rep->add_option("--grid", r_grid, "grid shape such as 32x32 (default from manifest, else 16 per axis)");
  rep->add_option("--quantities", r_quant, "comma list from metric,shape,curvature,ricci,scalar,hills")
      ->capture_default_str();
  rep->add_option("--format", r_format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  rep->add_option("--out", r_out, "output file ('-' for stdout)")->capture_default_str();

  Target kt;
  std::string k_field, k_json;
  int k_samples = 16;
  std::uint64_t k_seed = 42;
  auto* kil = app.add_subcommand("killing", "check a vector field for the Killing and Maxwell identities");
  add_target(kil, kt, true);
  kil->add_option("--field", k_field, "catalog field name or comma-separated components")->required();
  kil->add_option("--samples", k_samples, "number of sample points")->check(CLI::PositiveNumber)->capture_default_str();
  kil->add_option("--seed", k_seed, "sampling seed")->capture_default_str();
  kil->add_option("--json", k_json, "write the JSON report to FILE ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*ex) {
      print_examples();
      return 0;
    }
    if (*ver) {
      auto t = resolve(vt);
      bg::VerifyOptions opt;
      opt.samples = v_samples.value_or(t.samples.value_or(64));
      opt.seed = v_seed.value_or(t.seed.value_or(42));
      opt.order = v_order;
      if (v_tol) opt.tol.rel = *v_tol;
      const auto res = bg::run_verify(t.chart, opt);
      if (!v_json.empty()) write_text(v_json, bg::to_json(res).dump(2) + "\n");
      if (v_json != "-") std::fputs(bg::summary_text(res).c_str(), stdout);
      return res.exit_code();
    }
    if (*rep) {
      auto t = resolve(rt);
      bg::ReportOptions opt;
      const std::string grid = !r_grid.empty() ? r_grid : t.grid.value_or("");
      opt.grid = grid.empty() ? std::vector<int>(t.chart.m(), 16) : bg::parse_grid(grid);
      opt.quantities = split_commas(r_quant);
      opt.format = r_format;
      const auto r = bg::run_report(t.chart, opt);
      write_text(r_out, r_format == "csv" ? bg::report_csv(r) : bg::report_json(r).dump(2) + "\n");
      return 0;
    }
    if (*kil) {
      auto t = resolve(kt);
      bg::VerifyOptions opt;
      opt.samples = k_samples;
      opt.seed = k_seed;
      const auto field = bg::resolve_field(t.chart, k_field);
      const auto res = bg::run_killing(t.chart, field, opt);
      if (!k_json.empty()) write_text(k_json, bg::to_json(res).dump(2) + "\n");
      if (k_json != "-") std::fputs(bg::summary_text(res).c_str(), stdout);
      return res.exit_code();
    }
  } catch (const bg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}

// Acceptance criteria, one PASS/FAIL line each. Arguments: CLI binary, source tree.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <branegeo/classical.hpp>
#include <branegeo/report.hpp>
#include <branegeo/verify.hpp>

#include "schema_check.hpp"

using namespace branegeo;
using testing_support::read_file;
using testing_support::schema_errors;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double nrm(const Field& f) { return values(f).norm(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[65536];
  std::size_t k;
  while ((k = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

// Relative difference with an absolute floor for quantities that vanish.
double rel_diff(double diff, double a, double b) {
  const double scale = std::max(a, b);
  return diff <= 1e-12 ? 0.0 : diff / scale;
}

constexpr std::uint64_t kSeed = 42;

Outcome flat_plane() {
  const auto t0 = Clock::now();
  const auto chart = builtin_chart("plane");
  double worst = 0;
  for (const auto& u : sample_points(chart.domain, 100, kSeed)) {
    const Geometry g(frame_point(chart, u, 3));
    const auto cc = g.connection();
    const auto s = curvature_sample(g);
    for (const auto& f : s.table) worst = std::max(worst, nrm(f));
    for (int a = 0; a < g.m(); ++a) {
      worst = std::max(worst, nrm(g.shape_biform(g.theta(a))));
      worst = std::max(worst, nrm(ricci(g, s, g.theta(a), RicciMethod::Contract)));
      worst = std::max(worst, nrm(shape_squared(g, g.theta(a))));
    }
    worst = std::max(worst, std::abs(curvature_scalar(g, s)));
    for (double t : riemann_torsion_components(frame_components(g, cc, false)).T) worst = std::max(worst, std::abs(t));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 5.0, "max norm " + fmt("%.3g", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome sphere_scalar() {
  double worst = 0, worst_oracle = 0;
  for (double r : {0.5, 1.0, 2.0}) {
    ChartOptions o;
    o.radius = r;
    const auto chart = builtin_chart("sphere", o);
    for (const auto& u : sample_points(chart.domain, 64, kSeed)) {
      const Geometry g(frame_point(chart, u, 3));
      const double R = curvature_scalar(g, curvature_sample(g));
      worst = std::max(worst, std::abs(std::abs(R) - 2.0 / (r * r)));
      worst_oracle = std::max(worst_oracle, std::abs(std::abs(R) - std::abs(classical_curvature(chart, u).scalar)));
    }
  }
  return {worst < 1e-6 && worst_oracle < 1e-6,
          "max ||R| - 2/r^2| " + fmt("%.3g", worst) + ", max gap to Christoffel oracle " + fmt("%.3g", worst_oracle)};
}

Outcome shape_squared_vs_ricci_operator() {
  double worst = 0, worst_flipped = 0;
  for (const std::string name : {"sphere", "torus", "ds2", "hyperbolic-h2"}) {
    const auto chart = builtin_chart(name);
    const auto pts = sample_points(chart.domain, 64, kSeed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Geometry g(frame_point(chart, pts[i], 3));
      const auto cc = g.connection();
      PointRandom rnd(g, kSeed, i);
      const Field v = rnd.tangent();
      const Field s2 = shape_squared(g, v);
      const Field dd = ricci_operator(g, cc, v);
      const double denom = nrm(dd);
      worst = std::max(worst, nrm(s2 + dd) / denom);
      worst_flipped = std::max(worst_flipped, nrm(s2 - dd) / denom);
    }
  }
  return {worst < 1e-6, "max ||S^2 v + d^d v|| / ||d^d v|| = " + fmt("%.3g", worst) +
                            "; with the opposite sign the ratio is " + fmt("%.3g", worst_flipped)};
}

Outcome four_methods() {
  double worst = 0, worst_abs = 0;
  for (const auto& name : builtin_names()) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 64, kSeed)) {
      const Geometry g(frame_point(chart, u, 3));
      std::vector<CurvatureSample> s;
      for (auto m : kCurvatureMethods) s.push_back(curvature_sample(g, m));
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
          for (std::size_t k = 0; k < s[i].table.size(); ++k) {
            const auto& x = s[i].table[k];
            const auto& y = s[j].table[k];
            worst = std::max(worst, rel_diff(nrm(x - y), nrm(x), nrm(y)));
            worst_abs = std::max(worst_abs, nrm(x - y));
          }
    }
  }
  return {worst < 1e-7, "max pairwise relative residual " + fmt("%.3g", worst) + " (absolute " +
                            fmt("%.3g", worst_abs) + ", differences below 1e-12 count as zero)"};
}

Outcome torus_gaussian() {
  const auto chart = builtin_chart("torus");
  const double R = 2.0, r = 0.5;
  double worst = 0;
  for (const auto& u : grid_points(chart.domain, {32, 32})) {
    const Geometry g(frame_point(chart, u, 3));
    const double K = curvature_scalar(g, curvature_sample(g)) / 2.0;
    worst = std::max(worst, std::abs(K - std::cos(u[1]) / (r * (R + r * std::cos(u[1])))));
  }
  return {worst < 1e-6, "max |K - oracle| " + fmt("%.3g", worst) + " over 1024 points"};
}

Outcome clifford_torus() {
  const auto chart = builtin_chart("clifford-torus");
  double curv = 0, shape = 0;
  for (const auto& u : sample_points(chart.domain, 64, kSeed)) {
    const Geometry g(frame_point(chart, u, 3));
    for (const auto& f : curvature_sample(g).table) curv = std::max(curv, nrm(f));
    for (int a = 0; a < g.m(); ++a) shape = std::max(shape, nrm(g.shape_biform(g.theta(a))));
  }
  return {curv < 1e-8 && shape > 0.5, "max curvature norm " + fmt("%.3g", curv) + ", max shape norm " + fmt("%.6g", shape)};
}

Outcome identity_suite() {
  VerifyOptions opt;
  std::size_t total = 0, failed = 0, skipped = 0;
  double worst = 0;
  std::string first;
  for (const auto& name : builtin_names()) {
    const auto r = run_verify(builtin_chart(name), opt);
    for (const auto& c : r.checks) {
      ++total;
      if (c.status == "precondition") ++skipped;
      if (c.status == "fail" || c.status == "error") {
        ++failed;
        if (first.empty()) first = " (first: " + name + " " + c.name + ")";
      }
      if (c.name != "killing_negative_control" && c.abs_residual > opt.tol.abs)
        worst = std::max(worst, c.rel_residual);
    }
  }
  return {failed == 0 && skipped == 0, std::to_string(total) + " checks, " + std::to_string(failed) + " failed, " +
                                           std::to_string(skipped) + " skipped, max relative residual " +
                                           fmt("%.3g", worst) + " above the 1e-10 absolute floor" + first};
}

Outcome intrinsic_vs_extrinsic() {
  double worst = 0, torsion = 0;
  int observed = 0;
  const int declared = default_sign_ledger().at(1).declared;
  for (const std::string name : {"sphere", "torus"}) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 64, kSeed)) {
      const Geometry g(frame_point(chart, u, 3));
      const int m = g.m();
      const auto rt = riemann_torsion_components(frame_components(g, g.connection(), true));
      const auto Rt = curvature_tensor(g, curvature_sample(g));
      double dot = 0;
      for (int d = 0; d < m; ++d)
        for (int c = 0; c < m; ++c)
          for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
              const double comp = rt.r(d, c, a, b) * g.frame().eta_tangent[d];
              const double ext = Rt[((a * m + b) * m + c) * m + d];
              worst = std::max(worst, std::abs(comp - declared * ext));
              dot += comp * ext;
            }
      observed += dot > 0 ? 1 : dot < 0 ? -1 : 0;
      for (double t : rt.T) torsion = std::max(torsion, std::abs(t));
    }
  }
  return {worst < 1e-6 && torsion < 1e-8, "max component gap " + fmt("%.3g", worst) + " under declared sign " +
                                              std::to_string(declared) + " (observed net " + std::to_string(observed) +
                                              "/128), max torsion " + fmt("%.3g", torsion)};
}

Outcome killing_maxwell() {
  double delta = 0, e4 = 0, maxwell = 0, flipped = 0, control = 1e300;
  std::string controls;
  for (const auto& [name, field] : {std::pair{"sphere", "rotation"}, std::pair{"ds2", "boost"}}) {
    const auto chart = builtin_chart(name);
    const auto pts = sample_points(chart.domain, 64, kSeed);
    for (const auto& u : pts) {
      const Geometry g(frame_point(chart, u, 3));
      const auto t = maxwell_terms(g, g.connection(), dual_oneform(g, *chart.field(field)));
      delta = std::max(delta, t.delta_A);
      e4 = std::max(e4, (t.ricci_op - t.laplacian).norm());
      maxwell = std::max(maxwell, (t.diracF + t.shape2 * 2.0).norm());
      flipped = std::max(flipped, (t.diracF - t.shape2 * 2.0).norm());
    }
    for (const auto& f : chart.fields) {
      if (f.expect_killing) continue;
      double best = 0;
      for (const auto& u : pts) {
        const Geometry g(frame_point(chart, u, 3));
        best = std::max(best, killing_residual(g, dual_oneform(g, f)).killing_norm);
      }
      control = std::min(control, best);
      controls += " " + std::string(name) + ":" + f.name + "=" + fmt("%.3g", best);
    }
  }
  return {delta < 1e-8 && e4 < 1e-7 && maxwell < 1e-6 && control > 0.1,
          "delta A " + fmt("%.3g", delta) + ", E4 " + fmt("%.3g", e4) + ", ||dirac F + 2 S^2(A)|| " +
              fmt("%.3g", maxwell) + " (||dirac F - 2 S^2(A)|| " + fmt("%.3g", flipped) +
              "), control Killing norms" + controls};
}

Outcome interfaces(const std::string& cli, const std::string& src) {
  const std::string vs = read_file(src + "/schemas/verify.schema.json");
  const std::string rs = read_file(src + "/schemas/report.schema.json");
  std::vector<std::string> problems;
  auto twice = [&](const std::string& args, const std::string& schema) {
    const auto a = run(cli + " " + args);
    const auto b = run(cli + " " + args);
    if (a.out.empty()) problems.push_back("no output: " + args);
    if (a.out != b.out || a.status != b.status) problems.push_back("not byte-identical: " + args);
    if (!schema.empty()) {
      const auto err = schema_errors(schema, a.out);
      if (!err.empty()) problems.push_back(args + ": " + err);
    }
  };
  twice("verify --manifold sphere --samples 16 --json -", vs);
  twice("verify --manifold ds2 --samples 16", "");
  twice("killing --manifold sphere --field twist --samples 8 --json -", vs);
  twice("report --manifold torus --grid 8x8", "");
  twice("report --manifold sphere --grid 6x6 --format json", rs);
  twice("report --manifest " + src + "/manifests/s3.txt --grid 3x3x3 --format json", rs);

  const auto t0 = Clock::now();
  int bad_exit = 0;
  for (const auto& name : builtin_names()) {
    const auto r = run(cli + " verify --manifold " + name + " --json - 2>/dev/null");
    if (r.status != 0) ++bad_exit;
    const auto err = schema_errors(vs, r.out);
    if (!err.empty()) problems.push_back(name + ": " + err);
  }
  const double secs = seconds_since(t0);
  if (bad_exit) problems.push_back(std::to_string(bad_exit) + " default runs exited nonzero");
  if (secs >= 60.0) problems.push_back("default suite took " + fmt("%.1f", secs) + " s");
  std::string detail = "default suite over all builtins " + fmt("%.2f", secs) + " s";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance CLI SOURCE_DIR\n");
    return 2;
  }
  const std::string cli = argv[1], src = argv[2];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"flat plane vanishes", flat_plane},
      {"sphere scalar curvature", sphere_scalar},
      {"S^2 = -d^d", shape_squared_vs_ricci_operator},
      {"four curvature methods agree", four_methods},
      {"torus Gaussian curvature", torus_gaussian},
      {"Clifford torus flat but bent", clifford_torus},
      {"identity suite", identity_suite},
      {"frame components vs curvature biform", intrinsic_vs_extrinsic},
      {"Killing and Maxwell", killing_maxwell},
      {"determinism and interfaces", [&] { return interfaces(cli, src); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed ? 1 : 0;
}

#include <catch_amalgamated.hpp>

#include <cmath>

#include <branegeo/verify.hpp>

using namespace branegeo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using MV = Multivector<double>;

namespace {

Geometry at(const std::string& name, std::vector<double> u, int order = 3, ChartOptions opt = {}) {
  return Geometry(frame_point(builtin_chart(name, opt), u, order));
}

double norm(const Field& f) { return values(f).norm(); }

double torus_gaussian(double v, double R = 2.0, double r = 0.5) { return std::cos(v) / (r * (R + r * std::cos(v))); }

}  // namespace

TEST_CASE("plane is flat under every formula", "[curvature]") {
  const auto g = at("plane", {0.2, -0.7});
  const auto cc = g.connection();
  for (auto m : kCurvatureMethods) CHECK(norm(curvature_biform(g, g.theta(0), g.theta(1), m)) == 0.0);
  const auto s = curvature_sample(g);
  for (auto r : {RicciMethod::Contract, RicciMethod::Doubled, RicciMethod::Operator})
    CHECK(norm(ricci(g, s, g.theta(0), r, &cc)) == 0.0);
  CHECK(norm(shape_squared(g, g.theta(1))) == 0.0);
  CHECK(curvature_scalar(g, s) == 0.0);
}

TEST_CASE("Clifford torus is intrinsically flat yet extrinsically curved", "[curvature]") {
  const auto chart = builtin_chart("clifford-torus");
  for (const auto& u : sample_points(chart.domain, 32, 42)) {
    const Geometry g(frame_point(chart, u, 3));
    for (auto m : kCurvatureMethods) REQUIRE(norm(curvature_biform(g, g.theta(0), g.theta(1), m)) < 1e-8);
    REQUIRE(norm(g.shape_biform(g.theta(0))) > 0.5);
    const auto cl = classical_curvature(chart, u);
    for (double x : cl.riemann) REQUIRE(std::abs(x) < 1e-8);
  }
}

TEST_CASE("round sphere curvature biform, Ricci form and scalar", "[curvature]") {
  const auto g = at("sphere", {0.7, 1.1});
  const auto s = curvature_sample(g);
  const MV B = values(wedge(g.theta(0), g.theta(1)));
  // ℜ(θ^1∧θ^2) = κ θ^1∧θ^2 with κ = +1 in this convention
  CHECK((values(s.at(0, 1)) - B).norm() < 1e-13);
  for (int a = 0; a < 2; ++a) CHECK(norm(ricci(g, s, g.theta(a), RicciMethod::Contract) - g.theta(a)) < 1e-13);
  CHECK_THAT(curvature_scalar(g, s), WithinRel(2.0, 1e-12));
  for (double r : {0.5, 1.0, 2.0}) {
    const auto gr = at("sphere", {2.0, 0.6}, 3, ChartOptions{r});
    CHECK_THAT(curvature_scalar(gr, curvature_sample(gr)), WithinRel(2.0 / (r * r), 1e-10));
  }
}

TEST_CASE("hyperbolic plane has the opposite scalar curvature", "[curvature]") {
  const auto g = at("hyperbolic-h2", {0.6, 1.1});
  CHECK_THAT(curvature_scalar(g, curvature_sample(g)), WithinRel(-2.0, 1e-12));
}

TEST_CASE("torus Ricci form at the outer equator", "[curvature]") {
  const auto g = at("torus", {0.6, 0.0});
  const auto s = curvature_sample(g);
  for (int a = 0; a < 2; ++a) {
    const double k = scalar_product(ricci(g, s, g.theta(a), RicciMethod::Contract), g.theta_lower(a)).value();
    CHECK_THAT(k, WithinRel(torus_gaussian(0.0), 1e-10));
    CHECK_THAT(k, WithinRel(0.8, 1e-12));
  }
}

TEST_CASE("scalar curvature agrees with the Christoffel oracle", "[curvature][oracle]") {
  // frozen oracle values at (0.6, 1.1)
  const std::vector<std::pair<std::string, double>> want = {
      {"plane", 0.0}, {"sphere", 2.0}, {"clifford-torus", 0.0}, {"ds2", -2.0}, {"hyperbolic-h2", -2.0},
      {"torus", 2 * torus_gaussian(1.1)}};
  for (const auto& [name, r] : want) {
    const auto chart = builtin_chart(name);
    const auto cl = classical_curvature(chart, {0.6, 1.1});
    CHECK_THAT(cl.scalar, WithinAbs(r, 1e-9));
    const Geometry g(frame_point(chart, {0.6, 1.1}, 3));
    CHECK_THAT(curvature_scalar(g, curvature_sample(g)), WithinAbs(cl.scalar, 1e-9));
  }
  for (const auto& name : builtin_names()) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 16, 3)) {
      const Geometry g(frame_point(chart, u, 3));
      const double R = curvature_scalar(g, curvature_sample(g));
      REQUIRE_THAT(R, WithinAbs(classical_curvature(chart, u).scalar, 1e-8 * std::max(1.0, std::abs(R))));
    }
  }
}

TEST_CASE("torus Gaussian curvature matches the closed form", "[curvature][oracle]") {
  const auto chart = builtin_chart("torus");
  for (const auto& u : grid_points(chart.domain, {8, 8})) {
    const Geometry g(frame_point(chart, u, 2));
    REQUIRE_THAT(curvature_scalar(g, curvature_sample(g)) / 2, WithinAbs(torus_gaussian(u[1]), 1e-10));
  }
}

TEST_CASE("four curvature formulas agree on every builtin", "[curvature][property]") {
  for (const auto& name : builtin_names()) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 64, 42)) {
      const Geometry g(frame_point(chart, u, 3));
      PointRandom rnd(g, 42, 0);
      const Field a = rnd.tangent(), b = rnd.tangent();
      const MV ref = values(curvature_biform(g, a, b, CurvatureMethod::Shape));
      for (auto m : kCurvatureMethods) {
        const MV x = values(curvature_biform(g, a, b, m));
        INFO(name << " " << method_name(m));
        REQUIRE((x - ref).norm() <= 1e-7 * std::max(1.0, x.norm() + ref.norm()));
        REQUIRE((values(curvature_biform(g, b, a, m)) + x).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("shape squared is minus the Ricci form", "[curvature]") {
  for (const std::string name : {"sphere", "ds2", "torus", "hyperbolic-h2"}) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 16, 11)) {
      const Geometry g(frame_point(chart, u, 3));
      const auto s = curvature_sample(g);
      for (int a = 0; a < 2; ++a) {
        const Field S2 = shape_squared(g, g.theta(a)), R = ricci(g, s, g.theta(a), RicciMethod::Contract);
        REQUIRE(norm(S2 + R) < 1e-7 * std::max(1.0, norm(R)));
        REQUIRE(norm(g.project(S2) - S2) < 1e-10);
      }
    }
  }
}

TEST_CASE("operator routes need a third-order embedding jet", "[curvature]") {
  const auto g = at("sphere", {0.7, 1.1}, 2);
  CHECK_NOTHROW(curvature_biform(g, g.theta(0), g.theta(1), CurvatureMethod::Shape));
  CHECK_THROWS_AS(curvature_biform(g, g.theta(0), g.theta(1), CurvatureMethod::PvShape), InsufficientJetOrder);
  CHECK_THROWS_AS(shape_squared(g, g.theta(0)), InsufficientJetOrder);
  const auto cc = g.connection();
  CHECK_THROWS_AS(ricci(g, curvature_sample(g), g.theta(0), RicciMethod::Operator, &cc), InsufficientJetOrder);
}

TEST_CASE("torsion components", "[curvature]") {
  FrameComponents toy;
  toy.m = 2;
  toy.omega.assign(8, 0.0);
  toy.lie.assign(8, 0.0);
  toy.lie[(0 * 2 + 0) * 2 + 1] = 1.0;   // c^1_12
  toy.lie[(0 * 2 + 1) * 2 + 0] = -1.0;  // c^1_21
  const auto rt = riemann_torsion_components(toy);
  CHECK(rt.t(0, 0, 1) == -1.0);
  CHECK(rt.t(0, 1, 0) == 1.0);
  CHECK(rt.t(1, 0, 1) == 0.0);
  CHECK(rt.R.empty());

  toy.lie.pop_back();
  CHECK_THROWS_AS(riemann_torsion_components(toy), ShapeMismatch);

  const auto g = at("sphere", {0.4, 1.3});
  const auto lc = riemann_torsion_components(frame_components(g, g.connection(), true));
  for (double t : lc.T) CHECK(std::abs(t) < 1e-8);
}

TEST_CASE("component formula reproduces the curvature biform up to a fixed sign", "[curvature]") {
  for (const std::string name : {"sphere", "torus"}) {
    const auto chart = builtin_chart(name);
    for (const auto& u : sample_points(chart.domain, 16, 13)) {
      const Geometry g(frame_point(chart, u, 3));
      const auto rt = riemann_torsion_components(frame_components(g, g.connection(), true));
      const auto Rt = curvature_tensor(g, curvature_sample(g));
      const int m = g.m();
      const auto& eta = g.frame().eta_tangent;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          for (int c = 0; c < m; ++c)
            for (int d = 0; d < m; ++d)
              REQUIRE_THAT(rt.r(d, c, a, b) * eta[d],
                           WithinAbs(-Rt[((a * m + b) * m + c) * m + d], 1e-6));
    }
  }
}

TEST_CASE("curvature identity suite holds on every builtin", "[curvature][property]") {
  for (const auto& name : builtin_names()) {
    const auto chart = builtin_chart(name);
    std::vector<CheckRecord> recs;
    auto ledger = default_sign_ledger();
    Recorder rec(recs, ledger, Tolerance{});
    const auto pts = sample_points(chart.domain, 64, 42);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      rec.at(pts[i]);
      const Geometry g(frame_point(chart, pts[i], 3));
      PointRandom rnd(g, 42, i);
      detail::curvature_checks(chart, g, g.connection(), rnd, rec);
    }
    for (const auto& r : recs) {
      INFO(name << " " << r.name << " " << r.method << " rel " << r.rel_residual);
      REQUIRE(r.pass);
    }
    for (const auto& e : ledger) {
      INFO(name << " " << e.key);
      REQUIRE((e.observed() == 0 || e.observed() == e.declared));
    }
  }
}

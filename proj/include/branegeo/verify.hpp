#pragma once
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <optional>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "classical.hpp"
#include "curvature.hpp"
#include "killing.hpp"
#include "sampling.hpp"

namespace branegeo {

struct Tolerance {
  double rel = 1e-8;
  double abs = 1e-10;
  bool accepts(double residual, double lhs, double rhs) const {
    return residual <= std::max(abs, rel * (lhs + rhs));
  }
};

struct CheckRecord {
  std::string name;
  std::string tag;     // the identity, written out
  std::string method;  // formula variant, empty when there is only one
  std::vector<double> point;
  double lhs_norm = 0, rhs_norm = 0, abs_residual = 0, rel_residual = 0;
  bool pass = false;
  std::string status;  // pass, fail, precondition, error
  std::string message;
};

// Relations whose overall sign depends on conventions. Each one is checked
// exactly with the declared sign; the observed sign is the sign of the
// accumulated coefficient overlap between the two sides.
struct SignEntry {
  std::string key, relation;
  int declared = 1;
  double evidence = 0;
  int observed() const { return evidence > 1e-12 ? 1 : evidence < -1e-12 ? -1 : 0; }
};

inline std::vector<SignEntry> default_sign_ledger() {
  return {
      {"scalar_vs_christoffel", "sum (t^a^t^b).R(t_a^t_b) = s * g^kj Ric_kj, Ric_kj = R^i_kij, R^l_kij = d_i G^l_jk - ...", 1},
      {"components_vs_biform", "R^d_cab eta_dd = s * R(t_a^t_b).(t_c^t_d)", -1},
      {"ricci_doubled_vs_contract", "1/2 (t^a^t^b)(R(t_a^t_b) _| t^d) = s * sum t^a -| R(t_a^t^d)", -1},
      {"ricci_operator_vs_contract", "d^d t^d (commutator form) = s * sum t^a -| R(t_a^t^d)", -1},
      {"shape_squared_vs_ricci", "S^2(v) = s * Ric(v), Ric(v) = sum t^a -| R(t_a^v)", -1},
      {"shape_squared_vs_ricci_operator", "S^2(v) = s * d^d v (commutator form)", 1},
      {"maxwell_dirac", "dirac F = s * 2 S^2(A), F = dA, A Killing", 1},
      {"maxwell_codifferential", "delta F = s * 2 S^2(A), F = dA, A Killing", -1},
  };
}

struct VerifyOptions {
  int samples = 64;
  std::uint64_t seed = 42;
  int order = 3;
  Tolerance tol;
};

inline double dot(const Multivector<double>& a, const Multivector<double>& b) {
  double s = 0;
  for (Blade i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

class Recorder {
 public:
  Recorder(std::vector<CheckRecord>& out, std::vector<SignEntry>& ledger, const Tolerance& tol)
      : out_(out), ledger_(ledger), tol_(tol) {}

  void at(const std::vector<double>& point) { point_ = point; }

  void raw(const std::string& name, const std::string& tag, double lhs, double rhs, double residual,
           const std::string& method = "") {
    CheckRecord r = base(name, tag, method);
    r.lhs_norm = lhs;
    r.rhs_norm = rhs;
    r.abs_residual = residual;
    r.rel_residual = lhs + rhs > 0 ? residual / (lhs + rhs) : 0.0;
    r.pass = std::isfinite(residual) && tol_.accepts(residual, lhs, rhs);
    r.status = r.pass ? "pass" : "fail";
    out_.push_back(std::move(r));
  }

  void compare(const std::string& name, const std::string& tag, const Multivector<double>& lhs,
               const Multivector<double>& rhs, double sign = 1.0, const std::string& method = "") {
    raw(name, tag, lhs.norm(), rhs.norm(), (lhs - rhs * sign).norm(), method);
  }

  void compare(const std::string& name, const std::string& tag, const Field& lhs, const Field& rhs,
               double sign = 1.0, const std::string& method = "") {
    compare(name, tag, values(lhs), values(rhs), sign, method);
  }

  void zero(const std::string& name, const std::string& tag, const Multivector<double>& x,
            const std::string& method = "") {
    raw(name, tag, x.norm(), 0.0, x.norm(), method);
  }
  void zero(const std::string& name, const std::string& tag, const Field& x, const std::string& method = "") {
    zero(name, tag, values(x), method);
  }

  void scalar(const std::string& name, const std::string& tag, double lhs, double rhs, double sign = 1.0) {
    raw(name, tag, std::abs(lhs), std::abs(rhs), std::abs(lhs - sign * rhs));
  }

  // lhs = s * rhs with s taken from the ledger entry `key`.
  void ledger(const std::string& key, const std::string& name, const std::string& tag,
              const Multivector<double>& lhs, const Multivector<double>& rhs) {
    SignEntry& e = entry(key);
    e.evidence += dot(lhs, rhs);
    compare(name, tag, lhs, rhs, e.declared);
  }
  void ledger_scalar(const std::string& key, const std::string& name, const std::string& tag, double lhs,
                     double rhs) {
    SignEntry& e = entry(key);
    e.evidence += lhs * rhs;
    scalar(name, tag, lhs, rhs, e.declared);
  }

  void ledger_arrays(const std::string& key, const std::string& name, const std::string& tag,
                     const std::vector<double>& lhs, const std::vector<double>& rhs) {
    SignEntry& e = entry(key);
    double l = 0, r = 0, d = 0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      e.evidence += lhs[i] * rhs[i];
      l += lhs[i] * lhs[i];
      r += rhs[i] * rhs[i];
      d += (lhs[i] - e.declared * rhs[i]) * (lhs[i] - e.declared * rhs[i]);
    }
    raw(name, tag, std::sqrt(l), std::sqrt(r), std::sqrt(d));
  }

  // Negative control: passes when the value is at least `floor`.
  void at_least(const std::string& name, const std::string& tag, double value, double floor,
                const std::string& method = "") {
    CheckRecord r = base(name, tag, method);
    r.lhs_norm = value;
    r.rhs_norm = floor;
    r.pass = value >= floor;
    r.status = r.pass ? "pass" : "fail";
    out_.push_back(std::move(r));
  }

  // Runs a group of checks; jet-order shortfalls and numerical faults become records.
  template <class F>
  void guard(const std::string& name, const std::string& tag, F&& body) {
    try {
      body();
    } catch (const InsufficientJetOrder& e) {
      failure(name, tag, "precondition", std::string("InsufficientJetOrder: ") + e.what());
    } catch (const Error& e) {
      failure(name, tag, "error", e.what());
    }
  }

  void failure(const std::string& name, const std::string& tag, const std::string& status, const std::string& msg) {
    CheckRecord r = base(name, tag, "");
    r.status = status;
    r.message = msg;
    out_.push_back(std::move(r));
  }

 private:
  CheckRecord base(const std::string& name, const std::string& tag, const std::string& method) const {
    CheckRecord r;
    r.name = name;
    r.tag = tag;
    r.method = method;
    r.point = point_;
    return r;
  }

  SignEntry& entry(const std::string& key) {
    for (auto& e : ledger_)
      if (e.key == key) return e;
    throw Error("unknown sign ledger entry " + key);
  }

  std::vector<CheckRecord>& out_;
  std::vector<SignEntry>& ledger_;
  Tolerance tol_;
  std::vector<double> point_;
};

// Random inputs built from the frame at one point, drawn from a per-point stream.
class PointRandom {
 public:
  PointRandom(const Geometry& g, std::uint64_t seed, std::size_t index)
      : g_(g), rng_(seed * 0x9E3779B97F4A7C15ULL + 2 * index + 1) {}

  double coef() { return rng_.uniform(-1.0, 1.0); }

  // Σ r_a θ^a, a tangent 1-form field
  Field tangent() {
    Field v = g_.zero();
    for (int a = 0; a < g_.m(); ++a) v += g_.theta(a) * coef();
    return v;
  }

  Field normal() {
    Field v = g_.zero();
    for (const auto& nu : g_.frame().normal) v += nu * coef();
    return v;
  }

  // Constant ambient multivector of all grades.
  Field ambient() {
    Field c = g_.zero();
    for (Blade b = 0; b < c.size(); ++b) c[b] = Jet(coef());
    return c;
  }

  Field ambient_vector() {
    Field c = g_.zero();
    for (int j = 0; j < g_.sig().n(); ++j) c[Blade{1} << j] = Jet(coef());
    return c;
  }

  // Tangent field of a single grade: random combination of wedges of θ's.
  Field tangent_grade(int k) {
    Field out = g_.zero();
    const int m = g_.m();
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if (std::popcount(mask) != k) continue;
      Field w = Field::scalar(g_.sig(), Jet(coef()));
      for (int a = 0; a < m; ++a)
        if (mask & (1u << a)) w = wedge(w, g_.theta(a));
      out += w;
    }
    return out;
  }

  Field tangent_mixed() {
    Field out = g_.zero();
    for (int k = 0; k <= g_.m(); ++k) out += tangent_grade(k);
    return out;
  }

 private:
  const Geometry& g_;
  Lcg64 rng_;
};

namespace detail {

inline double frobenius(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline void frame_checks(const Geometry& g, Recorder& rec) {
  const auto& f = g.frame();
  std::vector<Field> all = f.theta;
  all.insert(all.end(), f.normal.begin(), f.normal.end());
  std::vector<int> eta = f.eta_tangent;
  eta.insert(eta.end(), f.eta_normal.begin(), f.eta_normal.end());
  double gram = 0, diag = 0, diff = 0, drift = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      const Jet x = scalar_product(all[i], all[j]);
      const double want = i == j ? eta[i] : 0.0;
      gram += x.value() * x.value();
      diag += want * want;
      diff += (x.value() - want) * (x.value() - want);
      drift = std::max(drift, x.derivative_magnitude());
    }
  rec.raw("frame_orthonormal", "theta^a . theta^b = eta^ab over tangent and normal coframe", std::sqrt(gram),
          std::sqrt(diag), std::sqrt(diff));
  rec.raw("frame_orthonormal_along_chart", "derivative parts of theta^a . theta^b vanish", drift, 0.0, drift);
  Multivector<double> wsum(g.sig());
  for (int a = 0; a < g.m(); ++a) wsum += values(wedge(g.theta(a), f.Im));
  rec.zero("tangent_wedge_pseudoscalar", "theta^a ^ I_m = 0", wsum);
  rec.scalar("pseudoscalar_inverse", "I_m I_m^-1 = 1", values(f.Im * f.Im_inv)[0], 1.0);
}

inline void projection_checks(const Geometry& g, PointRandom& rnd, Recorder& rec) {
  const Field C = rnd.ambient(), D = rnd.ambient();
  const Field v = rnd.tangent();
  rec.compare("projection_idempotent", "P(P(C)) = P(C)", g.project(g.project(C)), g.project(C));
  rec.zero("projection_complement", "P(P_perp(C)) = 0", g.project(g.project_perp(C)));
  rec.compare("projection_fixes_tangent", "P(v) = v for tangent v", g.project(v), v);
  rec.compare("projection_wedge", "P(C^D) = P(C)^P(D)", g.project(wedge(C, D)),
              wedge(g.project(C), g.project(D)));
}

inline void extrinsic_checks(const Geometry& g, const ConnectionCoefficients& cc, PointRandom& rnd, Recorder& rec) {
  const Field C = rnd.ambient(), D = rnd.ambient();
  const Field u = rnd.tangent(), w = rnd.tangent();
  const Field x = rnd.ambient_vector();
  const Field nu = rnd.normal();

  rec.compare("derivative_projection_leibniz", "P_u(C^D) = P_u(C)^P(D) + P(C)^P_u(D)", g.p_u(u, wedge(C, D)),
              wedge(g.p_u(u, C), g.project(D)) + wedge(g.project(C), g.p_u(u, D)));
  rec.compare("derivative_projection_split", "P_u(P(C)) + P(P_u(C)) = P_u(C)",
              g.p_u(u, g.project(C)) + g.project(g.p_u(u, C)), g.p_u(u, C));
  rec.compare("derivative_projection_normal_part", "P_u(w) = P_perp(u.d w)", g.p_u(u, w),
              g.project_perp(g.along(u, w)));
  rec.compare("derivative_projection_symmetric", "P_u(w) = P_w(u)", g.p_u(u, w), g.p_u(w, u));
  const Field px = g.project(x);
  rec.compare("derivative_projection_symmetric_projected", "P_u(P(x)) = P_P(x)(u)", g.p_u(u, px), g.p_u(px, u));
  const Field Cpar = g.project(C), Dperp = g.project_perp(D);
  rec.zero("derivative_projection_parallel", "P(P_u(X_par)) = 0", g.project(g.p_u(u, Cpar)));
  rec.compare("derivative_projection_perpendicular", "P(P_u(X_perp)) = P_u(X_perp)", g.project(g.p_u(u, Dperp)),
              g.p_u(u, Dperp));
  rec.compare("derivative_projection_pull_through", "P_u(C_par ^ D_perp) = C_par ^ P_u(D_perp)",
              g.p_u(u, wedge(Cpar, Dperp)), wedge(Cpar, g.p_u(u, Dperp)));

  const Field& Im = g.frame().Im;
  const Field Sv = g.shape_biform(u), Sw = g.shape_biform(w);
  rec.zero("pseudoscalar_parallel", "D_v I_m = 0", g.covariant(u, Im));
  rec.zero("shape_biform_contract_pseudoscalar", "S(v) -| I_m = 0", left_contract(Sv, Im));
  rec.zero("shape_biform_wedge_pseudoscalar", "S(v) ^ I_m = 0", wedge(Sv, Im));
  rec.zero("shape_biform_not_tangent", "P(S(v)) = 0", g.project(Sv));
  Field alt = g.zero();
  for (int j = 0; j < g.m(); ++j) alt -= wedge(g.project_perp(g.along(u, g.theta_lower(j))), g.theta(j));
  rec.compare("shape_biform_from_coframe", "S(v) = -sum_j P_perp(v.d theta_j) ^ theta^j", Sv, alt);
  rec.compare("shape_biform_symmetric", "v -| S(w) = w -| S(v)", left_contract(u, Sw), left_contract(w, Sv));
  rec.compare("shape_operator_on_vectors", "S(v) = S_biform(v) for tangent 1-form fields", g.shape_operator(u), Sv);

  Field a4t = g.zero(), a4n = g.zero();
  for (int a = 0; a < g.m(); ++a) {
    a4t += wedge(g.theta(a), g.p_u(g.theta_lower(a), u));
    a4n += left_contract(g.theta(a), g.p_u(g.theta_lower(a), nu));
  }
  rec.compare("shape_operator_tangent_split", "S(v) = sum_a theta^a ^ P_theta_a(v)", g.shape_operator(u), a4t);
  rec.compare("shape_operator_normal_split", "S(nu) = sum_a theta^a -| P_theta_a(nu)", g.shape_operator(nu), a4n);

  const Field T = rnd.tangent_mixed();
  rec.compare("restricted_dirac_split", "d C = dirac C + S(C)", g.restricted_dirac(T), g.dirac(T) + g.shape_operator(T));
  rec.compare("restricted_dirac_contract", "d -| C = dirac -| C", g.restricted_dirac(T, Part::Contract),
              g.dirac(T, Part::Contract));
  rec.compare("restricted_dirac_wedge_vector", "d ^ v = dirac ^ v + S(v)", g.restricted_dirac(u, Part::Wedge),
              g.dirac(u, Part::Wedge) + Sv);
  rec.compare("intrinsic_dirac_projection", "dirac C = P(d C)", g.dirac(T), g.project(g.restricted_dirac(T)));
  rec.compare("derivative_projection_commutator", "P_v(C) = P(C) x S(v) - P(C x S(v))", g.p_u(u, C),
              commutator(g.project(C), Sv) - g.project(commutator(C, Sv)));
  rec.compare("covariant_derivative_tangent", "P(D_v C) = D_v C for tangent C", g.project(g.covariant(u, T)),
              g.covariant(u, T));

  const Field om = g.connection_biform(cc, u), amb = g.ambient_connection(u);
  rec.compare("connection_projected_ambient", "w_v = P(w_amb_v)", om, g.project(amb));
  rec.zero("connection_gauge_shift", "(w_v - w_amb_v - S(v)) x C = 0 for tangent C",
           commutator(om - amb - Sv, T));
  const int m = g.m();
  double viol = 0, mag = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const double x1 = g.frame().eta_tangent[a] * cc.w(a, b, c).value();
        const double x2 = g.frame().eta_tangent[c] * cc.w(c, b, a).value();
        viol += (x1 + x2) * (x1 + x2);
        mag += x1 * x1;
      }
  rec.raw("connection_metric_compatible", "eta_a w^a_bc = -eta_c w^c_ba", std::sqrt(mag), std::sqrt(mag),
          std::sqrt(viol));
  const auto rt = riemann_torsion_components(frame_components(g, cc, false));
  rec.raw("torsion_free", "T^c_ab = w^c_ab - w^c_ba - c^c_ab = 0", frobenius(rt.T), 0.0, frobenius(rt.T));
}

inline void curvature_checks(const Chart& chart, const Geometry& g, const ConnectionCoefficients& cc,
                             PointRandom& rnd, Recorder& rec) {
  const int m = g.m();
  const Field u = rnd.tangent(), v = rnd.tangent(), w = rnd.tangent();
  std::vector<CurvatureSample> samples;
  for (auto meth : kCurvatureMethods) samples.push_back(curvature_sample(g, meth));
  const CurvatureSample& s = samples[0];

  const Field Ruv = curvature_biform(g, u, v, CurvatureMethod::Shape);
  for (std::size_t k = 1; k < kCurvatureMethods.size(); ++k) {
    const auto meth = kCurvatureMethods[k];
    rec.compare("curvature_methods_agree", "-P(S(u) x S(v)) against alternative formula", Ruv,
                curvature_biform(g, u, v, meth), 1.0, method_name(meth));
  }
  rec.zero("curvature_antisymmetric", "R(u^v) = -R(v^u)", Ruv + curvature_biform(g, v, u, CurvatureMethod::Shape));
  rec.compare("curvature_tangent", "P(R(u^v)) = R(u^v)", g.project(Ruv), Ruv);
  rec.compare("curvature_linear", "R(u^v) from frame pairs by linearity", curvature_of(g, s, wedge(u, v)), Ruv);

  const auto R = curvature_tensor(g, s);
  auto Rat = [&](int a, int b, int c, int d) { return R[((a * m + b) * m + c) * m + d]; };
  std::vector<double> v2, v3, v4, v5;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d) {
          v2.push_back(Rat(a, b, c, d) + Rat(b, a, c, d));
          v3.push_back(Rat(a, b, c, d) + Rat(a, b, d, c));
          v4.push_back(Rat(a, b, c, d) - Rat(c, d, a, b));
          v5.push_back(Rat(a, b, c, d) + Rat(b, c, a, d) + Rat(c, a, b, d));
        }
  const double rn = frobenius(R);
  rec.raw("riemann_antisymmetric_first_pair", "R(a,b,c,d) = -R(b,a,c,d)", rn, rn, frobenius(v2));
  rec.raw("riemann_antisymmetric_second_pair", "R(a,b,c,d) = -R(a,b,d,c)", rn, rn, frobenius(v3));
  rec.raw("riemann_pair_symmetric", "R(a,b,c,d) = R(c,d,a,b)", rn, rn, frobenius(v4));
  rec.raw("riemann_first_bianchi", "R(a,b,c,d) + R(b,c,a,d) + R(c,a,b,d) = 0", rn, 0.0, frobenius(v5));

  auto rho = [&](const Field& x, const Field& y, const Field& z) { return commutator(curvature_of(g, s, wedge(x, y)), z); };
  rec.zero("curvature_operator_cyclic", "rho(u,v,w) + rho(v,w,u) + rho(w,u,v) = 0",
           rho(u, v, w) + rho(v, w, u) + rho(w, u, v));

  std::vector<Field> Dw;
  for (int c = 0; c < m; ++c) Dw.push_back(g.covariant_frame(c, w));
  Multivector<double> lhs(g.sig()), rhs(g.sig());
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Field x = g.covariant_frame(a, Dw[b]) - g.covariant_frame(b, Dw[a]);
      for (int c = 0; c < m; ++c) x -= scale(Dw[c], cc.cab(c, a, b));
      lhs += values(x);
      rhs += values(right_contract(s.at(a, b), w));
    }
  rec.compare("covariant_commutator_vector", "([D_a,D_b] - c^c_ab D_c) v = R(t_a^t_b) _| v", lhs, rhs);

  // coordinate fields commute, so the bracket term drops
  const auto& gam = g.frame().gamma;
  for (int k = 0; k <= m; ++k) {
    const Field C = rnd.tangent_grade(k);
    Multivector<double> l(g.sig()), r(g.sig());
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        l += values(g.covariant_coord(i, g.covariant_coord(j, C)) - g.covariant_coord(j, g.covariant_coord(i, C)));
        r += values(commutator(curvature_of(g, s, wedge(gam[i], gam[j])), C));
      }
    rec.compare("covariant_commutator", "[D_u,D_v] C = 1/2 [R(u^v), C] on coordinate fields", l, r, 1.0,
                "grade " + std::to_string(k));
  }
  rec.zero("ricci_wedge_part", "sum_a theta^a ^ R(theta_a ^ v) = 0", ricci_wedge_part(g, s, v));
  Field np = g.zero();
  for (int k = 0; k < m; ++k)
    np += wedge(g.theta(k), g.p_u(v, g.p_u(u, g.theta_lower(k))) + g.p_u(u, g.p_u(v, g.theta_lower(k))));
  rec.zero("derivative_projection_antisymmetric_pair", "sum_w w ^ P_v P_u(w) = -sum_w w ^ P_u P_v(w)", np);

  const Field ric = ricci(g, s, v, RicciMethod::Contract);
  rec.ledger("ricci_doubled_vs_contract", "ricci_methods_agree", "Ricci 1-form by doubled contraction",
             values(ricci(g, s, v, RicciMethod::Doubled)), values(ric));
  const Field dd = ricci(g, s, v, RicciMethod::Operator, &cc);
  rec.ledger("ricci_operator_vs_contract", "ricci_methods_agree", "Ricci 1-form by commutator operator", values(dd),
             values(ric));
  const Field S2 = shape_squared(g, v);
  rec.compare("shape_squared_tangent", "P(S^2(v)) = S^2(v)", g.project(S2), S2);
  rec.ledger("shape_squared_vs_ricci", "shape_squared_ricci", "S^2(v) against the Ricci extensor", values(S2),
             values(ric));
  rec.ledger("shape_squared_vs_ricci_operator", "shape_squared_ricci_operator", "S^2(v) against d^d v", values(S2),
             values(dd));

  // classical Ricci in the coordinate basis: v = v^i γ_i, Ric(v) = g^ik Ric_kj v^j γ_i
  const auto cl = classical_curvature(chart, g.frame().u);
  std::vector<double> vl(m), vu(m, 0.0);
  for (int i = 0; i < m; ++i) vl[i] = scalar_product(v, g.frame().gamma[i]).value();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) vu[i] += cl.ginv[i][j] * vl[j];
  Multivector<double> ric_cl(g.sig());
  for (int i = 0; i < m; ++i) {
    double c = 0;
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j) c += cl.ginv[i][k] * cl.ricci[k][j] * vu[j];
    ric_cl += values(g.frame().gamma[i]) * c;
  }
  rec.compare("ricci_classical", "Ricci extensor against Christoffel Ricci tensor", values(ric), ric_cl);

  const auto rt = riemann_torsion_components(frame_components(g, cc, true));
  std::vector<double> comp, ext;
  for (int d = 0; d < m; ++d)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          comp.push_back(rt.r(d, c, a, b) * g.frame().eta_tangent[d]);
          ext.push_back(Rat(a, b, c, d));
        }
  rec.ledger_arrays("components_vs_biform", "riemann_components",
                    "component formula from w, c against R(t_a^t_b).(t_c^t_d)", comp, ext);

  const double Rs = curvature_scalar(g, s);
  rec.ledger_scalar("scalar_vs_christoffel", "scalar_curvature", "R against Christoffel scalar curvature", Rs,
                    cl.scalar);
}

inline void second_derivative_checks(const Chart& chart, const Geometry& g, const ConnectionCoefficients& cc,
                                     PointRandom& rnd, Recorder& rec) {
  require_order(g, 3, "second derivative checks");
  const int m = g.m();
  // scalar field: random combination of the embedding coordinates
  const auto x = chart.embed(jet_variables(g.frame().u, g.order()));
  Jet f(0.0);
  for (const auto& xi : x) f.axpy(rnd.coef(), xi);
  const Field F = Field::scalar(g.sig(), f);
  rec.zero("exterior_nilpotent", "d(d f) = 0", g.exterior(g.exterior(F)));
  Field top = g.zero();
  if (m >= 2) top = scale(wedge(g.theta(0), g.theta(1)), f);
  rec.zero("coderivative_nilpotent", "delta(delta C) = 0 on 2-form fields", g.coderivative(g.coderivative(top)));

  for (int k = 1; k <= std::min(m, 2); ++k) {
    const Field C = rnd.tangent_grade(k);
    const auto split = exterior_and_coderivative(g, C);
    const Field ww = ricci_operator(g, cc, C), dd = laplacian_dot(g, cc, C);
    const std::string grade = "grade " + std::to_string(k);
    rec.compare("dirac_square_split", "dirac^2 C = d^d C + d.d C", split.box, ww + dd, 1.0, grade);
    rec.compare("dirac_square_hodge", "dirac^2 C = -(d delta + delta d) C", split.box,
                -(g.exterior(split.delta) + g.coderivative(split.d)), 1.0, grade);
  }
}

// Largest Killing residual of a non-Killing field over the sample, with its point.
struct NegativeControl {
  double norm = -1;
  std::vector<double> point;
};

inline void killing_checks(const Geometry& g, const ConnectionCoefficients& cc, const VectorFieldSpec& field,
                           Recorder& rec, NegativeControl* control = nullptr) {
  const Field A = dual_oneform(g, field);
  const auto kr = killing_residual(g, A);
  if (!field.expect_killing) {
    if (control && kr.killing_norm > control->norm) *control = {kr.killing_norm, g.frame().u};
    return;
  }
  rec.raw("killing_equation", "D_a A_b + D_b A_a = 0", kr.killing_norm, 0.0, kr.killing_norm, field.name);
  rec.raw("killing_coclosed", "delta A = 0", kr.div_norm, 0.0, kr.div_norm, field.name);
  const auto t = maxwell_terms(g, cc, A);
  rec.compare("killing_ricci_laplacian", "d^d A = d.d A", t.ricci_op, t.laplacian, 1.0, field.name);
  rec.compare("killing_dirac_square", "dirac^2 A = -(d delta + delta d) A", t.box, t.minus_hodge, 1.0, field.name);
  rec.zero("field_strength_closed", "dF = 0", t.dF, field.name);
  rec.ledger("maxwell_codifferential", "maxwell_codifferential", "delta F against 2 S^2(A)", t.deltaF, t.shape2 * 2.0);
  rec.ledger("maxwell_dirac", "maxwell_dirac", "dirac F against 2 S^2(A)", t.diracF, t.shape2 * 2.0);
}

inline void hills_checks(const Geometry& g, const CurvatureSample& s, Recorder& rec) {
  const auto rep = hills_report(g, s);
  for (std::size_t a = 0; a < rep.frames.size(); ++a) {
    const auto& h = rep.frames[a];
    rec.compare("hills_rearrangement", "S^2(theta^a) = T^a - 1/2 T theta^a", h.shape2, h.source - h.trace_term, 1.0,
                "frame " + std::to_string(a));
  }
}

inline void verify_point(const Chart& chart, const std::vector<double>& u, std::size_t index,
                         const VerifyOptions& opt, Recorder& rec, std::vector<NegativeControl>& controls) {
  rec.at(u);
  std::optional<Geometry> g;
  rec.guard("frame_construction", "adapted orthonormal frame exists", [&] { g.emplace(frame_point(chart, u, opt.order)); });
  if (!g) return;
  PointRandom rnd(*g, opt.seed, index);
  rec.guard("frame", "adapted orthonormal frame", [&] { frame_checks(*g, rec); });
  rec.guard("projection", "projection identities", [&] { projection_checks(*g, rnd, rec); });
  std::optional<ConnectionCoefficients> cc;
  rec.guard("extrinsic", "shape and connection identities", [&] {
    require_order(*g, 2, "shape identities");
    cc.emplace(g->connection());
    extrinsic_checks(*g, *cc, rnd, rec);
  });
  rec.guard("curvature", "curvature identities", [&] {
    require_order(*g, 3, "curvature identities");
    curvature_checks(chart, *g, *cc, rnd, rec);
  });
  rec.guard("second_derivatives", "second-order Dirac identities", [&] {
    require_order(*g, 3, "second-order identities");
    second_derivative_checks(chart, *g, *cc, rnd, rec);
  });
  for (std::size_t k = 0; k < chart.fields.size(); ++k)
    rec.guard("killing", "Killing field " + chart.fields[k].name, [&] {
      require_order(*g, 3, "Killing checks");
      killing_checks(*g, *cc, chart.fields[k], rec, &controls[k]);
    });
  rec.guard("hills", "shape squared against matter source", [&] {
    require_order(*g, 3, "hills report");
    hills_checks(*g, curvature_sample(*g), rec);
  });
}

}  // namespace detail

struct VerifyResult {
  std::string target;
  VerifyOptions options;
  std::vector<CheckRecord> checks;
  std::vector<SignEntry> sign_ledger;

  int failures() const {
    int n = 0;
    for (const auto& c : checks) n += c.status == "fail" || c.status == "error";
    return n;
  }
  int preconditions() const {
    int n = 0;
    for (const auto& c : checks) n += c.status == "precondition";
    return n;
  }
  // 0 all pass, 1 identity failure, 3 jet-order precondition failure.
  int exit_code() const { return failures() ? 1 : preconditions() ? 3 : 0; }
};

inline VerifyResult run_verify(const Chart& chart, const VerifyOptions& opt) {
  if (opt.order < 1 || opt.order > kMaxJetOrder) throw Error("order must be in 1..3");
  if (opt.samples < 1) throw Error("samples must be positive");
  chart.validate();
  VerifyResult res;
  res.target = chart.name;
  res.options = opt;
  res.sign_ledger = default_sign_ledger();
  Recorder rec(res.checks, res.sign_ledger, opt.tol);
  const auto pts = sample_points(chart.domain, opt.samples, opt.seed);
  std::vector<detail::NegativeControl> controls(chart.fields.size());
  for (std::size_t i = 0; i < pts.size(); ++i) detail::verify_point(chart, pts[i], i, opt, rec, controls);
  for (std::size_t k = 0; k < controls.size(); ++k) {
    if (chart.fields[k].expect_killing || controls[k].norm < 0) continue;
    rec.at(controls[k].point);
    rec.at_least("killing_negative_control", "non-Killing field has max |D_a A_b + D_b A_a| > 0.1 over the sample",
                 controls[k].norm, 0.1, chart.fields[k].name);
  }
  return res;
}

// A catalog field by name, or comma-separated component expressions in the
// chart parameters.
inline VectorFieldSpec resolve_field(const Chart& chart, const std::string& text) {
  if (const auto* f = chart.field(text)) return *f;
  VectorFieldSpec f;
  f.name = text;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    const std::string part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    f.text.push_back(part);
    f.components.push_back(parse_expression(part, chart.params));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (static_cast<int>(f.components.size()) != chart.m())
    throw ShapeMismatch("field '" + text + "' is neither a catalog name nor " + std::to_string(chart.m()) +
                        " component expressions");
  return f;
}

// Killing and Maxwell checks for one field. A failed Killing test becomes a
// NotKilling precondition record and the remaining checks still run.
inline VerifyResult run_killing(const Chart& chart, const VectorFieldSpec& field, const VerifyOptions& opt) {
  chart.validate();
  VerifyResult res;
  res.target = chart.name + ":" + field.name;
  res.options = opt;
  res.sign_ledger = default_sign_ledger();
  Recorder rec(res.checks, res.sign_ledger, opt.tol);
  const auto pts = sample_points(chart.domain, opt.samples, opt.seed);
  for (const auto& u : pts) {
    rec.at(u);
    rec.guard("killing", "Killing field " + field.name, [&] {
      const Geometry g(frame_point(chart, u, opt.order));
      require_order(g, 3, "Killing checks");
      const auto cc = g.connection();
      const Field A = dual_oneform(g, field);
      const auto kr = killing_residual(g, A);
      if (!opt.tol.accepts(kr.killing_norm, kr.killing_norm, 0.0))
        rec.failure("killing_equation", "D_a A_b + D_b A_a = 0", "precondition",
                    "NotKilling: symmetrized derivative norm " + std::to_string(kr.killing_norm));
      auto forced = field;
      forced.expect_killing = true;
      std::vector<CheckRecord> scratch;
      std::vector<SignEntry> ledger = res.sign_ledger;
      Recorder inner(scratch, ledger, opt.tol);
      inner.at(u);
      detail::killing_checks(g, cc, forced, inner);
      for (auto& c : scratch) {
        if (c.name == "killing_equation" && !c.pass) continue;
        res.checks.push_back(std::move(c));
      }
      for (std::size_t i = 0; i < ledger.size(); ++i) res.sign_ledger[i].evidence = ledger[i].evidence;
    });
  }
  return res;
}

inline nlohmann::ordered_json to_json(const CheckRecord& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["tag"] = c.tag;
  j["method"] = c.method.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.method);
  j["point"] = c.point;
  j["lhs_norm"] = c.lhs_norm;
  j["rhs_norm"] = c.rhs_norm;
  j["abs_residual"] = c.abs_residual;
  j["rel_residual"] = c.rel_residual;
  j["pass"] = c.pass;
  j["status"] = c.status;
  if (!c.message.empty()) j["message"] = c.message;
  return j;
}

inline nlohmann::ordered_json to_json(const VerifyResult& r) {
  nlohmann::ordered_json j;
  j["target"] = r.target;
  j["seed"] = r.options.seed;
  j["order"] = r.options.order;
  j["samples"] = r.options.samples;
  j["tolerance"] = {{"rel", r.options.tol.rel}, {"abs", r.options.tol.abs}};
  auto& led = j["sign_ledger"] = nlohmann::ordered_json::array();
  for (const auto& e : r.sign_ledger)
    led.push_back({{"key", e.key}, {"relation", e.relation}, {"declared_sign", e.declared}, {"observed_sign", e.observed()}});
  const int total = static_cast<int>(r.checks.size());
  j["summary"] = {{"total", total},
                  {"passed", total - r.failures() - r.preconditions()},
                  {"failed", r.failures()},
                  {"precondition", r.preconditions()},
                  {"exit_code", r.exit_code()}};
  auto& arr = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) arr.push_back(to_json(c));
  return j;
}

// One line per check name, in first-seen order.
inline std::string summary_text(const VerifyResult& r) {
  struct Agg {
    int total = 0, pass = 0, pre = 0;
    double worst = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Agg> agg;
  for (const auto& c : r.checks) {
    if (!agg.count(c.name)) order.push_back(c.name);
    auto& a = agg[c.name];
    ++a.total;
    a.pass += c.pass;
    a.pre += c.status == "precondition";
    a.worst = std::max(a.worst, c.rel_residual);
  }
  std::string out;
  char buf[256];
  for (const auto& n : order) {
    const auto& a = agg[n];
    const char* st = a.pass == a.total ? "PASS" : a.pre ? "SKIP" : "FAIL";
    std::snprintf(buf, sizeof buf, "%s %-44s %5d/%-5d max_rel=%.3e\n", st, n.c_str(), a.pass, a.total, a.worst);
    out += buf;
  }
  for (const auto& e : r.sign_ledger) {
    std::snprintf(buf, sizeof buf, "sign %-34s declared %+d observed %+d\n", e.key.c_str(), e.declared, e.observed());
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%s: %zu checks, %d failed, %d precondition, exit %d\n", r.target.c_str(),
                r.checks.size(), r.failures(), r.preconditions(), r.exit_code());
  out += buf;
  return out;
}

}  // namespace branegeo

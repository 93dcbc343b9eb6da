#pragma once
#include <array>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace branegeo {

enum class CurvatureMethod { Shape, PvShape, CommHalf, PvPu };
enum class RicciMethod { Contract, Doubled, Operator };

inline const char* method_name(CurvatureMethod m) {
  switch (m) {
    case CurvatureMethod::Shape: return "shape";
    case CurvatureMethod::PvShape: return "pv_shape";
    case CurvatureMethod::CommHalf: return "comm_half";
    case CurvatureMethod::PvPu: return "pvpu";
  }
  return "";
}

inline const char* method_name(RicciMethod m) {
  switch (m) {
    case RicciMethod::Contract: return "contract";
    case RicciMethod::Doubled: return "doubled";
    case RicciMethod::Operator: return "operator";
  }
  return "";
}

inline constexpr std::array<CurvatureMethod, 4> kCurvatureMethods = {
    CurvatureMethod::Shape, CurvatureMethod::PvShape, CurvatureMethod::CommHalf, CurvatureMethod::PvPu};

// Minimum embedding jet order each formula consumes.
inline int required_order(CurvatureMethod m) { return m == CurvatureMethod::Shape ? 2 : 3; }
inline int required_order(RicciMethod m) { return m == RicciMethod::Operator ? 3 : 2; }

inline void require_order(const Geometry& g, int k, const std::string& what) {
  if (g.order() < k)
    throw InsufficientJetOrder(what + " needs jet order " + std::to_string(k) + ", have " +
                               std::to_string(g.order()));
}

// Σ_k θ^k ∧ F(θ_k)
template <class F>
Field wedge_sum(const Geometry& g, F&& fn) {
  Field out = g.zero();
  for (int k = 0; k < g.m(); ++k) out += wedge(g.theta(k), fn(g.theta_lower(k)));
  return out;
}

// ℜ(u∧v) for tangent 1-form fields u, v.
inline Field curvature_biform(const Geometry& g, const Field& u, const Field& v, CurvatureMethod method) {
  require_order(g, required_order(method), std::string("curvature method ") + method_name(method));
  switch (method) {
    case CurvatureMethod::Shape: return -g.project(commutator(g.shape_biform(u), g.shape_biform(v)));
    case CurvatureMethod::PvShape: return g.p_u(v, g.shape_biform(u));
    case CurvatureMethod::CommHalf:
      return wedge_sum(g, [&](const Field& w) { return g.p_u(v, g.p_u(u, w)) - g.p_u(u, g.p_u(v, w)); }) * 0.5;
    case CurvatureMethod::PvPu:
      return wedge_sum(g, [&](const Field& w) { return g.p_u(v, g.p_u(u, w)); });
  }
  return g.zero();
}

// ℜ(θ_a∧θ_b) for every frame pair.
struct CurvatureSample {
  int m = 0;
  CurvatureMethod method = CurvatureMethod::Shape;
  std::vector<Field> table;  // index a*m+b

  const Field& at(int a, int b) const { return table[a * m + b]; }
};

inline CurvatureSample curvature_sample(const Geometry& g, CurvatureMethod method = CurvatureMethod::Shape) {
  CurvatureSample s;
  s.m = g.m();
  s.method = method;
  s.table.assign(s.m * s.m, g.zero());
  for (int a = 0; a < s.m; ++a)
    for (int b = a + 1; b < s.m; ++b) {
      s.table[a * s.m + b] = curvature_biform(g, g.theta_lower(a), g.theta_lower(b), method);
      s.table[b * s.m + a] = -s.table[a * s.m + b];
    }
  return s;
}

// ℜ(B) by linearity: B = ½ Σ B^{ab} θ_a∧θ_b with B^{ab} = B·(θ^a∧θ^b).
inline Field curvature_of(const Geometry& g, const CurvatureSample& s, const Field& B) {
  Field out = g.zero();
  for (int a = 0; a < s.m; ++a)
    for (int b = a + 1; b < s.m; ++b) {
      const Jet c = scalar_product(B, wedge(g.theta(a), g.theta(b)));
      if (!c.is_zero()) out += scale(s.at(a, b), c);
    }
  return out;
}

// ℜ(θ_a ∧ v) by linearity in v.
inline Field curvature_with(const Geometry& g, const CurvatureSample& s, int a, const Field& v) {
  Field out = g.zero();
  for (int b = 0; b < s.m; ++b) {
    const Jet c = scalar_product(v, g.theta(b));
    if (!c.is_zero()) out += scale(s.at(a, b), c);
  }
  return out;
}

// Σ_a θ^a ∧ ℜ(θ_a ∧ v); vanishes by the first Bianchi identity.
inline Field ricci_wedge_part(const Geometry& g, const CurvatureSample& s, const Field& v) {
  Field out = g.zero();
  for (int a = 0; a < s.m; ++a) out += wedge(g.theta(a), curvature_with(g, s, a, v));
  return out;
}

// ∂∧∂C = ½ Σ (θ^a∧θ^b) ([D_a, D_b] C - c^c_ab D_c C)
inline Field ricci_operator(const Geometry& g, const ConnectionCoefficients& cc, const Field& C) {
  require_order(g, 3, "Ricci operator");
  const int m = g.m();
  std::vector<Field> DC;
  for (int c = 0; c < m; ++c) DC.push_back(g.covariant_frame(c, C));
  Field out = g.zero();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      Field x = g.covariant_frame(a, DC[b]) - g.covariant_frame(b, DC[a]);
      for (int c = 0; c < m; ++c) x -= scale(DC[c], cc.cab(c, a, b));
      // the a>b half mirrors a<b, cancelling the ½
      out += wedge(g.theta(a), g.theta(b)) * x;
    }
  return out;
}

// ∂·∂C = Σ_ab (θ^a·θ^b)(D_a D_b C - ω^c_ab D_c C)
inline Field laplacian_dot(const Geometry& g, const ConnectionCoefficients& cc, const Field& C) {
  require_order(g, 3, "covariant Laplacian");
  const int m = g.m();
  std::vector<Field> DC;
  for (int c = 0; c < m; ++c) DC.push_back(g.covariant_frame(c, C));
  Field out = g.zero();
  for (int a = 0; a < m; ++a) {
    Field x = g.covariant_frame(a, DC[a]);
    for (int c = 0; c < m; ++c) x -= scale(DC[c], cc.w(c, a, a));
    out += x * double(g.frame().eta_tangent[a]);
  }
  return out;
}

// Ricci 1-form ℛ(v).
inline Field ricci(const Geometry& g, const CurvatureSample& s, const Field& v, RicciMethod method,
                   const ConnectionCoefficients* cc = nullptr) {
  require_order(g, required_order(method), std::string("Ricci method ") + method_name(method));
  const int m = g.m();
  switch (method) {
    case RicciMethod::Contract: {
      Field out = g.zero();
      for (int a = 0; a < m; ++a) out += left_contract(g.theta(a), curvature_with(g, s, a, v));
      return out;
    }
    case RicciMethod::Doubled: {
      // ℛ^d = ½ Σ (θ^a∧θ^b)(ℜ(θ_a∧θ_b) ⌞ θ^d), then ℛ(v) = Σ_d (v·θ_d) ℛ^d
      Field out = g.zero();
      for (int d = 0; d < m; ++d) {
        const Jet vd = scalar_product(v, g.theta_lower(d));
        if (vd.is_zero()) continue;
        Field rd = g.zero();
        for (int a = 0; a < m; ++a)
          for (int b = a + 1; b < m; ++b)
            rd += wedge(g.theta(a), g.theta(b)) * right_contract(s.at(a, b), g.theta(d));
        out += scale(rd, vd);
      }
      return out;
    }
    case RicciMethod::Operator: {
      if (!cc) throw Error("operator method needs connection coefficients");
      Field out = g.zero();
      for (int d = 0; d < m; ++d) {
        const Jet vd = scalar_product(v, g.theta_lower(d));
        if (vd.is_zero()) continue;
        out += scale(ricci_operator(g, *cc, g.theta(d)), vd);
      }
      return out;
    }
  }
  return g.zero();
}

// S²(v) = S(S(v)) by composition of the shape operator on fields.
inline Field shape_squared(const Geometry& g, const Field& v) {
  require_order(g, 3, "shape operator squared");
  return g.shape_operator(g.shape_operator(v));
}

// R = Σ_ab (θ^a∧θ^b)·ℜ(θ_a∧θ_b)
inline double curvature_scalar(const Geometry& g, const CurvatureSample& s) {
  double r = 0.0;
  for (int a = 0; a < s.m; ++a)
    for (int b = 0; b < s.m; ++b)
      if (a != b) r += scalar_product(wedge(g.theta(a), g.theta(b)), s.at(a, b)).value();
  return r;
}

// R(a,b,c,d) = ℜ(θ_a∧θ_b)·(θ_c∧θ_d), all slots on the reciprocal frame.
inline std::vector<double> curvature_tensor(const Geometry& g, const CurvatureSample& s) {
  const int m = s.m;
  std::vector<double> R(m * m * m * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c)
        for (int d = 0; d < m; ++d)
          R[((a * m + b) * m + c) * m + d] =
              scalar_product(s.at(a, b), wedge(g.theta_lower(c), g.theta_lower(d))).value();
  return R;
}

// Plain arrays of frame components, index helpers are row-major.
struct FrameComponents {
  int m = 0;
  std::vector<double> omega;   // ω^a_bc at (a,b,c)
  std::vector<double> lie;     // c^c_ab at (c,a,b)
  std::vector<double> domega;  // e_e(ω^a_bc) at (e,a,b,c)
};

inline FrameComponents frame_components(const Geometry& g, const ConnectionCoefficients& cc, bool with_derivatives) {
  FrameComponents fc;
  const int m = g.m();
  fc.m = m;
  for (const auto& x : cc.omega) fc.omega.push_back(x.value());
  for (const auto& x : cc.lie) fc.lie.push_back(x.value());
  if (with_derivatives) {
    require_order(g, 3, "connection derivatives");
    for (int e = 0; e < m; ++e)
      for (const auto& x : cc.omega) fc.domega.push_back(g.frame_derivative(x, e).value());
  }
  return fc;
}

struct RiemannTorsion {
  int m = 0;
  std::vector<double> R;  // R^d_cab at (d,c,a,b)
  std::vector<double> T;  // T^c_ab at (c,a,b)
  double r(int d, int c, int a, int b) const { return R[((d * m + c) * m + a) * m + b]; }
  double t(int c, int a, int b) const { return T[(c * m + a) * m + b]; }
};

// Component formulas valid for any metric-compatible coefficient set:
// R^d_cab = e_a(ω^d_bc) - e_b(ω^d_ac) + ω^d_ak ω^k_bc - ω^d_bk ω^k_ac - c^k_ab ω^d_kc
// T^c_ab = ω^c_ab - ω^c_ba - c^c_ab
inline RiemannTorsion riemann_torsion_components(const FrameComponents& fc) {
  const int m = fc.m;
  const std::size_t m3 = static_cast<std::size_t>(m) * m * m;
  if (fc.omega.size() != m3 || fc.lie.size() != m3) throw ShapeMismatch("connection arrays");
  const bool curv = !fc.domega.empty();
  if (curv && fc.domega.size() != m3 * m) throw ShapeMismatch("connection derivative array");
  auto w = [&](int a, int b, int c) { return fc.omega[(a * m + b) * m + c]; };
  auto lie = [&](int c, int a, int b) { return fc.lie[(c * m + a) * m + b]; };
  auto dw = [&](int e, int a, int b, int c) { return fc.domega[((e * m + a) * m + b) * m + c]; };
  RiemannTorsion out;
  out.m = m;
  out.T.resize(m3);
  for (int c = 0; c < m; ++c)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) out.T[(c * m + a) * m + b] = w(c, a, b) - w(c, b, a) - lie(c, a, b);
  if (!curv) return out;
  out.R.resize(m3 * m);
  for (int d = 0; d < m; ++d)
    for (int c = 0; c < m; ++c)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double v = dw(a, d, b, c) - dw(b, d, a, c);
          for (int k = 0; k < m; ++k)
            v += w(d, a, k) * w(k, b, c) - w(d, b, k) * w(k, a, c) - lie(k, a, b) * w(d, k, c);
          out.R[((d * m + c) * m + a) * m + b] = v;
        }
  return out;
}

// Torsion extensor on a 2-form u∧v: Σ u^a v^b T^c_ab θ_c (u^a = u·θ^a).
inline Multivector<double> torsion_extensor(const Geometry& g, const RiemannTorsion& rt, const Field& u,
                                            const Field& v) {
  Multivector<double> out(g.sig());
  for (int a = 0; a < rt.m; ++a)
    for (int b = 0; b < rt.m; ++b) {
      const double ua = scalar_product(u, g.theta(a)).value(), vb = scalar_product(v, g.theta(b)).value();
      for (int c = 0; c < rt.m; ++c) out += values(g.theta_lower(c)) * (ua * vb * rt.t(c, a, b));
    }
  return out;
}

// Cartan torsion biform Θ(z) = ½ Σ_kl (θ^k∧θ^l) (τ(θ_k, θ_l)·z).
inline Multivector<double> cartan_torsion(const Geometry& g, const RiemannTorsion& rt, const Field& z) {
  Multivector<double> out(g.sig());
  for (int k = 0; k < rt.m; ++k)
    for (int l = 0; l < rt.m; ++l) {
      const auto tau = torsion_extensor(g, rt, g.theta_lower(k), g.theta_lower(l));
      const double c = scalar_product(tau, values(z));
      out += values(wedge(g.theta(k), g.theta(l))) * (0.5 * c);
    }
  return out;
}

}  // namespace branegeo

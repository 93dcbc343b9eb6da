#pragma once
#include <vector>

#include "frame.hpp"

namespace branegeo {

enum class Part { Full, Wedge, Contract };

inline Field take_part(const Field& theta, const Field& x, Part part) {
  switch (part) {
    case Part::Wedge: return wedge(theta, x);
    case Part::Contract: return left_contract(theta, x);
    case Part::Full: break;
  }
  return theta * x;
}

// Connection coefficients in the orthonormal tangent frame:
// D_{e_b} θ^a = -ω^a_bc θ^c and [e_a, e_b] = c^c_ab e_c.
struct ConnectionCoefficients {
  int m = 0;
  std::vector<Jet> omega;  // index (a, b, c)
  std::vector<Jet> lie;    // index (c, a, b)
  const Jet& w(int a, int b, int c) const { return omega[(a * m + b) * m + c]; }
  const Jet& cab(int c, int a, int b) const { return lie[(c * m + a) * m + b]; }
};

// Everything the submanifold machinery needs at one chart point. Fields are
// multivectors with jet coefficients in the ambient coordinate basis, so the
// flat ambient derivative is plain differentiation of the coefficients.
class Geometry {
 public:
  explicit Geometry(FramePoint f, double tangent_tol = 1e-8) : f_(std::move(f)), tangent_tol_(tangent_tol) {
    for (int a = 0; a < f_.m; ++a) theta_lower_.push_back(f_.theta_lower(a));
    if (f_.order >= 2) {
      for (int a = 0; a < f_.m; ++a) shape_frame_.push_back(-(frame_derivative(f_.Im, a) * f_.Im_inv));
    }
  }

  const FramePoint& frame() const { return f_; }
  Signature sig() const { return f_.sig; }
  int m() const { return f_.m; }
  int order() const { return f_.order; }
  const Field& theta(int a) const { return f_.theta[a]; }
  const Field& theta_lower(int a) const { return theta_lower_[a]; }

  Field zero() const { return Field(f_.sig); }

  // P(C) = (C ⌟ I_m) I_m^-1
  Field project(const Field& C) const { return left_contract(C, f_.Im) * f_.Im_inv; }
  Field project_perp(const Field& C) const { return C - project(C); }

  void require_tangent(const Field& v) const {
    const double nv = v.norm();
    if ((project(v) - v).norm() > tangent_tol_ * std::max(nv, 1e-300) && nv > 0)
      throw NotTangent("argument is not tangent to the submanifold");
  }

  Field coord_derivative(const Field& F, int i) const {
    Field out(f_.sig);
    for (Blade b = 0; b < F.size(); ++b)
      if (!F[b].exact()) out[b] = F[b].derivative(i);
    return out;
  }

  Jet frame_derivative(const Jet& x, int a) const {
    if (x.exact()) return Jet(0.0);
    Jet out;
    for (int i = 0; i < f_.m; ++i) out.mul_add(1.0, f_.E[a][i], x.derivative(i));
    return out;
  }

  // D̊_{e_a} F: componentwise derivative along the frame vector e_a.
  Field frame_derivative(const Field& F, int a) const {
    Field out(f_.sig);
    for (Blade b = 0; b < F.size(); ++b) {
      if (F[b].exact()) continue;
      for (int i = 0; i < f_.m; ++i) out[b].mul_add(1.0, f_.E[a][i], F[b].derivative(i));
    }
    return out;
  }

  // v·d̊F = Σ_a (v·θ^a) D̊_{e_a} F
  Field along(const Field& v, const Field& F) const {
    Field out(f_.sig);
    for (int a = 0; a < f_.m; ++a) {
      const Jet c = scalar_product(v, f_.theta[a]);
      if (c.is_zero()) continue;
      out += scale(frame_derivative(F, a), c);
    }
    return out;
  }

  // d̊F = Σ_a θ^a D̊_{e_a} F
  Field restricted_dirac(const Field& F, Part part = Part::Full) const {
    Field out(f_.sig);
    for (int a = 0; a < f_.m; ++a) out += take_part(f_.theta[a], frame_derivative(F, a), part);
    return out;
  }

  // 𝒮(θ_a) = -(D̊_{e_a} I_m) I_m^-1
  const Field& shape_frame(int a) const {
    if (shape_frame_.empty()) throw InsufficientJetOrder("shape biform needs order >= 2");
    return shape_frame_[a];
  }

  // 𝒮(v) = -(v·d̊I_m) I_m^-1, linear in v.
  Field shape_biform(const Field& v) const {
    require_tangent(v);
    Field out(f_.sig);
    for (int a = 0; a < f_.m; ++a) {
      const Jet c = scalar_product(v, f_.theta[a]);
      if (c.is_zero()) continue;
      out += scale(shape_frame(a), c);
    }
    return out;
  }

  // S(C) = d̊(P(C)) - P(d̊C)
  Field shape_operator(const Field& C) const { return restricted_dirac(project(C)) - project(restricted_dirac(C)); }

  // P_u(C) = u·d̊(P(C)) - P(u·d̊C)
  Field p_u(const Field& u, const Field& C) const { return along(u, project(C)) - project(along(u, C)); }

  // D_v C = v·d̊C + 𝒮(v)×C
  Field covariant(const Field& v, const Field& C) const { return along(v, C) + commutator(shape_biform(v), C); }

  Field covariant_frame(int a, const Field& C) const {
    return frame_derivative(C, a) + commutator(shape_frame(a), C);
  }

  // D along ∂/∂u^i, whose dual 1-form is γ_i.
  Field covariant_coord(int i, const Field& C) const {
    return coord_derivative(C, i) + commutator(shape_biform(f_.gamma[i]), C);
  }

  // ∂C = Σ_a θ^a D_{e_a} C
  Field dirac(const Field& C, Part part = Part::Full) const {
    Field out(f_.sig);
    for (int a = 0; a < f_.m; ++a) out += take_part(f_.theta[a], covariant_frame(a, C), part);
    return out;
  }

  Field exterior(const Field& C) const { return dirac(C, Part::Wedge); }
  Field coderivative(const Field& C) const { return -dirac(C, Part::Contract); }

  ConnectionCoefficients connection() const {
    const int m = f_.m;
    ConnectionCoefficients cc;
    cc.m = m;
    cc.omega.resize(m * m * m);
    cc.lie.resize(m * m * m);
    for (int b = 0; b < m; ++b) {
      for (int a = 0; a < m; ++a) {
        const Field d = covariant_frame(b, f_.theta[a]);
        for (int c = 0; c < m; ++c) cc.omega[(a * m + b) * m + c] = -scalar_product(d, theta_lower_[c]);
      }
    }
    // θ^c(∂/∂u^i) = θ^c·γ_i
    std::vector<std::vector<Jet>> th(m, std::vector<Jet>(m));
    for (int c = 0; c < m; ++c)
      for (int i = 0; i < m; ++i) th[c][i] = scalar_product(f_.theta[c], f_.gamma[i]);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        std::vector<Jet> br(m);
        for (int i = 0; i < m; ++i) br[i] = frame_derivative(f_.E[b][i], a) - frame_derivative(f_.E[a][i], b);
        for (int c = 0; c < m; ++c) {
          Jet s;
          for (int i = 0; i < m; ++i) s.mul_add(1.0, th[c][i], br[i]);
          cc.lie[(c * m + a) * m + b] = s;
        }
      }
    }
    return cc;
  }

  // ω_v = ½ Σ v^c ω^a_cb θ_a∧θ^b, assembled from the coefficients.
  Field connection_biform(const ConnectionCoefficients& cc, const Field& v) const {
    Field out(f_.sig);
    for (int c = 0; c < f_.m; ++c) {
      const Jet vc = scalar_product(v, f_.theta[c]);
      if (vc.is_zero()) continue;
      for (int a = 0; a < f_.m; ++a)
        for (int b = 0; b < f_.m; ++b)
          out += scale(wedge(theta_lower_[a], f_.theta[b]), vc * cc.w(a, c, b) * 0.5);
    }
    return out;
  }

  // Ambient connection biform of the adapted frame (tangent then normal):
  // ω̊_v = ½ Σ_i (v·d̊θ̊_i) ∧ θ̊^i.
  Field ambient_connection(const Field& v) const {
    Field out(f_.sig);
    auto add = [&](const Field& up, int eta) {
      out += wedge(along(v, up * double(eta)), up) * 0.5;
    };
    for (int a = 0; a < f_.m; ++a) add(f_.theta[a], f_.eta_tangent[a]);
    for (std::size_t k = 0; k < f_.normal.size(); ++k) add(f_.normal[k], f_.eta_normal[k]);
    return out;
  }

 private:
  FramePoint f_;
  double tangent_tol_;
  std::vector<Field> theta_lower_;
  std::vector<Field> shape_frame_;
};

}  // namespace branegeo

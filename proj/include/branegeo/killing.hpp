#pragma once
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "curvature.hpp"

namespace branegeo {

// Metric dual 1-form A = Σ X^i γ_i of a chart vector field X = X^i ∂/∂u^i.
inline Field dual_oneform(const Geometry& g, const VectorFieldSpec& spec) {
  if (static_cast<int>(spec.components.size()) != g.m())
    throw ShapeMismatch("vector field '" + spec.name + "' needs " + std::to_string(g.m()) + " components");
  const auto vars = jet_variables(g.frame().u, g.order());
  Field A = g.zero();
  for (int i = 0; i < g.m(); ++i) {
    const Jet xi = evaluate(*spec.components[i], vars);
    A += scale(g.frame().gamma[i], xi);
  }
  return A;
}

struct DerivativeSplit {
  Field d, delta, box;
};

// dC = ∂∧C, δC = -∂⌟C, ∂²C.
inline DerivativeSplit exterior_and_coderivative(const Geometry& g, const Field& C) {
  require_order(g, 3, "second Dirac derivatives");
  return {g.exterior(C), g.coderivative(C), g.dirac(g.dirac(C))};
}

struct KillingResidual {
  double killing_norm = 0;
  double div_norm = 0;
};

inline KillingResidual killing_residual(const Geometry& g, const Field& A) {
  const int m = g.m();
  std::vector<Field> DA;
  for (int a = 0; a < m; ++a) DA.push_back(g.covariant_frame(a, A));
  double s = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      // (D_a A)_b = (D_a A)·θ_b
      const double x =
          scalar_product(DA[a], g.theta_lower(b)).value() + scalar_product(DA[b], g.theta_lower(a)).value();
      s += x * x;
    }
  Field delta = g.zero();
  for (int a = 0; a < m; ++a) delta -= left_contract(g.theta(a), DA[a]);
  return {std::sqrt(s), values(delta).norm()};
}

// Pieces of the Maxwell-like encoding for a Killing 1-form A, as plain values.
struct MaxwellTerms {
  Multivector<double> F, dF, deltaF, diracF, shape2;   // shape2 = S²(A)
  Multivector<double> ricci_op, laplacian;             // ∂∧∂A, ∂·∂A
  Multivector<double> box, minus_hodge;                // ∂²A, -(dδ+δd)A
  double delta_A = 0;
};

inline MaxwellTerms maxwell_terms(const Geometry& g, const ConnectionCoefficients& cc, const Field& A) {
  require_order(g, 3, "Maxwell encoding");
  MaxwellTerms t;
  const Field F = g.exterior(A);
  const Field deltaA = g.coderivative(A);
  t.F = values(F);
  t.dF = values(g.exterior(F));
  t.deltaF = values(g.coderivative(F));
  t.diracF = values(g.dirac(F));
  t.shape2 = values(shape_squared(g, A));
  t.ricci_op = values(ricci_operator(g, cc, A));
  t.laplacian = values(laplacian_dot(g, cc, A));
  t.box = values(g.dirac(g.dirac(A)));
  t.minus_hodge = -values(g.exterior(deltaA) + g.coderivative(F));
  t.delta_A = values(deltaA).norm();
  return t;
}

struct HillsFrame {
  Multivector<double> shape2, ricci, source, trace_term;  // S²(θ^a), ℛ^a, 𝒯^a, ½𝒯θ^a
  double shape_norm = 0;                                  // ‖𝒮(θ^a)‖
  double residual = 0;                                    // ‖S²(θ^a) - (𝒯^a - ½𝒯θ^a)‖
};

struct HillsReport {
  std::vector<HillsFrame> frames;
  std::optional<double> source_trace;  // 𝒯, undetermined when m = 2
  double curvature_scalar = 0;
  bool vacuum = false;
};

// Inverts the Einstein relation 𝒯^a = -ℛ^a + ½𝒯θ^a. Its trace fixes
// 𝒯 = 2R/(m - 2); at m = 2 𝒯 is undetermined and the rearrangement
// S²(θ^a) = 𝒯^a - ½𝒯θ^a reduces to S²(θ^a) = -ℛ^a.
inline HillsReport hills_report(const Geometry& g, const CurvatureSample& s, double tol = 1e-10) {
  require_order(g, 3, "hills report");
  const int m = g.m();
  HillsReport rep;
  rep.curvature_scalar = curvature_scalar(g, s);
  std::vector<Field> ric;
  double trace = 0;
  for (int a = 0; a < m; ++a) {
    ric.push_back(ricci(g, s, g.theta(a), RicciMethod::Contract));
    trace += scalar_product(g.theta_lower(a), ric.back()).value();
  }
  if (m != 2) rep.source_trace = 2.0 * trace / (m - 2.0);
  rep.vacuum = true;
  for (int a = 0; a < m; ++a) {
    HillsFrame h;
    h.shape2 = values(shape_squared(g, g.theta(a)));
    h.ricci = values(ric[a]);
    h.shape_norm = values(g.shape_biform(g.theta(a))).norm();
    const double half_t = rep.source_trace ? 0.5 * *rep.source_trace : 0.0;
    h.trace_term = values(g.theta(a)) * half_t;
    h.source = -h.ricci + h.trace_term;
    h.residual = (h.shape2 - (h.source - h.trace_term)).norm();
    if (h.shape2.norm() >= tol) rep.vacuum = false;
    rep.frames.push_back(std::move(h));
  }
  return rep;
}

}  // namespace branegeo

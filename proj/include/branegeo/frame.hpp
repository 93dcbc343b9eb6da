#pragma once
#include <cmath>
#include <optional>
#include <vector>

#include "chart.hpp"
#include "clifford.hpp"

namespace branegeo {

using Field = Multivector<Jet>;

// Jet-valued and plain scaling share one spelling.
inline Multivector<double> scale_field(const Multivector<double>& a, double s) { return a * s; }
inline Field scale_field(const Field& a, const Jet& s) { return scale(a, s); }

template <class S>
struct Orthonormalized {
  std::vector<Multivector<S>> vectors;
  std::vector<int> signs;
  std::vector<int> pivots;                 // input index chosen at each step
  std::vector<std::vector<S>> transform;   // vectors[k] = Σ_j transform[k][j] input[j]
};

namespace detail {

inline double abs_value(double x) { return std::abs(x); }
inline double abs_value(const Jet& x) { return std::abs(x.value()); }

inline double signed_sqrt_inv(double q) { return 1.0 / std::sqrt(std::abs(q)); }
inline Jet signed_sqrt_inv(const Jet& q) { return recip(sqrt(q.value() < 0 ? -q : q)); }

template <class S>
double euclid_norm(const Multivector<S>& v) {
  return v.norm();
}

}  // namespace detail

// Gram–Schmidt under the indefinite scalar product, pivoting away from
// near-null candidates. `prefix` is an already orthonormal block that every
// candidate is projected against first; `count` new vectors are produced (all
// candidates when count < 0).
template <class S>
Orthonormalized<S> orthonormalize(const std::vector<Multivector<S>>& input, Signature sig,
                                  const std::vector<Multivector<S>>& prefix = {},
                                  const std::vector<int>& prefix_signs = {}, int count = -1,
                                  double rel_tol = 1e-9) {
  const std::size_t k = input.size();
  std::vector<Multivector<S>> w = input;
  std::vector<std::vector<S>> rows(k, std::vector<S>(k, S(0.0)));
  for (std::size_t j = 0; j < k; ++j) rows[j][j] = S(1.0);

  double scale = 0.0;
  for (const auto& v : input) {
    scale = std::max(scale, v.norm() * v.norm());
    for (const auto& u : input) scale = std::max(scale, detail::abs_value(scalar_product(v, u)));
  }
  const double tol = rel_tol * std::max(scale, 1e-300);

  auto project_out = [&](std::size_t j, const Multivector<S>& t, int s, const std::vector<S>* trow) {
    S c = scalar_product(w[j], t) * double(s);
    w[j] -= scale_field(t, c);
    if (trow)
      for (std::size_t i = 0; i < k; ++i) rows[j][i] -= c * (*trow)[i];
  };

  for (std::size_t p = 0; p < prefix.size(); ++p)
    for (std::size_t j = 0; j < k; ++j) project_out(j, prefix[p], prefix_signs.at(p), nullptr);

  Orthonormalized<S> out;
  std::vector<bool> used(k, false);
  const std::size_t want = count < 0 ? k : static_cast<std::size_t>(count);
  while (out.vectors.size() < want) {
    // input order, passing over candidates much closer to null than the best one
    int best = -1;
    double bq = -1.0;
    std::vector<double> qs(k, -1.0);
    for (std::size_t j = 0; j < k; ++j)
      if (!used[j]) {
        qs[j] = detail::abs_value(scalar_product(w[j], w[j]));
        bq = std::max(bq, qs[j]);
      }
    for (std::size_t j = 0; j < k && best < 0; ++j)
      if (!used[j] && qs[j] >= bq / 16) best = static_cast<int>(j);
    if (best < 0) throw DegenerateTangent("not enough independent vectors");
    if (bq < tol) {
      if (detail::euclid_norm(w[best]) > std::sqrt(tol)) throw IsotropicDirection("null direction encountered");
      throw DegenerateTangent("linearly dependent vectors");
    }
    used[best] = true;
    const S q = scalar_product(w[best], w[best]);
    const int s = value_of(q) > 0 ? 1 : -1;
    const S inv = detail::signed_sqrt_inv(q);
    Multivector<S> t = scale_field(w[best], inv);
    std::vector<S> trow(k);
    for (std::size_t i = 0; i < k; ++i) trow[i] = rows[best][i] * inv;
    for (std::size_t j = 0; j < k; ++j)
      if (!used[j]) project_out(j, t, s, &trow);
    out.vectors.push_back(std::move(t));
    out.signs.push_back(s);
    out.pivots.push_back(best);
    out.transform.push_back(std::move(trow));
  }
  return out;
}

struct FramePoint {
  std::vector<double> u;
  std::vector<double> position;
  Signature sig;
  int m = 0;
  int order = 0;
  std::vector<Field> gamma;               // γ_i, dual of ∂/∂u^i
  std::vector<Field> theta;               // orthonormal tangent coframe θ^a
  std::vector<Field> normal;              // orthonormal normal coframe
  std::vector<int> eta_tangent;
  std::vector<int> eta_normal;
  std::vector<int> pivots;                // coordinate index behind each θ^a
  std::vector<std::vector<Jet>> B;        // θ^a = Σ_i B[a][i] γ_i
  std::vector<std::vector<Jet>> E;        // e_a = Σ_i E[a][i] ∂/∂u^i
  std::vector<std::vector<Jet>> g;        // induced metric γ_i·γ_j
  Field Im, Im_inv, In, In_inv;
  double Im_square = 1.0;

  int n() const { return sig.n(); }
  // reciprocal coform θ_a = η_aa θ^a
  Field theta_lower(int a) const { return theta[a] * double(eta_tangent[a]); }
};

// γ_i = Σ_j η_jj (∂x^j/∂u^i) dx^j, carrying (K-1)-jets.
inline std::vector<Field> coordinate_frame(const Chart& chart, const std::vector<double>& u, int order) {
  if (order < 1) throw InsufficientJetOrder("coordinate frame needs order >= 1");
  const auto vars = jet_variables(u, order);
  auto x = chart.embed(vars);
  std::vector<Field> gamma;
  for (int i = 0; i < chart.m(); ++i) {
    Field gi(chart.ambient);
    for (int j = 0; j < chart.n(); ++j) {
      Jet xj = x[j];
      if (xj.exact()) xj = Jet::constant(chart.m(), order, xj.value());
      gi[Blade{1} << j] = xj.derivative(i) * double(chart.ambient.eta(j));
    }
    gamma.push_back(std::move(gi));
  }
  return gamma;
}

inline std::vector<std::vector<Jet>> metric_of(const std::vector<Field>& gamma) {
  const std::size_t m = gamma.size();
  std::vector<std::vector<Jet>> g(m, std::vector<Jet>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) g[i][j] = g[j][i] = scalar_product(gamma[i], gamma[j]);
  return g;
}

// Determinant of the value part, by Gaussian elimination.
inline double value_determinant(const std::vector<std::vector<Jet>>& a) {
  const std::size_t m = a.size();
  std::vector<std::vector<double>> v(m, std::vector<double>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) v[i][j] = a[i][j].value();
  double det = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(v[r][c]) > std::abs(v[p][c])) p = r;
    if (v[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(v[p], v[c]);
      det = -det;
    }
    det *= v[c][c];
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = v[r][c] / v[c][c];
      for (std::size_t k = c; k < m; ++k) v[r][k] -= f * v[c][k];
    }
  }
  return det;
}

inline std::vector<std::vector<Jet>> induced_metric(const Chart& chart, const std::vector<double>& u,
                                                    int order = 1, double rel_tol = 1e-9) {
  auto g = metric_of(coordinate_frame(chart, u, order));
  double scale = 0.0;
  for (auto& row : g)
    for (auto& x : row) scale = std::max(scale, std::abs(x.value()));
  if (std::abs(value_determinant(g)) < rel_tol * std::pow(std::max(scale, 1e-300), double(g.size())))
    throw DegenerateTangent("induced metric is degenerate");
  return g;
}

inline FramePoint frame_point(const Chart& chart, const std::vector<double>& u, int order, double rel_tol = 1e-9) {
  FramePoint f;
  f.u = u;
  f.sig = chart.ambient;
  f.m = chart.m();
  f.order = order;
  f.position = chart.position(u);
  f.gamma = coordinate_frame(chart, u, order);
  f.g = metric_of(f.gamma);
  double scale = 0.0;
  for (auto& row : f.g)
    for (auto& x : row) scale = std::max(scale, std::abs(x.value()));
  if (std::abs(value_determinant(f.g)) < rel_tol * std::pow(std::max(scale, 1e-300), double(f.m)))
    throw DegenerateTangent("induced metric is degenerate");

  auto tan = orthonormalize(f.gamma, f.sig, {}, {}, -1, rel_tol);
  f.theta = tan.vectors;
  f.eta_tangent = tan.signs;
  f.pivots = tan.pivots;
  f.B = tan.transform;
  f.E.assign(f.m, std::vector<Jet>(f.m));
  for (int a = 0; a < f.m; ++a)
    for (int i = 0; i < f.m; ++i) f.E[a][i] = f.B[a][i] * double(f.eta_tangent[a]);

  std::vector<Field> coords;
  for (int j = 0; j < f.n(); ++j) coords.push_back(Field::basis(f.sig, j));
  auto nor = orthonormalize(coords, f.sig, f.theta, f.eta_tangent, f.n() - f.m, rel_tol);
  f.normal = nor.vectors;
  f.eta_normal = nor.signs;

  auto ps = pseudoscalar(f.theta, f.sig, 1e-8);
  f.Im = ps.I;
  f.Im_inv = ps.inverse;
  f.Im_square = ps.square;
  std::vector<Field> all = f.theta;
  all.insert(all.end(), f.normal.begin(), f.normal.end());
  auto pn = pseudoscalar(all, f.sig, 1e-8);
  f.In = pn.I;
  f.In_inv = pn.inverse;
  return f;
}

}  // namespace branegeo

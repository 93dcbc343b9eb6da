#pragma once
#include <cmath>
#include <vector>

#include "chart.hpp"

namespace branegeo {

using JetMatrix = std::vector<std::vector<Jet>>;

// Gauss–Jordan inverse with partial pivoting on the value part.
inline JetMatrix jet_inverse(JetMatrix a) {
  const std::size_t n = a.size();
  JetMatrix inv(n, std::vector<Jet>(n, Jet(0.0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = Jet(1.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c].value()) > std::abs(a[p][c].value())) p = r;
    if (a[p][c].value() == 0.0) throw DegenerateTangent("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Jet piv = recip(a[c][c]);
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] *= piv;
      inv[c][k] *= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const Jet f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k].mul_add(-1.0, f, a[c][k]);
        inv[r][k].mul_add(-1.0, f, inv[c][k]);
      }
    }
  }
  return inv;
}

// Coordinate-basis Levi-Civita curvature straight from the embedding, with no
// frames or multivectors involved. Convention: R^l_kij = ∂_iΓ^l_jk - ∂_jΓ^l_ik
// + Γ^l_im Γ^m_jk - Γ^l_jm Γ^m_ik, Ric_kj = R^i_kij, so the round sphere is positive.
struct ClassicalCurvature {
  int m = 0;
  std::vector<std::vector<double>> g, ginv;
  std::vector<double> christoffel;  // Γ^k_ij at (k,i,j)
  std::vector<double> riemann;      // R^l_kij at (l,k,i,j)
  std::vector<std::vector<double>> ricci;
  double scalar = 0;
  double gaussian = 0;              // R_1212 / det g, m = 2 only

  double gamma(int k, int i, int j) const { return christoffel[(k * m + i) * m + j]; }
  double r(int l, int k, int i, int j) const { return riemann[((l * m + k) * m + i) * m + j]; }
};

inline ClassicalCurvature classical_curvature(const Chart& chart, const std::vector<double>& u) {
  const int m = chart.m(), n = chart.n();
  const auto x = chart.embed(jet_variables(u, 3));
  std::vector<std::vector<Jet>> dx(m, std::vector<Jet>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) dx[i][j] = x[j].exact() ? Jet(0.0) : x[j].derivative(i);

  JetMatrix g(m, std::vector<Jet>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Jet s = Jet::constant(m, 2, 0.0);
      for (int k = 0; k < n; ++k) s.mul_add(chart.ambient.eta(k), dx[i][k], dx[j][k]);
      g[i][j] = s;
    }
  const JetMatrix gi = jet_inverse(g);

  // Γ^k_ij as 1-jets
  std::vector<Jet> G(m * m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k) {
        Jet s = Jet::constant(m, 1, 0.0);
        for (int l = 0; l < m; ++l) {
          const Jet first = (g[j][l].derivative(i) + g[i][l].derivative(j) - g[i][j].derivative(l)) * 0.5;
          s.mul_add(1.0, gi[k][l], first);
        }
        G[(k * m + i) * m + j] = s;
      }
  auto Gm = [&](int k, int i, int j) -> const Jet& { return G[(k * m + i) * m + j]; };

  ClassicalCurvature out;
  out.m = m;
  out.g.assign(m, std::vector<double>(m));
  out.ginv.assign(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      out.g[i][j] = g[i][j].value();
      out.ginv[i][j] = gi[i][j].value();
    }
  for (const auto& c : G) out.christoffel.push_back(c.value());
  out.riemann.assign(m * m * m * m, 0.0);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double v = Gm(l, j, k).d(i) - Gm(l, i, k).d(j);
          for (int p = 0; p < m; ++p) v += Gm(l, i, p).value() * Gm(p, j, k).value() - Gm(l, j, p).value() * Gm(p, i, k).value();
          out.riemann[((l * m + k) * m + i) * m + j] = v;
        }
  out.ricci.assign(m, std::vector<double>(m, 0.0));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) out.ricci[k][j] += out.r(i, k, i, j);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) out.scalar += out.ginv[k][j] * out.ricci[k][j];
  if (m == 2) {
    double r1212 = 0;
    for (int l = 0; l < m; ++l) r1212 += out.g[0][l] * out.r(l, 1, 0, 1);
    out.gaussian = r1212 / (out.g[0][0] * out.g[1][1] - out.g[0][1] * out.g[1][0]);
  }
  return out;
}

}  // namespace branegeo

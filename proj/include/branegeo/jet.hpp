#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "errors.hpp"

namespace branegeo {

inline constexpr int kMaxJetOrder = 3;
inline constexpr int kMaxJetVars = 12;

// Monomial bookkeeping for truncated Taylor polynomials in nvar variables.
// Monomials are ordered by degree, and within a degree by their sorted index
// tuple, so the layout of a lower order is a prefix of a higher one.
struct JetLayout {
  struct Term {
    std::uint16_t i, j, k;
  };
  struct DTerm {
    std::uint16_t src, dst;
    double factor;
  };

  int nvar = 0;
  int order = 0;
  std::vector<std::vector<std::uint8_t>> exps;
  std::vector<int> degree;
  std::vector<Term> mul;
  std::vector<std::vector<DTerm>> deriv;  // per variable, into the order-1 layout
  std::map<std::vector<std::uint8_t>, int> lookup;

  std::size_t size() const { return exps.size(); }

  int index_of(const std::vector<std::uint8_t>& e) const {
    auto it = lookup.find(e);
    return it == lookup.end() ? -1 : it->second;
  }

  // Size of the prefix holding degrees <= k.
  std::size_t size_upto(int k) const {
    std::size_t s = 0;
    while (s < degree.size() && degree[s] <= k) ++s;
    return s;
  }
};

namespace detail {

inline void enumerate_tuples(int nvar, int deg, int start, std::vector<int>& cur,
                             std::vector<std::vector<std::uint8_t>>& out) {
  if (static_cast<int>(cur.size()) == deg) {
    std::vector<std::uint8_t> e(nvar, 0);
    for (int v : cur) ++e[v];
    out.push_back(std::move(e));
    return;
  }
  for (int v = start; v < nvar; ++v) {
    cur.push_back(v);
    enumerate_tuples(nvar, deg, v, cur, out);
    cur.pop_back();
  }
}

inline std::unique_ptr<JetLayout> build_layout(int nvar, int order) {
  auto L = std::make_unique<JetLayout>();
  L->nvar = nvar;
  L->order = order;
  for (int d = 0; d <= order; ++d) {
    std::vector<int> cur;
    std::vector<std::vector<std::uint8_t>> block;
    enumerate_tuples(nvar, d, 0, cur, block);
    for (auto& e : block) {
      L->lookup[e] = static_cast<int>(L->exps.size());
      L->exps.push_back(e);
      L->degree.push_back(d);
    }
  }
  const auto n = L->size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (L->degree[a] + L->degree[b] > order) continue;
      std::vector<std::uint8_t> e(nvar);
      for (int v = 0; v < nvar; ++v) e[v] = L->exps[a][v] + L->exps[b][v];
      L->mul.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                        static_cast<std::uint16_t>(L->lookup.at(e))});
    }
  }
  L->deriv.resize(nvar);
  for (int v = 0; v < nvar; ++v) {
    for (std::size_t a = 0; a < n; ++a) {
      if (L->exps[a][v] == 0) continue;
      auto e = L->exps[a];
      double f = e[v];
      --e[v];
      // the lower layout is a prefix, so indices agree
      L->deriv[v].push_back(
          {static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(L->lookup.at(e)), f});
    }
  }
  return L;
}

struct LayoutTable {
  std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1> t;
  LayoutTable() {
    for (int n = 0; n <= kMaxJetVars; ++n)
      for (int k = 0; k <= kMaxJetOrder; ++k) t[n][k] = build_layout(n, k);
  }
};

}  // namespace detail

inline const JetLayout& jet_layout(int nvar, int order) {
  static const detail::LayoutTable table;
  if (nvar < 0 || nvar > kMaxJetVars || order < 0 || order > kMaxJetOrder)
    throw ShapeMismatch("jet layout out of range");
  return *table.t[nvar][order];
}

// Truncated multivariate Taylor expansion. Coefficients are monomial
// coefficients (derivative / multi-index factorial). A jet with order()
// == kExact is a plain constant that adapts to whatever it meets.
class Jet {
 public:
  static constexpr int kExact = 255;
  using Storage = boost::container::small_vector<double, 20>;

  Jet() : c_(1, 0.0) {}
  Jet(double v) : c_(1, v) {}  // NOLINT: implicit by design

  static Jet variable(int nvar, int order, int var, double value) {
    Jet j = constant(nvar, order, value);
    if (order >= 1) j.c_[1 + var] = 1.0;
    return j;
  }

  static Jet constant(int nvar, int order, double value) {
    Jet j;
    j.nvar_ = static_cast<std::uint8_t>(nvar);
    j.order_ = static_cast<std::uint8_t>(order);
    j.c_.assign(jet_layout(nvar, order).size(), 0.0);
    j.c_[0] = value;
    return j;
  }

  static Jet from_coeffs(int nvar, int order, const std::vector<double>& c) {
    Jet j = constant(nvar, order, 0.0);
    if (c.size() != j.c_.size()) throw ShapeMismatch("jet coefficient count");
    std::copy(c.begin(), c.end(), j.c_.begin());
    return j;
  }

  bool exact() const { return order_ == kExact; }
  int nvar() const { return nvar_; }
  int order() const { return order_; }
  std::size_t size() const { return c_.size(); }
  double value() const { return c_[0]; }
  double coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  double& operator[](std::size_t i) { return c_[i]; }
  const Storage& coeffs() const { return c_; }

  bool is_zero() const {
    for (double x : c_)
      if (x != 0.0) return false;
    return true;
  }

  double d(int i) const { return coeff(1 + i); }

  double d(int i, int j) const {
    if (exact() || order_ < 2) return 0.0;
    std::vector<std::uint8_t> e(nvar_, 0);
    ++e[i];
    ++e[j];
    return coeff(jet_layout(nvar_, order_).index_of(e)) * (i == j ? 2.0 : 1.0);
  }

  double d(int i, int j, int k) const {
    if (exact() || order_ < 3) return 0.0;
    std::vector<std::uint8_t> e(nvar_, 0);
    ++e[i];
    ++e[j];
    ++e[k];
    double f = 1.0;
    for (auto x : e) f *= (x == 3 ? 6.0 : x == 2 ? 2.0 : 1.0);
    return coeff(jet_layout(nvar_, order_).index_of(e)) * f;
  }

  // Largest absolute coefficient of total degree >= 1.
  double derivative_magnitude() const {
    double m = 0.0;
    for (std::size_t i = 1; i < c_.size(); ++i) m = std::max(m, std::abs(c_[i]));
    return m;
  }

  Jet truncated(int order) const {
    if (exact() || order >= order_) return *this;
    Jet j = *this;
    j.order_ = static_cast<std::uint8_t>(order);
    j.c_.resize(jet_layout(nvar_, order).size());
    return j;
  }

  Jet derivative(int var) const {
    if (exact()) return Jet(0.0);
    if (order_ == 0) throw InsufficientJetOrder("derivative of an order-0 jet");
    const auto& L = jet_layout(nvar_, order_);
    Jet r = constant(nvar_, order_ - 1, 0.0);
    for (const auto& t : L.deriv[var]) r.c_[t.dst] += t.factor * c_[t.src];
    return r;
  }

  Jet operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Jet& operator+=(const Jet& b) { return axpy(1.0, b); }
  Jet& operator-=(const Jet& b) { return axpy(-1.0, b); }

  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  Jet& operator*=(const Jet& b) {
    Jet r;
    r.mul_add(1.0, *this, b);
    *this = std::move(r);
    return *this;
  }

  // this += s * b
  Jet& axpy(double s, const Jet& b) {
    conform(b);
    const std::size_t n = std::min(c_.size(), b.c_.size());
    for (std::size_t i = 0; i < n; ++i) c_[i] += s * b.c_[i];
    return *this;
  }

  // this += s * x * y
  Jet& mul_add(double s, const Jet& x, const Jet& y) {
    if (x.exact()) return axpy(s * x.c_[0], y);
    if (y.exact()) return axpy(s * y.c_[0], x);
    if (x.nvar_ != y.nvar_) throw ShapeMismatch("jet variable count");
    const int o = std::min(x.order_, y.order_);
    conform_shape(x.nvar_, o);
    const auto& L = jet_layout(nvar_, order_);
    for (const auto& t : L.mul) c_[t.k] += s * x.c_[t.i] * y.c_[t.j];
    return *this;
  }

  // Composition with a scalar function given its derivatives at the value.
  Jet compose(const std::array<double, kMaxJetOrder + 1>& f) const {
    if (exact()) return Jet(f[0]);
    static constexpr double inv_fact[] = {1.0, 1.0, 0.5, 1.0 / 6.0};
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet r = constant(nvar_, order_, f[order_] * inv_fact[order_]);
    for (int k = order_ - 1; k >= 0; --k) {
      Jet t;
      t.mul_add(1.0, r, h);
      t.c_[0] += f[k] * inv_fact[k];
      r = std::move(t);
    }
    return r;
  }

 private:
  // Make this jet compatible with b, shrinking to the smaller order.
  void conform(const Jet& b) {
    if (b.exact()) return;
    if (exact()) {
      double v = c_[0];
      nvar_ = b.nvar_;
      order_ = b.order_;
      c_.assign(b.c_.size(), 0.0);
      c_[0] = v;
      return;
    }
    if (nvar_ != b.nvar_) throw ShapeMismatch("jet variable count");
    if (b.order_ < order_) {
      order_ = b.order_;
      c_.resize(b.c_.size());
    }
  }

  void conform_shape(int nvar, int order) {
    if (exact()) {
      double v = c_[0];
      nvar_ = static_cast<std::uint8_t>(nvar);
      order_ = static_cast<std::uint8_t>(order);
      c_.assign(jet_layout(nvar, order).size(), 0.0);
      c_[0] = v;
      return;
    }
    if (nvar_ != nvar) throw ShapeMismatch("jet variable count");
    if (order < order_) {
      order_ = static_cast<std::uint8_t>(order);
      c_.resize(jet_layout(nvar, order).size());
    }
  }

  std::uint8_t nvar_ = 0;
  std::uint8_t order_ = kExact;
  Storage c_;
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.mul_add(1.0, a, b);
  return r;
}
inline Jet operator*(Jet a, double s) { return a *= s; }
inline Jet operator*(double s, Jet a) { return a *= s; }
inline Jet operator+(Jet a, double s) { return a += Jet(s); }
inline Jet operator+(double s, Jet a) { return a += Jet(s); }
inline Jet operator-(Jet a, double s) { return a -= Jet(s); }
inline Jet operator-(double s, const Jet& a) { return Jet(s) -= a; }

inline Jet recip(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("division by zero");
  const double r = 1.0 / x;
  return a.compose({r, -r * r, 2 * r * r * r, -6 * r * r * r * r});
}

inline Jet operator/(const Jet& a, const Jet& b) {
  if (b.exact()) {
    if (b.value() == 0.0) throw DomainError("division by zero");
    return a * (1.0 / b.value());
  }
  return a * recip(b);
}
inline Jet operator/(const Jet& a, double s) { return a / Jet(s); }
inline Jet operator/(double s, const Jet& a) { return Jet(s) / a; }

inline Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({s, c, -s, -c});
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return a.compose({c, -s, -c, s});
}
inline Jet tan(const Jet& a) {
  const double t = std::tan(a.value()), u = 1 + t * t;
  return a.compose({t, u, 2 * t * u, 2 * u * (1 + 3 * t * t)});
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose({s, c, s, c});
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return a.compose({c, s, c, s});
}
inline Jet tanh(const Jet& a) {
  const double t = std::tanh(a.value()), u = 1 - t * t;
  return a.compose({t, u, -2 * t * u, -2 * u * (1 - 3 * t * t)});
}
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return a.compose({e, e, e, e});
}
inline Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of nonpositive value");
  const double r = 1.0 / x;
  return a.compose({std::log(x), r, -r * r, 2 * r * r * r});
}
inline Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("sqrt of nonpositive value");
  const double s = std::sqrt(x);
  return a.compose({s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)});
}

inline Jet pow(const Jet& a, double p) {
  const double x = a.value();
  const bool integral = std::floor(p) == p;
  if (!integral && !(x > 0.0)) throw DomainError("non-integer power of nonpositive value");
  if (x == 0.0 && p < 0.0) throw DomainError("negative power of zero");
  std::array<double, kMaxJetOrder + 1> f{};
  double coef = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (integral && p >= 0.0 && k > p) break;
    f[k] = coef * std::pow(x, p - k);
    coef *= (p - k);
  }
  return a.compose(f);
}

}  // namespace branegeo

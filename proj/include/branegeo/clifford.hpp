#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace branegeo {

inline constexpr int kMaxDim = 12;

// Cl(p,q): basis 1-forms 0..p-1 square to +1, p..n-1 square to -1.
struct Signature {
  int p = 0;
  int q = 0;

  Signature() = default;
  Signature(int p_, int q_) : p(p_), q(q_) {
    if (p < 0 || q < 0 || p + q > kMaxDim) throw Error("signature dimension out of range");
  }

  int n() const { return p + q; }
  int eta(int i) const { return i < p ? 1 : -1; }
  std::uint32_t negative_mask() const { return ((1u << (p + q)) - 1u) & ~((1u << p) - 1u); }
  std::size_t blades() const { return std::size_t{1} << n(); }

  bool operator==(const Signature&) const = default;
};

using Blade = std::uint32_t;

inline int grade_of(Blade b) { return std::popcount(b); }

// Sign of e_a e_b relative to e_{a^b}: reordering parity times metric squares.
inline double blade_sign(Blade a, Blade b, std::uint32_t negmask) {
  int swaps = 0;
  for (Blade x = a >> 1; x != 0; x >>= 1) swaps += std::popcount(x & b);
  swaps += std::popcount(a & b & negmask);
  return (swaps & 1) ? -1.0 : 1.0;
}

inline double reverse_sign(int r) { return ((r * (r - 1) / 2) & 1) ? -1.0 : 1.0; }

// out += s * x * y, with a fast path for jets.
inline void fma_into(double& out, double s, double x, double y) { out += s * x * y; }
inline void fma_into(Jet& out, double s, const Jet& x, const Jet& y) { out.mul_add(s, x, y); }

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Jet& x) { return x.is_zero(); }

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

template <class S>
class Multivector {
 public:
  using scalar_type = S;

  Multivector() = default;
  explicit Multivector(Signature sig) : sig_(sig), c_(sig.blades()) {}

  static Multivector scalar(Signature sig, S s) {
    Multivector m(sig);
    m.c_[0] = std::move(s);
    return m;
  }
  static Multivector blade(Signature sig, Blade b, S s = S(1.0)) {
    Multivector m(sig);
    m.c_.at(b) = std::move(s);
    return m;
  }
  static Multivector basis(Signature sig, int i) { return blade(sig, Blade{1} << i); }

  const Signature& sig() const { return sig_; }
  std::size_t size() const { return c_.size(); }
  S& operator[](Blade b) { return c_[b]; }
  const S& operator[](Blade b) const { return c_[b]; }

  Multivector& operator+=(const Multivector& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(o.c_[i])) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(o.c_[i])) c_[i] -= o.c_[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Multivector operator-() const {
    Multivector r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }

  Multivector grade(int r) const {
    if (r < 0 || r > sig_.n()) throw GradeOutOfRange(r);
    Multivector out(sig_);
    for (Blade b = 0; b < c_.size(); ++b)
      if (grade_of(b) == r) out.c_[b] = c_[b];
    return out;
  }

  Multivector reverse() const {
    Multivector out = *this;
    for (Blade b = 0; b < c_.size(); ++b)
      if (reverse_sign(grade_of(b)) < 0) out.c_[b] = -out.c_[b];
    return out;
  }

  // Euclidean norm of the coefficient values.
  double norm() const {
    double s = 0.0;
    for (const auto& x : c_) {
      double v = value_of(x);
      s += v * v;
    }
    return std::sqrt(s);
  }

  void check(const Multivector& o) const {
    if (!(sig_ == o.sig_)) throw SignatureMismatch();
  }

 private:
  Signature sig_;
  std::vector<S> c_;
};

namespace detail {

// Accumulate the blade pairs accepted by keep(a, b) into out.
template <class S, class Keep>
Multivector<S> product_filtered(const Multivector<S>& a, const Multivector<S>& b, Keep keep) {
  a.check(b);
  const auto neg = a.sig().negative_mask();
  Multivector<S> out(a.sig());
  const Blade n = static_cast<Blade>(a.size());
  std::vector<Blade> nb;
  nb.reserve(n);
  for (Blade j = 0; j < n; ++j)
    if (!is_zero(b[j])) nb.push_back(j);
  for (Blade i = 0; i < n; ++i) {
    if (is_zero(a[i])) continue;
    for (Blade j : nb) {
      if (!keep(i, j)) continue;
      fma_into(out[i ^ j], blade_sign(i, j, neg), a[i], b[j]);
    }
  }
  return out;
}

}  // namespace detail

template <class S>
Multivector<S> operator+(Multivector<S> a, const Multivector<S>& b) {
  return a += b;
}
template <class S>
Multivector<S> operator-(Multivector<S> a, const Multivector<S>& b) {
  return a -= b;
}
template <class S>
Multivector<S> operator*(Multivector<S> a, double s) {
  return a *= s;
}
template <class S>
Multivector<S> operator*(double s, Multivector<S> a) {
  return a *= s;
}

// Scaling by a (possibly jet-valued) scalar field.
template <class S>
Multivector<S> scale(const Multivector<S>& a, const S& s) {
  Multivector<S> out(a.sig());
  for (Blade b = 0; b < a.size(); ++b)
    if (!is_zero(a[b])) fma_into(out[b], 1.0, a[b], s);
  return out;
}

template <class S>
Multivector<S> operator*(const Multivector<S>& a, const Multivector<S>& b) {
  return detail::product_filtered(a, b, [](Blade, Blade) { return true; });
}

template <class S>
Multivector<S> wedge(const Multivector<S>& a, const Multivector<S>& b) {
  return detail::product_filtered(a, b, [](Blade i, Blade j) { return (i & j) == 0; });
}

// a ⌟ b: grade s-r part of a_r b_s, zero when r > s.
template <class S>
Multivector<S> left_contract(const Multivector<S>& a, const Multivector<S>& b) {
  return detail::product_filtered(a, b, [](Blade i, Blade j) { return (i & j) == i; });
}

// a ⌞ b: grade r-s part of a_r b_s, zero when s > r.
template <class S>
Multivector<S> right_contract(const Multivector<S>& a, const Multivector<S>& b) {
  return detail::product_filtered(a, b, [](Blade i, Blade j) { return (i & j) == j; });
}

// Grade-0 part of reverse(a) b. Mixed grades never meet, and for 1-forms it
// reduces to the metric, so that θ^i·θ_j = δ^i_j.
template <class S>
S scalar_product(const Multivector<S>& a, const Multivector<S>& b) {
  a.check(b);
  const auto neg = a.sig().negative_mask();
  S out{};
  for (Blade i = 0; i < a.size(); ++i) {
    if (is_zero(a[i]) || is_zero(b[i])) continue;
    fma_into(out, reverse_sign(grade_of(i)) * blade_sign(i, i, neg), a[i], b[i]);
  }
  return out;
}

// (ab - ba)/2
template <class S>
Multivector<S> commutator(const Multivector<S>& a, const Multivector<S>& b) {
  a.check(b);
  const auto neg = a.sig().negative_mask();
  Multivector<S> out(a.sig());
  for (Blade i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    for (Blade j = 0; j < b.size(); ++j) {
      if (is_zero(b[j])) continue;
      const double s = 0.5 * (blade_sign(i, j, neg) - blade_sign(j, i, neg));
      if (s != 0.0) fma_into(out[i ^ j], s, a[i], b[j]);
    }
  }
  return out;
}

template <class S>
Multivector<S> grade(const Multivector<S>& a, int r) {
  return a.grade(r);
}

template <class S>
Multivector<S> reverse(const Multivector<S>& a) {
  return a.reverse();
}

template <class S>
double norm(const Multivector<S>& a) {
  return a.norm();
}

template <class S>
double distance(const Multivector<S>& a, const Multivector<S>& b) {
  return (a - b).norm();
}

// Highest grade carrying a nonzero value coefficient, -1 for zero.
template <class S>
int top_grade(const Multivector<S>& a) {
  int g = -1;
  for (Blade b = 0; b < a.size(); ++b)
    if (value_of(a[b]) != 0.0) g = std::max(g, grade_of(b));
  return g;
}

template <class S>
struct Pseudoscalar {
  Multivector<S> I;
  Multivector<S> inverse;
  double square = 1.0;  // I² = ±1
};

// I = θ^1···θ^m for mutually orthogonal unit 1-forms, with its inverse.
template <class S>
Pseudoscalar<S> pseudoscalar(const std::vector<Multivector<S>>& coforms, Signature sig,
                             double tol = 1e-9) {
  double sign = 1.0;
  for (std::size_t a = 0; a < coforms.size(); ++a) {
    for (std::size_t b = a; b < coforms.size(); ++b) {
      const double v = value_of(scalar_product(coforms[a], coforms[b]));
      if (a == b) {
        if (std::abs(std::abs(v) - 1.0) > tol) throw NotOrthonormal("coform is not unit");
        sign *= v > 0 ? 1.0 : -1.0;
      } else if (std::abs(v) > tol) {
        throw NotOrthonormal("coforms are not orthogonal");
      }
    }
  }
  Pseudoscalar<S> ps;
  ps.I = Multivector<S>::scalar(sig, S(1.0));
  for (const auto& t : coforms) ps.I = ps.I * t;
  const double rs = reverse_sign(static_cast<int>(coforms.size()));
  // I reverse(I) = Π θ^a·θ^a, hence I^-1 = sign * reverse(I)
  ps.inverse = ps.I.reverse() * sign;
  ps.square = rs * sign;
  return ps;
}

// Conversion between scalar types, keeping only the value of jets.
inline Multivector<double> values(const Multivector<Jet>& a) {
  Multivector<double> out(a.sig());
  for (Blade b = 0; b < a.size(); ++b) out[b] = a[b].value();
  return out;
}

inline Multivector<Jet> lift(const Multivector<double>& a) {
  Multivector<Jet> out(a.sig());
  for (Blade b = 0; b < a.size(); ++b) out[b] = Jet(a[b]);
  return out;
}

inline std::string blade_name(Blade b) {
  if (b == 0) return "1";
  std::string s = "e";
  for (int i = 0; i < kMaxDim; ++i)
    if (b & (Blade{1} << i)) s += std::to_string(i + 1);
  return s;
}

}  // namespace branegeo

#pragma once
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "clifford.hpp"
#include "expr.hpp"

namespace branegeo {

// A vector field on the chart given by its components along ∂/∂u^i.
struct VectorFieldSpec {
  std::string name;
  std::vector<AstPtr> components;
  std::vector<std::string> text;
  bool expect_killing = true;
};

// Embedding U ⊂ R^m → R^(p,q). Either expressions or a callable provider.
struct Chart {
  std::string name;
  Signature ambient;
  std::vector<std::string> params;
  std::vector<std::pair<double, double>> domain;
  std::vector<AstPtr> embedding;
  std::vector<std::string> embedding_text;
  std::function<std::vector<Jet>(const std::vector<Jet>&)> provider;
  std::vector<VectorFieldSpec> fields;

  int m() const { return static_cast<int>(params.size()); }
  int n() const { return ambient.n(); }

  std::vector<Jet> embed(const std::vector<Jet>& u) const {
    if (provider) return provider(u);
    std::vector<Jet> x;
    x.reserve(embedding.size());
    for (const auto& e : embedding) x.push_back(evaluate(*e, u));
    return x;
  }

  std::vector<double> position(const std::vector<double>& u) const {
    std::vector<Jet> ju(u.begin(), u.end());
    std::vector<double> out;
    for (const auto& x : embed(ju)) out.push_back(x.value());
    return out;
  }

  const VectorFieldSpec* field(const std::string& fname) const {
    for (const auto& f : fields)
      if (f.name == fname) return &f;
    return nullptr;
  }

  void validate() const {
    if (params.empty()) throw Error("chart needs at least one parameter");
    if (m() >= n()) throw Error("chart dimension must be below the ambient dimension");
    if (domain.size() != params.size()) throw Error("domain count differs from parameter count");
    if (!provider && static_cast<int>(embedding.size()) != n())
      throw Error("embedding count differs from ambient dimension");
    for (const auto& [lo, hi] : domain)
      if (!(lo < hi)) throw Error("empty parameter interval");
  }
};

inline VectorFieldSpec make_field(const std::string& name, const std::vector<std::string>& comps,
                                  const std::vector<std::string>& params, bool killing = true) {
  VectorFieldSpec f;
  f.name = name;
  f.text = comps;
  f.expect_killing = killing;
  for (const auto& c : comps) f.components.push_back(parse_expression(c, params));
  return f;
}

inline Chart make_chart(std::string name, Signature sig, std::vector<std::string> params,
                        std::vector<std::pair<double, double>> domain, std::vector<std::string> embedding) {
  Chart c;
  c.name = std::move(name);
  c.ambient = sig;
  c.params = std::move(params);
  c.domain = std::move(domain);
  c.embedding_text = std::move(embedding);
  for (const auto& e : c.embedding_text) c.embedding.push_back(parse_expression(e, c.params));
  c.validate();
  return c;
}

struct ChartOptions {
  double radius = 1.0;  // sphere
  double major = 2.0;   // torus R
  double minor = 0.5;   // torus r
};

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "(%.17g)", x);
  return buf;
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"plane", "sphere", "torus", "paraboloid", "helicoid",
                                                 "clifford-torus", "ds2", "hyperbolic-h2"};
  return names;
}

inline Chart builtin_chart(const std::string& name, const ChartOptions& opt = {}) {
  constexpr double tau = 2.0 * std::numbers::pi;
  constexpr double pi = std::numbers::pi;
  if (name == "plane") {
    Chart c = make_chart(name, {3, 0}, {"u", "v"}, {{-1, 1}, {-1, 1}}, {"u", "v", "0"});
    c.fields.push_back(make_field("translation", {"1", "0"}, c.params));
    c.fields.push_back(make_field("rotation", {"-v", "u"}, c.params));
    c.fields.push_back(make_field("shear", {"v", "0"}, c.params, false));
    return c;
  }
  if (name == "sphere") {
    const std::string r = num(opt.radius);
    Chart c = make_chart(name, {3, 0}, {"phi", "theta"}, {{0, tau}, {0, pi}},
                         {r + "*sin(theta)*cos(phi)", r + "*sin(theta)*sin(phi)", r + "*cos(theta)"});
    c.fields.push_back(make_field("rotation", {"1", "0"}, c.params));
    c.fields.push_back(make_field("tilt", {"-cos(phi)/tan(theta)", "-sin(phi)"}, c.params));
    c.fields.push_back(make_field("twist", {"theta", "0"}, c.params, false));
    return c;
  }
  if (name == "torus") {
    const std::string R = num(opt.major), r = num(opt.minor);
    Chart c = make_chart(name, {3, 0}, {"u", "v"}, {{0, tau}, {0, tau}},
                         {"(" + R + "+" + r + "*cos(v))*cos(u)", "(" + R + "+" + r + "*cos(v))*sin(u)",
                          r + "*sin(v)"});
    c.fields.push_back(make_field("rotation", {"1", "0"}, c.params));
    c.fields.push_back(make_field("dilation", {"u", "0"}, c.params, false));
    return c;
  }
  if (name == "paraboloid") {
    Chart c = make_chart(name, {3, 0}, {"u", "v"}, {{-1, 1}, {-1, 1}}, {"u", "v", "u^2+v^2"});
    c.fields.push_back(make_field("rotation", {"-v", "u"}, c.params));
    return c;
  }
  if (name == "helicoid") {
    Chart c = make_chart(name, {3, 0}, {"u", "v"}, {{-1, 1}, {0, tau}}, {"u*cos(v)", "u*sin(v)", "v"});
    c.fields.push_back(make_field("screw", {"0", "1"}, c.params));
    return c;
  }
  if (name == "clifford-torus") {
    Chart c = make_chart(name, {4, 0}, {"u", "v"}, {{0, tau}, {0, tau}}, {"cos(u)", "sin(u)", "cos(v)", "sin(v)"});
    c.fields.push_back(make_field("rotation", {"1", "0"}, c.params));
    c.fields.push_back(make_field("rotation-v", {"0", "1"}, c.params));
    return c;
  }
  if (name == "ds2") {
    Chart c = make_chart(name, {1, 2}, {"t", "phi"}, {{-1, 1}, {0, tau}},
                         {"sinh(t)", "cosh(t)*cos(phi)", "cosh(t)*sin(phi)"});
    c.fields.push_back(make_field("boost", {"cos(phi)", "-tanh(t)*sin(phi)"}, c.params));
    c.fields.push_back(make_field("rotation", {"0", "1"}, c.params));
    c.fields.push_back(make_field("stretch", {"t", "0"}, c.params, false));
    return c;
  }
  if (name == "hyperbolic-h2") {
    // time-like axis last, so the induced metric is positive definite
    Chart c = make_chart(name, {2, 1}, {"t", "phi"}, {{0.2, 1.5}, {0, tau}},
                         {"sinh(t)*cos(phi)", "sinh(t)*sin(phi)", "cosh(t)"});
    c.fields.push_back(make_field("rotation", {"0", "1"}, c.params));
    c.fields.push_back(make_field("boost", {"cos(phi)", "-sin(phi)/tanh(t)"}, c.params));
    return c;
  }
  throw Error("unknown manifold '" + name + "'");
}

}  // namespace branegeo

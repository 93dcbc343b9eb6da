#pragma once
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"

namespace branegeo {

enum class UnaryOp { Neg, Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Ast;
using AstPtr = std::shared_ptr<const Ast>;

struct Ast {
  enum class Kind { Constant, Variable, Unary, Binary };
  Kind kind = Kind::Constant;
  double value = 0.0;   // Constant
  int var = -1;         // Variable: index into the parameter list
  std::string name;     // Variable
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  AstPtr lhs, rhs;      // Unary uses lhs only

  static AstPtr constant(double v) {
    auto a = std::make_shared<Ast>();
    a->value = v;
    return a;
  }
  static AstPtr variable(int idx, std::string n) {
    auto a = std::make_shared<Ast>();
    a->kind = Kind::Variable;
    a->var = idx;
    a->name = std::move(n);
    return a;
  }
  static AstPtr unary(UnaryOp op, AstPtr c) {
    auto a = std::make_shared<Ast>();
    a->kind = Kind::Unary;
    a->uop = op;
    a->lhs = std::move(c);
    return a;
  }
  static AstPtr binary(BinaryOp op, AstPtr l, AstPtr r) {
    auto a = std::make_shared<Ast>();
    a->kind = Kind::Binary;
    a->bop = op;
    a->lhs = std::move(l);
    a->rhs = std::move(r);
    return a;
  }

  bool has_variables() const {
    switch (kind) {
      case Kind::Constant: return false;
      case Kind::Variable: return true;
      case Kind::Unary: return lhs->has_variables();
      case Kind::Binary: return lhs->has_variables() || rhs->has_variables();
    }
    return false;
  }
};

inline const char* unary_name(UnaryOp op) {
  static const char* names[] = {"-", "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt"};
  return names[static_cast<int>(op)];
}

inline const char* binary_name(BinaryOp op) {
  static const char* names[] = {"+", "-", "*", "/", "^"};
  return names[static_cast<int>(op)];
}

// Fully parenthesized rendering, handy for tests and diagnostics.
inline std::string to_string(const Ast& a) {
  switch (a.kind) {
    case Ast::Kind::Constant: {
      std::string s = std::to_string(a.value);
      while (s.size() > 1 && s.back() == '0') s.pop_back();
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    }
    case Ast::Kind::Variable: return a.name;
    case Ast::Kind::Unary:
      if (a.uop == UnaryOp::Neg) return "(-" + to_string(*a.lhs) + ")";
      return std::string(unary_name(a.uop)) + "(" + to_string(*a.lhs) + ")";
    case Ast::Kind::Binary:
      return "(" + to_string(*a.lhs) + " " + binary_name(a.bop) + " " + to_string(*a.rhs) + ")";
  }
  return {};
}

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& params) : s_(text), params_(params) {}

  AstPtr parse() {
    skip();
    if (i_ >= s_.size()) throw SyntaxError(pos(), "expression");
    AstPtr e = expr();
    skip();
    if (i_ < s_.size()) throw SyntaxError(pos(), "operator or end of input");
    return e;
  }

 private:
  std::size_t pos() const { return i_ + 1; }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  AstPtr expr() {
    AstPtr l = term();
    for (;;) {
      if (eat('+')) l = Ast::binary(BinaryOp::Add, l, term());
      else if (eat('-')) l = Ast::binary(BinaryOp::Sub, l, term());
      else return l;
    }
  }

  AstPtr term() {
    AstPtr l = signed_factor();
    for (;;) {
      if (eat('*')) l = Ast::binary(BinaryOp::Mul, l, signed_factor());
      else if (eat('/')) l = Ast::binary(BinaryOp::Div, l, signed_factor());
      else return l;
    }
  }

  AstPtr signed_factor() {
    if (eat('-')) return Ast::unary(UnaryOp::Neg, signed_factor());
    if (eat('+')) return signed_factor();
    return power();
  }

  AstPtr power() {
    AstPtr base = primary();
    for (;;) {
      skip();
      if (i_ >= s_.size() || s_[i_] != '^') return base;
      ++i_;
      skip();
      const std::size_t at = pos();
      bool neg = false;
      while (eat('-')) neg = !neg;
      AstPtr ex = primary();
      if (ex->has_variables()) throw SyntaxError(at, "constant exponent");
      double v = eval_constant(*ex);
      base = Ast::binary(BinaryOp::Pow, base, Ast::constant(neg ? -v : v));
    }
  }

  static double eval_constant(const Ast& a);

  AstPtr primary() {
    skip();
    if (i_ >= s_.size()) throw SyntaxError(pos(), "number, identifier or '('");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      AstPtr e = expr();
      if (!eat(')')) throw SyntaxError(pos(), "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(pos(), "number, identifier or '('");
  }

  AstPtr number() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t k = i_ + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        i_ = k;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
    }
    std::string tok(s_.substr(start, i_ - start));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw SyntaxError(start + 1, "number");
    return Ast::constant(v);
  }

  AstPtr identifier() {
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    std::string id(s_.substr(start, i_ - start));
    for (std::size_t k = 0; k < params_.size(); ++k)
      if (params_[k] == id) return Ast::variable(static_cast<int>(k), id);
    static const std::pair<const char*, UnaryOp> fns[] = {
        {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},   {"tan", UnaryOp::Tan}, {"sinh", UnaryOp::Sinh},
        {"cosh", UnaryOp::Cosh}, {"tanh", UnaryOp::Tanh}, {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log},
        {"sqrt", UnaryOp::Sqrt}};
    for (const auto& [fname, op] : fns) {
      if (id != fname) continue;
      if (!eat('(')) throw SyntaxError(pos(), "'(' after " + id);
      AstPtr arg = expr();
      if (!eat(')')) throw SyntaxError(pos(), "')'");
      return Ast::unary(op, arg);
    }
    if (id == "pi") return Ast::constant(std::numbers::pi);
    throw UnknownIdentifier(id, start + 1);
  }

  std::string_view s_;
  const std::vector<std::string>& params_;
  std::size_t i_ = 0;
};

}  // namespace detail

// Recursive-descent parse. Precedence: ^ over unary minus over * / over + -.
inline AstPtr parse_expression(std::string_view text, const std::vector<std::string>& params) {
  return detail::Parser(text, params).parse();
}

inline double apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::Neg: return -x;
    case UnaryOp::Sin: return std::sin(x);
    case UnaryOp::Cos: return std::cos(x);
    case UnaryOp::Tan: return std::tan(x);
    case UnaryOp::Sinh: return std::sinh(x);
    case UnaryOp::Cosh: return std::cosh(x);
    case UnaryOp::Tanh: return std::tanh(x);
    case UnaryOp::Exp: return std::exp(x);
    case UnaryOp::Log:
      if (!(x > 0.0)) throw DomainError("log of nonpositive value");
      return std::log(x);
    case UnaryOp::Sqrt:
      if (!(x > 0.0)) throw DomainError("sqrt of nonpositive value");
      return std::sqrt(x);
  }
  return 0.0;
}

inline Jet apply_unary(UnaryOp op, const Jet& x) {
  switch (op) {
    case UnaryOp::Neg: return -x;
    case UnaryOp::Sin: return sin(x);
    case UnaryOp::Cos: return cos(x);
    case UnaryOp::Tan: return tan(x);
    case UnaryOp::Sinh: return sinh(x);
    case UnaryOp::Cosh: return cosh(x);
    case UnaryOp::Tanh: return tanh(x);
    case UnaryOp::Exp: return exp(x);
    case UnaryOp::Log: return log(x);
    case UnaryOp::Sqrt: return sqrt(x);
  }
  return x;
}

inline double apply_pow(double x, double p) {
  const bool integral = std::floor(p) == p;
  if (!integral && !(x > 0.0)) throw DomainError("non-integer power of nonpositive value");
  if (x == 0.0 && p < 0.0) throw DomainError("negative power of zero");
  return std::pow(x, p);
}
inline Jet apply_pow(const Jet& x, double p) { return pow(x, p); }

inline double apply_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}
inline Jet apply_div(const Jet& a, const Jet& b) { return a / b; }

// Evaluate with the variables bound to the given scalars (plain or jets).
template <class S>
S evaluate(const Ast& a, const std::vector<S>& vars) {
  switch (a.kind) {
    case Ast::Kind::Constant: return S(a.value);
    case Ast::Kind::Variable: return vars.at(a.var);
    case Ast::Kind::Unary: return apply_unary(a.uop, evaluate(*a.lhs, vars));
    case Ast::Kind::Binary: {
      if (a.bop == BinaryOp::Pow) return apply_pow(evaluate(*a.lhs, vars), a.rhs->value);
      S l = evaluate(*a.lhs, vars);
      S r = evaluate(*a.rhs, vars);
      switch (a.bop) {
        case BinaryOp::Add: return l + r;
        case BinaryOp::Sub: return l - r;
        case BinaryOp::Mul: return l * r;
        case BinaryOp::Div: return apply_div(l, r);
        case BinaryOp::Pow: break;
      }
    }
  }
  return S(0.0);
}

inline double detail::Parser::eval_constant(const Ast& a) { return evaluate<double>(a, {}); }

// Variables of the jet are centred at the point; K in 0..3.
inline std::vector<Jet> jet_variables(const std::vector<double>& point, int order) {
  if (order < 0 || order > kMaxJetOrder) throw InsufficientJetOrder("jet order must be in 0..3");
  std::vector<Jet> v;
  const int m = static_cast<int>(point.size());
  for (int i = 0; i < m; ++i) v.push_back(Jet::variable(m, order, i, point[i]));
  return v;
}

inline Jet eval_jet(const Ast& a, const std::vector<double>& point, int order) {
  Jet j = evaluate(a, jet_variables(point, order));
  if (j.exact()) j = Jet::constant(static_cast<int>(point.size()), order, j.value());
  return j;
}

}  // namespace branegeo

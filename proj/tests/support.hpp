#pragma once
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <branegeo/expr.hpp>
#include <branegeo/sampling.hpp>

namespace testing_support {

using Fn = std::function<double(const std::vector<double>&)>;

// Central difference along the listed axes (repeats allowed), one step h per axis.
inline double central(const Fn& f, std::vector<double> x, const std::vector<int>& axes, double h,
                      std::size_t k = 0) {
  if (k == axes.size()) return f(x);
  const int i = axes[k];
  const double x0 = x[i];
  x[i] = x0 + h;
  const double up = central(f, x, axes, h, k + 1);
  x[i] = x0 - h;
  const double dn = central(f, x, axes, h, k + 1);
  return (up - dn) / (2 * h);
}

// Two-level Richardson extrapolation of the central difference, error O(h^6).
inline double richardson(const Fn& f, const std::vector<double>& x, const std::vector<int>& axes, double h) {
  const double d1 = central(f, x, axes, h), d2 = central(f, x, axes, h / 2), d4 = central(f, x, axes, h / 4);
  const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
  return (16 * r2 - r1) / 15;
}

// Random expression text over the parameters with bounded, smooth building blocks.
class ExprGen {
 public:
  ExprGen(std::vector<std::string> params, std::uint64_t seed) : params_(std::move(params)), rng_(seed) {}

  std::string gen(int depth) {
    if (depth <= 0 || rng_.uniform() < 0.2) return leaf();
    const std::string a = gen(depth - 1);
    switch (static_cast<int>(rng_.uniform() * 11)) {
      case 0: return "(" + a + " + " + gen(depth - 1) + ")";
      case 1: return "(" + a + " - " + gen(depth - 1) + ")";
      case 2: return "(" + a + ")*(" + gen(depth - 1) + ")";
      case 3: return "sin(" + a + ")";
      case 4: return "cos(" + a + ")";
      case 5: return "tanh(" + a + ")";
      case 6: return "exp(sin(" + a + "))";
      case 7: return "sqrt(2 + sin(" + a + "))";
      case 8: return "log(2 + cos(" + a + "))";
      case 9: return "(" + a + ")/(2 + sin(" + gen(depth - 1) + "))";
      default: return "(1.5 + cos(" + a + "))^" + (rng_.uniform() < 0.5 ? "2" : "0.5");
    }
  }

 private:
  std::string leaf() {
    if (rng_.uniform() < 0.7) return params_[static_cast<std::size_t>(rng_.uniform() * params_.size())];
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", rng_.uniform(-1.5, 1.5));
    return buf;
  }

  std::vector<std::string> params_;
  branegeo::Lcg64 rng_;
};

}  // namespace testing_support

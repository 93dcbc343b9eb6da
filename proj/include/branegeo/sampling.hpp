#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace branegeo {

// 64-bit linear congruential generator (Knuth's MMIX constants). Uniform
// doubles take the top 53 bits, so the stream is portable bit for bit.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

using Box = std::vector<std::pair<double, double>>;

// Interval shrunk by `margin` of its width on each side.
inline std::pair<double, double> interior(std::pair<double, double> iv, double margin) {
  const double w = iv.second - iv.first;
  return {iv.first + margin * w, iv.second - margin * w};
}

inline std::vector<std::vector<double>> sample_points(const Box& box, int count, std::uint64_t seed,
                                                      double margin = 0.01) {
  Lcg64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::vector<double> p;
    for (const auto& iv : box) {
      const auto [lo, hi] = interior(iv, margin);
      p.push_back(rng.uniform(lo, hi));
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

// Cell-centred grid over the margin-shrunk box, first parameter varying slowest.
inline std::vector<std::vector<double>> grid_points(const Box& box, const std::vector<int>& shape,
                                                    double margin = 0.01) {
  if (shape.size() != box.size()) throw ShapeMismatch("grid rank differs from chart dimension");
  std::vector<std::vector<double>> pts{{}};
  for (std::size_t d = 0; d < box.size(); ++d) {
    if (shape[d] < 1) throw ShapeMismatch("grid extent must be positive");
    const auto [lo, hi] = interior(box[d], margin);
    std::vector<std::vector<double>> next;
    for (const auto& p : pts)
      for (int i = 0; i < shape[d]; ++i) {
        auto q = p;
        q.push_back(lo + (hi - lo) * (i + 0.5) / shape[d]);
        next.push_back(std::move(q));
      }
    pts = std::move(next);
  }
  return pts;
}

// "32x32" -> {32, 32}
inline std::vector<int> parse_grid(const std::string& spec) {
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const std::size_t x = spec.find('x', pos);
    const std::string part = spec.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw Error("malformed grid '" + spec + "'");
    out.push_back(std::stoi(part));
    if (x == std::string::npos) break;
    pos = x + 1;
  }
  return out;
}

}  // namespace branegeo

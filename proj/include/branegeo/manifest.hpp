#pragma once
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chart.hpp"

namespace branegeo {

// Plain-text chart description:
//
//   [ambient]
//   signature = "+,+,+"
//   [chart]
//   name = sphere          (optional)
//   params = phi, theta
//   phi = 0..2*pi
//   theta = 0..pi
//   [embedding]
//   x1 = "sin(theta)*cos(phi)"
//   ...
//   [killing rotation]     (optional, repeatable; bare [killing] is named "killing")
//   X_phi = "1"
//   X_theta = "0"
//   [sampling]             (optional)
//   samples = 64
//   seed = 42
//
// Blank lines and text after '#' are ignored; values may be double-quoted.
struct Manifest {
  Chart chart;
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> grid;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

inline std::string unquote(const std::string& v, std::size_t line) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  if (v.find('"') != std::string::npos) throw ManifestError("SyntaxError", line, "unbalanced quotes");
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline double constant_value(const std::string& text, std::size_t line) {
  try {
    return evaluate<double>(*parse_expression(text, {}), {});
  } catch (const ManifestError&) {
    throw;
  } catch (const Error& e) {
    throw ManifestError("SyntaxError", line, "bad constant '" + text + "': " + e.what());
  }
}

inline AstPtr parse_at(const std::string& text, const std::vector<std::string>& params, std::size_t line) {
  try {
    return parse_expression(text, params);
  } catch (const Error& e) {
    throw ManifestError("SyntaxError", line, e.what());
  }
}

}  // namespace detail

inline Manifest parse_manifest(const std::string& text, const std::string& default_name = "manifest") {
  using detail::trim;
  struct Entry {
    std::string key, value;
    std::size_t line;
  };
  struct Section {
    std::string kind, label;
    std::size_t line;
    std::vector<Entry> entries;
  };
  std::vector<Section> sections;

  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string s = trim(detail::strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ManifestError("SyntaxError", lineno, "unterminated section header");
      const std::string head = trim(s.substr(1, s.size() - 2));
      const auto sp = head.find_first_of(" \t");
      Section sec{head.substr(0, sp), sp == std::string::npos ? "" : trim(head.substr(sp)), lineno, {}};
      static const std::set<std::string> known = {"ambient", "chart", "embedding", "killing", "sampling"};
      if (!known.count(sec.kind)) throw ManifestError("UnknownKey", lineno, "unknown section [" + sec.kind + "]");
      if (sec.kind != "killing" && !sec.label.empty())
        throw ManifestError("SyntaxError", lineno, "section [" + sec.kind + "] takes no label");
      sections.push_back(std::move(sec));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ManifestError("SyntaxError", lineno, "expected 'key = value'");
    if (sections.empty()) throw ManifestError("SyntaxError", lineno, "entry outside any section");
    Entry e{trim(s.substr(0, eq)), detail::unquote(trim(s.substr(eq + 1)), lineno), lineno};
    if (e.key.empty()) throw ManifestError("SyntaxError", lineno, "missing key");
    if (e.value.empty()) throw ManifestError("SyntaxError", lineno, "missing value for '" + e.key + "'");
    for (const auto& prev : sections.back().entries)
      if (prev.key == e.key) throw ManifestError("SyntaxError", lineno, "repeated key '" + e.key + "'");
    sections.back().entries.push_back(std::move(e));
  }

  auto find_one = [&](const std::string& kind) -> const Section* {
    const Section* found = nullptr;
    for (const auto& sec : sections)
      if (sec.kind == kind) {
        if (found) throw ManifestError("SyntaxError", sec.line, "repeated section [" + kind + "]");
        found = &sec;
      }
    return found;
  };

  Manifest mf;
  Chart& c = mf.chart;
  c.name = default_name;

  const Section* amb = find_one("ambient");
  if (!amb) throw ManifestError("SyntaxError", 0, "missing [ambient] section");
  bool have_sig = false;
  for (const auto& e : amb->entries) {
    if (e.key != "signature") throw ManifestError("UnknownKey", e.line, "unknown key '" + e.key + "' in [ambient]");
    int p = 0, q = 0;
    bool neg_seen = false;
    for (const auto& t : detail::split_list(e.value)) {
      if (t == "+") {
        // the fixed basis order puts every +1 direction first
        if (neg_seen) throw ManifestError("SyntaxError", e.line, "signature must list '+' entries before '-'");
        ++p;
      } else if (t == "-") {
        neg_seen = true;
        ++q;
      } else {
        throw ManifestError("SyntaxError", e.line, "signature entries must be '+' or '-'");
      }
    }
    if (p + q < 2 || p + q > 12) throw ManifestError("DimensionMismatch", e.line, "ambient dimension must be 2..12");
    c.ambient = Signature(p, q);
    have_sig = true;
  }
  if (!have_sig) throw ManifestError("SyntaxError", amb->line, "[ambient] needs a signature");

  const Section* ch = find_one("chart");
  if (!ch) throw ManifestError("SyntaxError", 0, "missing [chart] section");
  std::size_t params_line = 0;
  for (const auto& e : ch->entries)
    if (e.key == "params") {
      params_line = e.line;
      std::set<std::string> seen;
      for (const auto& p : detail::split_list(e.value)) {
        if (p.empty() || !(std::isalpha(static_cast<unsigned char>(p[0])) || p[0] == '_'))
          throw ManifestError("SyntaxError", e.line, "bad parameter name '" + p + "'");
        if (!seen.insert(p).second) throw ManifestError("DuplicateParameter", e.line, "duplicate parameter '" + p + "'");
        if (p == "pi") throw ManifestError("SyntaxError", e.line, "'pi' is reserved");
        c.params.push_back(p);
      }
    }
  if (c.params.empty()) throw ManifestError("SyntaxError", ch->line, "[chart] needs 'params'");
  c.domain.assign(c.params.size(), {0.0, 0.0});
  std::vector<bool> have_dom(c.params.size(), false);
  for (const auto& e : ch->entries) {
    if (e.key == "params") continue;
    if (e.key == "name") {
      c.name = e.value;
      continue;
    }
    std::size_t k = 0;
    while (k < c.params.size() && c.params[k] != e.key) ++k;
    if (k == c.params.size()) throw ManifestError("UnknownKey", e.line, "unknown key '" + e.key + "' in [chart]");
    const auto dots = e.value.find("..");
    if (dots == std::string::npos) throw ManifestError("SyntaxError", e.line, "interval must read 'lo..hi'");
    const double lo = detail::constant_value(trim(e.value.substr(0, dots)), e.line);
    const double hi = detail::constant_value(trim(e.value.substr(dots + 2)), e.line);
    if (!(lo < hi)) throw ManifestError("SyntaxError", e.line, "empty interval for '" + e.key + "'");
    c.domain[k] = {lo, hi};
    have_dom[k] = true;
  }
  for (std::size_t k = 0; k < c.params.size(); ++k)
    if (!have_dom[k]) throw ManifestError("SyntaxError", params_line, "no interval for parameter '" + c.params[k] + "'");

  const Section* emb = find_one("embedding");
  if (!emb) throw ManifestError("SyntaxError", 0, "missing [embedding] section");
  for (const auto& e : emb->entries) {
    c.embedding_text.push_back(e.value);
    c.embedding.push_back(detail::parse_at(e.value, c.params, e.line));
  }
  if (static_cast<int>(c.embedding.size()) != c.n())
    throw ManifestError("DimensionMismatch", emb->line,
                        std::to_string(c.embedding.size()) + " embedding expressions for a " +
                            std::to_string(c.n()) + "-dimensional ambient signature");
  if (c.m() >= c.n())
    throw ManifestError("DimensionMismatch", params_line, "chart dimension must be below the ambient dimension");

  for (const auto& sec : sections) {
    if (sec.kind != "killing") continue;
    VectorFieldSpec f;
    f.name = sec.label.empty() ? "killing" : sec.label;
    for (const auto& other : c.fields)
      if (other.name == f.name) throw ManifestError("SyntaxError", sec.line, "repeated field '" + f.name + "'");
    f.components.resize(c.params.size());
    f.text.resize(c.params.size());
    for (const auto& e : sec.entries) {
      std::size_t k = c.params.size();
      if (e.key.rfind("X_", 0) == 0)
        for (k = 0; k < c.params.size() && c.params[k] != e.key.substr(2);) ++k;
      if (k == c.params.size()) throw ManifestError("UnknownKey", e.line, "unknown key '" + e.key + "' in [killing]");
      f.text[k] = e.value;
      f.components[k] = detail::parse_at(e.value, c.params, e.line);
    }
    for (std::size_t k = 0; k < c.params.size(); ++k)
      if (!f.components[k])
        throw ManifestError("DimensionMismatch", sec.line, "missing component X_" + c.params[k]);
    c.fields.push_back(std::move(f));
  }

  if (const Section* smp = find_one("sampling")) {
    for (const auto& e : smp->entries) {
      try {
        if (e.key == "samples") {
          mf.samples = std::stoi(e.value);
          if (*mf.samples < 1) throw std::invalid_argument("samples");
        } else if (e.key == "seed") {
          mf.seed = std::stoull(e.value);
        } else if (e.key == "grid") {
          mf.grid = e.value;
        } else {
          throw ManifestError("UnknownKey", e.line, "unknown key '" + e.key + "' in [sampling]");
        }
      } catch (const std::logic_error&) {
        throw ManifestError("SyntaxError", e.line, "bad value for '" + e.key + "'");
      }
    }
  }
  return mf;
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read manifest '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  std::string stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse_manifest(ss.str(), stem);
}

}  // namespace branegeo

#pragma once
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "killing.hpp"
#include "sampling.hpp"
#include "verify.hpp"

namespace branegeo {

inline const std::vector<std::string>& report_quantities() {
  static const std::vector<std::string> q = {"metric", "shape", "curvature", "ricci", "scalar", "hills"};
  return q;
}

struct ReportColumn {
  std::string name, description;
};

struct ReportOptions {
  std::vector<int> grid;
  std::vector<std::string> quantities;
  std::string format = "csv";
};

// Frame indices are 1-based in column names; frame quantities use the
// orthonormal coframe, coordinate quantities use the chart parameters.
struct Report {
  std::string target;
  std::vector<int> grid;
  std::vector<std::string> quantities;
  std::vector<ReportColumn> columns;
  std::vector<std::vector<std::optional<double>>> rows;  // empty optional: undetermined
};

namespace detail {

inline std::vector<ReportColumn> report_columns(const Chart& chart, const std::vector<std::string>& qs) {
  const int m = chart.m();
  const auto idx = [](int a) { return std::to_string(a + 1); };
  std::vector<ReportColumn> cols{{"index", "grid point index, first parameter varying slowest"}};
  for (const auto& p : chart.params) cols.push_back({p, "chart coordinate " + p});
  for (const auto& q : qs) {
    if (q == "metric") {
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
          cols.push_back({"g_" + chart.params[i] + "_" + chart.params[j],
                          "induced metric component on coordinates " + chart.params[i] + ", " + chart.params[j]});
    } else if (q == "shape") {
      for (int a = 0; a < m; ++a)
        cols.push_back({"shape_norm_" + idx(a), "norm of the shape bivector of coframe vector " + idx(a)});
      cols.push_back({"shape_max", "largest shape bivector norm over the coframe"});
    } else if (q == "curvature") {
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          cols.push_back({"sectional_" + idx(a) + "_" + idx(b),
                          "sectional curvature of the coframe plane " + idx(a) + "," + idx(b)});
      cols.push_back({"curvature_norm", "Frobenius norm of the curvature components R(a,b,c,d)"});
    } else if (q == "ricci") {
      for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b)
          cols.push_back({"ricci_" + idx(a) + "_" + idx(b), "Ricci component Ric(e_a).e_b in the coframe"});
    } else if (q == "scalar") {
      cols.push_back({"scalar", "curvature scalar R"});
      cols.push_back({"gaussian", "mean sectional curvature R/(m(m-1)), the Gaussian curvature when m = 2"});
    } else if (q == "hills") {
      cols.push_back({"hills_shape2_norm", "largest norm of S^2 over the coframe"});
      cols.push_back({"hills_residual", "largest residual of S^2(t^a) = T^a - T t^a / 2"});
      cols.push_back({"hills_source_trace", "source trace T, empty when undetermined (m = 2)"});
      cols.push_back({"hills_vacuum", "1 when S^2 vanishes on the whole coframe"});
    } else {
      throw Error("unknown quantity '" + q + "'");
    }
  }
  return cols;
}

inline int report_order(const std::vector<std::string>& qs) {
  int k = 1;
  for (const auto& q : qs) k = std::max(k, q == "metric" ? 1 : q == "hills" ? 3 : 2);
  return k;
}

inline std::vector<std::optional<double>> report_row(const Chart& chart, std::size_t index,
                                                     const std::vector<double>& u,
                                                     const std::vector<std::string>& qs, int order) {
  std::vector<std::optional<double>> row{static_cast<double>(index)};
  row.insert(row.end(), u.begin(), u.end());
  const Geometry g(frame_point(chart, u, order));
  const int m = g.m();
  std::optional<CurvatureSample> s;
  auto sample = [&]() -> const CurvatureSample& {
    if (!s) s = curvature_sample(g);
    return *s;
  };
  for (const auto& q : qs) {
    if (q == "metric") {
      for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) row.push_back(g.frame().g[i][j].value());
    } else if (q == "shape") {
      double mx = 0;
      for (int a = 0; a < m; ++a) {
        const double n = values(g.shape_biform(g.theta(a))).norm();
        mx = std::max(mx, n);
        row.push_back(n);
      }
      row.push_back(mx);
    } else if (q == "curvature") {
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          row.push_back(scalar_product(wedge(g.theta(a), g.theta(b)), sample().at(a, b)).value());
      row.push_back(detail::frobenius(curvature_tensor(g, sample())));
    } else if (q == "ricci") {
      for (int a = 0; a < m; ++a) {
        const Field ric = ricci(g, sample(), g.theta_lower(a), RicciMethod::Contract);
        for (int b = a; b < m; ++b) row.push_back(scalar_product(ric, g.theta_lower(b)).value());
      }
    } else if (q == "scalar") {
      const double r = curvature_scalar(g, sample());
      row.push_back(r);
      row.push_back(m > 1 ? r / (m * (m - 1.0)) : 0.0);
    } else if (q == "hills") {
      const auto h = hills_report(g, sample());
      double s2 = 0, res = 0;
      for (const auto& f : h.frames) {
        s2 = std::max(s2, f.shape2.norm());
        res = std::max(res, f.residual);
      }
      row.push_back(s2);
      row.push_back(res);
      row.push_back(h.source_trace);
      row.push_back(h.vacuum ? 1.0 : 0.0);
    }
  }
  return row;
}

inline std::string format_number(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline Report run_report(const Chart& chart, const ReportOptions& opt) {
  chart.validate();
  if (opt.quantities.empty()) throw Error("no quantities requested");
  Report rep;
  rep.target = chart.name;
  rep.grid = opt.grid;
  rep.quantities = opt.quantities;
  rep.columns = detail::report_columns(chart, opt.quantities);
  const int order = detail::report_order(opt.quantities);
  const auto pts = grid_points(chart.domain, opt.grid);
  rep.rows.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    rep.rows.push_back(detail::report_row(chart, i, pts[i], opt.quantities, order));
  return rep;
}

inline std::string grid_text(const std::vector<int>& grid) {
  std::string s;
  for (std::size_t i = 0; i < grid.size(); ++i) s += (i ? "x" : "") + std::to_string(grid[i]);
  return s;
}

// Comment lines starting with '#' document the columns, then one header row
// and one row per grid point. Undetermined values are left empty.
inline std::string report_csv(const Report& r) {
  std::string out = "# target: " + r.target + "\n# grid: " + grid_text(r.grid) + "\n";
  for (const auto& c : r.columns) out += "# " + c.name + ": " + c.description + "\n";
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + r.columns[i].name;
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      if (row[i]) out += detail::format_number(*row[i]);
    }
    out += "\n";
  }
  return out;
}

inline nlohmann::ordered_json report_json(const Report& r) {
  nlohmann::ordered_json j;
  j["target"] = r.target;
  j["grid"] = r.grid;
  j["quantities"] = r.quantities;
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  for (const auto& c : r.columns) cols.push_back({{"name", c.name}, {"description", c.description}});
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    auto jr = nlohmann::ordered_json::array();
    for (const auto& v : row) jr.push_back(v && std::isfinite(*v) ? nlohmann::ordered_json(*v) : nullptr);
    rows.push_back(std::move(jr));
  }
  return j;
}

}  // namespace branegeo

#include "sbcode/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sbcode {

namespace {

struct RowView {
  std::int64_t s = 0;
  double p = 0.0;
  double epsilon = 0.0;
  std::string decoder;
  double mean_err_over_k = 0.0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

double parse_number(const std::string& text, const char* column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) {
      throw std::invalid_argument("");
    }
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("column '") + column +
                                "' has non-numeric value '" + text + "'");
  }
}

std::string fmt(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// fixed palette, matplotlib tab10 order
const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

constexpr double kPanelW = 380.0;
constexpr double kPanelH = 320.0;
constexpr double kMarginL = 56.0;
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 34.0;
constexpr double kMarginB = 44.0;

}  // namespace

std::string render_results_svg(const std::string& csv_text) {
  std::stringstream in(csv_text);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("results CSV is empty");
  }
  if (!header.empty() && header.back() == '\r') {
    header.pop_back();
  }
  const std::vector<std::string> columns = split_csv_line(header);
  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    col_index[columns[i]] = i;
  }
  const char* required[] = {"s", "p", "epsilon", "decoder", "mean_err_over_k"};
  std::string missing;
  for (const char* name : required) {
    if (!col_index.count(name)) {
      if (!missing.empty()) {
        missing += ", ";
      }
      missing += name;
    }
  }
  if (!missing.empty()) {
    throw std::invalid_argument("results CSV is missing columns: " + missing);
  }

  std::vector<RowView> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != columns.size()) {
      throw std::invalid_argument("results CSV row has " +
                                  std::to_string(cells.size()) +
                                  " cells, header has " +
                                  std::to_string(columns.size()));
    }
    RowView row;
    row.s = static_cast<std::int64_t>(parse_number(cells[col_index["s"]], "s"));
    row.p = parse_number(cells[col_index["p"]], "p");
    row.epsilon = parse_number(cells[col_index["epsilon"]], "epsilon");
    row.decoder = cells[col_index["decoder"]];
    row.mean_err_over_k =
        parse_number(cells[col_index["mean_err_over_k"]], "mean_err_over_k");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw std::invalid_argument("results CSV has no data rows");
  }

  std::vector<std::int64_t> s_values;
  for (const RowView& r : rows) {
    if (std::find(s_values.begin(), s_values.end(), r.s) == s_values.end()) {
      s_values.push_back(r.s);
    }
  }
  std::sort(s_values.begin(), s_values.end());

  bool multi_decoder = false;
  for (const RowView& r : rows) {
    if (r.decoder != rows.front().decoder) {
      multi_decoder = true;
      break;
    }
  }

  double x_max = 0.0;
  double y_max = 0.0;
  for (const RowView& r : rows) {
    x_max = std::max(x_max, r.epsilon);
    y_max = std::max({y_max, r.mean_err_over_k, r.epsilon});
  }
  if (x_max <= 0.0) {
    x_max = 1.0;
  }
  if (y_max <= 0.0) {
    y_max = 1.0;
  }
  x_max *= 1.05;
  y_max *= 1.08;

  const double total_w =
      static_cast<double>(s_values.size()) * kPanelW;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         fmt(total_w) + "\" height=\"" + fmt(kPanelH) +
         "\" viewBox=\"0 0 " + fmt(total_w) + " " + fmt(kPanelH) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t panel = 0; panel < s_values.size(); ++panel) {
    const std::int64_t s = s_values[panel];
    const double x0 = static_cast<double>(panel) * kPanelW + kMarginL;
    const double y0 = kMarginT;
    const double plot_w = kPanelW - kMarginL - kMarginR;
    const double plot_h = kPanelH - kMarginT - kMarginB;
    auto to_x = [&](double eps) { return x0 + eps / x_max * plot_w; };
    auto to_y = [&](double v) { return y0 + plot_h - v / y_max * plot_h; };

    svg += "<rect x=\"" + fmt(x0) + "\" y=\"" + fmt(y0) + "\" width=\"" +
           fmt(plot_w) + "\" height=\"" + fmt(plot_h) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(x0 + plot_w / 2) + "\" y=\"" + fmt(y0 - 12.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">s = " +
           std::to_string(s) + "</text>\n";

    for (int tick = 0; tick <= 5; ++tick) {
      const double fx = x_max * tick / 5.0;
      const double fy = y_max * tick / 5.0;
      svg += "<line x1=\"" + fmt(to_x(fx)) + "\" y1=\"" + fmt(y0 + plot_h) +
             "\" x2=\"" + fmt(to_x(fx)) + "\" y2=\"" +
             fmt(y0 + plot_h + 4.0) + "\" stroke=\"#333333\"/>\n";
      svg += "<text x=\"" + fmt(to_x(fx)) + "\" y=\"" +
             fmt(y0 + plot_h + 18.0) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"10\">" +
             fmt(std::round(fx * 1000.0) / 1000.0) + "</text>\n";
      svg += "<line x1=\"" + fmt(x0 - 4.0) + "\" y1=\"" + fmt(to_y(fy)) +
             "\" x2=\"" + fmt(x0) + "\" y2=\"" + fmt(to_y(fy)) +
             "\" stroke=\"#333333\"/>\n";
      svg += "<text x=\"" + fmt(x0 - 7.0) + "\" y=\"" + fmt(to_y(fy) + 3.0) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"10\">" +
             fmt(std::round(fy * 1000.0) / 1000.0) + "</text>\n";
    }
    svg += "<text x=\"" + fmt(x0 + plot_w / 2) + "\" y=\"" +
           fmt(y0 + plot_h + 34.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">epsilon</text>\n";
    svg += "<text x=\"" + fmt(x0 - 42.0) + "\" y=\"" + fmt(y0 + plot_h / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\" transform=\"rotate(-90 " + fmt(x0 - 42.0) + " " +
           fmt(y0 + plot_h / 2) + ")\">err / k</text>\n";

    // series keyed by (p, decoder), sorted for stable colors
    std::vector<std::pair<double, std::string>> keys;
    for (const RowView& r : rows) {
      if (r.s != s) {
        continue;
      }
      const std::pair<double, std::string> key{r.p, r.decoder};
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        keys.push_back(key);
      }
    }
    std::sort(keys.begin(), keys.end());

    // uncoded reference: err/k = epsilon
    std::vector<double> eps_grid;
    for (const RowView& r : rows) {
      if (r.s == s &&
          std::find(eps_grid.begin(), eps_grid.end(), r.epsilon) ==
              eps_grid.end()) {
        eps_grid.push_back(r.epsilon);
      }
    }
    std::sort(eps_grid.begin(), eps_grid.end());
    std::string uncoded_points;
    for (double e : eps_grid) {
      uncoded_points += fmt(to_x(e)) + "," + fmt(to_y(e)) + " ";
    }
    svg += "<polyline points=\"" + uncoded_points +
           "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\"/>\n";

    double legend_y = y0 + 14.0;
    svg += "<text x=\"" + fmt(x0 + plot_w - 8.0) + "\" y=\"" + fmt(legend_y) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"10\" fill=\"#555555\">uncoded</text>\n";
    legend_y += 13.0;

    for (std::size_t si = 0; si < keys.size(); ++si) {
      const auto& [p, decoder] = keys[si];
      std::vector<std::pair<double, double>> pts;
      for (const RowView& r : rows) {
        if (r.s == s && r.p == p && r.decoder == decoder) {
          pts.emplace_back(r.epsilon, r.mean_err_over_k);
        }
      }
      std::sort(pts.begin(), pts.end());
      std::string points;
      for (const auto& [e, v] : pts) {
        points += fmt(to_x(e)) + "," + fmt(to_y(v)) + " ";
      }
      const char* color = kPalette[si % 10];
      svg += "<polyline points=\"" + points +
             "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.5\"/>\n";
      for (const auto& [e, v] : pts) {
        svg += "<circle cx=\"" + fmt(to_x(e)) + "\" cy=\"" + fmt(to_y(v)) +
               "\" r=\"2.2\" fill=\"" + color + "\"/>\n";
      }
      std::string label = "p = " + fmt(p);
      if (multi_decoder) {
        label += " (" + decoder + ")";
      }
      svg += "<text x=\"" + fmt(x0 + plot_w - 8.0) + "\" y=\"" +
             fmt(legend_y) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"10\" fill=\"" +
             color + "\">" + label + "</text>\n";
      legend_y += 13.0;
    }
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace sbcode

#ifndef TWISTLAB_REPORT_HPP
#define TWISTLAB_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace twistlab {

inline const char* version() { return "0.1.0"; }

/// FNV-1a over the canonical (sorted-key, compact) JSON dump; stable across
/// runs and platforms, used to tag reports with their exact configuration.
inline std::string config_hash(const nlohmann::json& cfg) {
  const std::string s = cfg.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// A rectangular table destined for CSV and plots: one labeled x column plus
/// named y columns.
struct Table {
  std::string x_label;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> columns;

  void add_column(std::string label, std::vector<double> values) {
    if (values.size() != x.size())
      throw std::invalid_argument("Table: column length does not match x");
    columns.emplace_back(std::move(label), std::move(values));
  }
};

inline std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  os << t.x_label;
  for (const auto& [label, _] : t.columns) os << ',' << label;
  os << '\n';
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    os << format_number(t.x[i]);
    for (const auto& [_, col] : t.columns) os << ',' << format_number(col[i]);
    os << '\n';
  }
  return os.str();
}

/// Self-contained SVG line plot of every column against x. Non-finite points
/// break the polyline.
inline std::string to_svg(const Table& t, const std::string& title,
                          int width = 640, int height = 420) {
  const double ml = 60, mr = 20, mt = 40, mb = 45;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (double v : t.x) {
    if (!std::isfinite(v)) continue;
    if (!any) { xmin = xmax = v; }
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
    any = true;
  }
  bool anyy = false;
  for (const auto& [_, col] : t.columns)
    for (double v : col) {
      if (!std::isfinite(v)) continue;
      if (!anyy) { ymin = ymax = v; anyy = true; }
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double v) { return ml + pw * (v - xmin) / (xmax - xmin); };
  auto py = [&](double v) { return mt + ph * (1.0 - (v - ymin) / (ymax - ymin)); };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
  // axes
  os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
     << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << mt + ph << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    os << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
       << std::setprecision(4) << xv << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << py(yv) + 4
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
       << std::setprecision(4) << yv << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << t.x_label << "</text>\n";

  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const auto& [label, col] = t.columns[c];
    const char* color = palette[c % 8];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool open = false;
    for (std::size_t i = 0; i < t.x.size(); ++i) {
      if (!std::isfinite(t.x[i]) || !std::isfinite(col[i])) { open = false; continue; }
      if (open) os << ' ';
      os << px(t.x[i]) << ',' << py(col[i]);
      open = true;
    }
    os << "\"/>\n";
    os << "<text x=\"" << ml + pw - 4 << "\" y=\"" << mt + 16 + 16 * static_cast<double>(c)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
       << color << "\">" << label << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << content;
}

/// Report envelope: every emitted report.json carries its config hash and the
/// library version so runs are reproducible and attributable.
inline nlohmann::json make_report(const nlohmann::json& config, nlohmann::json results) {
  return nlohmann::json{{"version", version()},
                        {"config", config},
                        {"config_hash", config_hash(config)},
                        {"results", std::move(results)}};
}

}  // namespace twistlab

#endif  // TWISTLAB_REPORT_HPP

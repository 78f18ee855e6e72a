#include "ips/gmms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "ips/error.hpp"
#include "ips/text.hpp"

namespace ips {

namespace {

constexpr int kFontPx = 12;
constexpr double kRadiusFraction = 0.27;  // ry at aspect 3 stays inside the cell

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + ": value must be finite and positive, got " + text::format_shortest(v));
  }
}

std::string num(double v) { return text::format_fixed(v, 2); }

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

int lerp_channel(int from, int to, double t) {
  return static_cast<int>(std::lround(static_cast<double>(from) + t * static_cast<double>(to - from)));
}

// Approximate text width for layout; glyph metrics are not available.
double text_width(const std::string& s) { return 0.6 * kFontPx * static_cast<double>(s.size()); }

std::string glyph(double cx, double cy, double r, double aspect, const std::string& fill, const std::string& stroke) {
  if (aspect == 1.0) {
    return "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) + "\" fill=\"" + fill +
           "\" stroke=\"" + stroke + "\"/>";
  }
  const double s = std::sqrt(aspect);
  return "<ellipse cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" rx=\"" + num(r / s) + "\" ry=\"" + num(r * s) +
         "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>";
}

std::string text_at(double x, double y, const std::string& anchor, const std::string& body) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" + escape(body) + "</text>";
}

}  // namespace

void validate(const GmmsGrid& grid) {
  if (grid.methods.empty() || grid.scenarios.empty()) throw ConfigError("GMMS grid is empty");
  if (std::set<std::string>(grid.methods.begin(), grid.methods.end()).size() != grid.methods.size()) {
    throw ConfigError("GMMS grid: duplicate method label");
  }
  if (std::set<std::string>(grid.scenarios.begin(), grid.scenarios.end()).size() != grid.scenarios.size()) {
    throw ConfigError("GMMS grid: duplicate scenario label");
  }
  for (const auto& m : grid.methods) {
    for (const auto& s : grid.scenarios) {
      const auto it = grid.cells.find({m, s});
      if (it == grid.cells.end()) throw ConfigError("GMMS grid: missing cell (" + m + ", " + s + ")");
      require_positive(it->second.color, ("GMMS cell (" + m + ", " + s + ") color").c_str());
      require_positive(it->second.shape, ("GMMS cell (" + m + ", " + s + ") shape").c_str());
    }
  }
}

double color_score(double v) {
  require_positive(v, "color_score");
  return std::clamp(std::log2(v), -2.0, 2.0) / 2.0;
}

Rgb fill_color(double v) {
  const double s = color_score(v);
  if (s < 0.0) return {lerp_channel(255, 0, -s), lerp_channel(255, 160, -s), lerp_channel(255, 0, -s)};
  return {lerp_channel(255, 200, s), lerp_channel(255, 0, s), lerp_channel(255, 0, s)};
}

std::string to_hex(Rgb c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

double shape_aspect(double v) {
  require_positive(v, "shape_aspect");
  return std::clamp(v, 1.0 / 3.0, 3.0);
}

ColorClass classify_color(double v, double tolerance) {
  const double s = color_score(v);
  if (std::abs(s) <= tolerance) return ColorClass::White;
  return s < 0.0 ? ColorClass::Green : ColorClass::Red;
}

ShapeClass classify_shape(double v, double tolerance) {
  const double a = shape_aspect(v);
  if (std::abs(a - 1.0) <= tolerance) return ShapeClass::Circle;
  return a < 1.0 ? ShapeClass::Horizontal : ShapeClass::Vertical;
}

std::string render_gmms(const GmmsGrid& grid, int cell_px) {
  validate(grid);
  if (cell_px <= 0) throw ConfigError("cell_px must be positive");
  const double cell = cell_px;
  const double r = kRadiusFraction * cell;

  double label_w = 0.0;
  for (const auto& m : grid.methods) label_w = std::max(label_w, text_width(m));
  const double left = std::ceil(label_w) + 16.0;
  const double top = 2.0 * kFontPx + 16.0;
  const double grid_w = cell * static_cast<double>(grid.scenarios.size());
  const double grid_h = cell * static_cast<double>(grid.methods.size());

  static constexpr double kColorSteps[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  static constexpr double kShapeSteps[] = {1.0 / 3.0, 1.0, 3.0};
  const double swatch = std::max(cell * 0.5, 16.0);
  const double legend_top = top + grid_h + 2.0 * kFontPx;
  const double color_row_y = legend_top + kFontPx + 4.0;
  const double shape_row_y = color_row_y + swatch + 2.0 * kFontPx + 8.0;
  const double legend_bottom = shape_row_y + cell + kFontPx;

  const std::string color_title = "color: " + grid.color_label + " (normalized)";
  const std::string shape_title = "shape: " + grid.shape_label + " (normalized)";
  const double legend_w = std::max({5.0 * (swatch + 24.0), 3.0 * cell, text_width(color_title), text_width(shape_title)});
  const double width = std::ceil(left + std::max(grid_w, legend_w) + 16.0);
  const double height = std::ceil(legend_bottom + 8.0);

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(kFontPx) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#fafafa\"/>\n";

  out += "<g id=\"scenarios\">\n";
  for (std::size_t c = 0; c < grid.scenarios.size(); ++c) {
    out += text_at(left + (static_cast<double>(c) + 0.5) * cell, top - 8.0, "middle", grid.scenarios[c]) + "\n";
  }
  out += "</g>\n<g id=\"methods\">\n";
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    out += text_at(left - 8.0, top + (static_cast<double>(m) + 0.5) * cell + kFontPx / 3.0, "end", grid.methods[m]) +
           "\n";
  }
  out += "</g>\n";

  out += "<g id=\"grid\" stroke=\"#d0d0d0\">\n";
  for (std::size_t c = 0; c <= grid.scenarios.size(); ++c) {
    const double x = left + static_cast<double>(c) * cell;
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(top) + "\" x2=\"" + num(x) + "\" y2=\"" + num(top + grid_h) + "\"/>\n";
  }
  for (std::size_t m = 0; m <= grid.methods.size(); ++m) {
    const double y = top + static_cast<double>(m) * cell;
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(left + grid_w) + "\" y2=\"" + num(y) + "\"/>\n";
  }
  out += "</g>\n";

  out += "<g id=\"cells\">\n";
  for (std::size_t m = 0; m < grid.methods.size(); ++m) {
    for (std::size_t c = 0; c < grid.scenarios.size(); ++c) {
      const auto& cellv = grid.cells.at({grid.methods[m], grid.scenarios[c]});
      const double cx = left + (static_cast<double>(c) + 0.5) * cell;
      const double cy = top + (static_cast<double>(m) + 0.5) * cell;
      out += "<g><title>" + escape(grid.methods[m] + " / " + grid.scenarios[c] + ": " + grid.color_label + "=" +
                                   num(cellv.color) + ", " + grid.shape_label + "=" + num(cellv.shape)) +
             "</title>";
      out += glyph(cx, cy, r, shape_aspect(cellv.shape), to_hex(fill_color(cellv.color)), "#404040");
      out += "</g>\n";
    }
  }
  out += "</g>\n";

  // Legend glyphs are gray ellipses and rect swatches so they never look like data cells.
  out += "<g id=\"legend\">\n";
  out += text_at(left, legend_top, "start", color_title) + "\n";
  for (std::size_t i = 0; i < std::size(kColorSteps); ++i) {
    const double x = left + static_cast<double>(i) * (swatch + 24.0);
    out += "<rect x=\"" + num(x) + "\" y=\"" + num(color_row_y) + "\" width=\"" + num(swatch) + "\" height=\"" +
           num(swatch) + "\" fill=\"" + to_hex(fill_color(kColorSteps[i])) + "\" stroke=\"#404040\"/>\n";
    out += text_at(x + swatch / 2.0, color_row_y + swatch + kFontPx + 2.0, "middle", num(kColorSteps[i])) + "\n";
  }
  out += text_at(left, shape_row_y - 4.0, "start", shape_title) + "\n";
  for (std::size_t i = 0; i < std::size(kShapeSteps); ++i) {
    const double cx = left + (static_cast<double>(i) + 0.5) * cell;
    const double cy = shape_row_y + cell / 2.0;
    const double s = std::sqrt(kShapeSteps[i]);
    out += "<ellipse cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" rx=\"" + num(r / s) + "\" ry=\"" + num(r * s) +
           "\" fill=\"#b0b0b0\" stroke=\"#404040\"/>\n";
    out += text_at(cx, shape_row_y + cell + kFontPx - 2.0, "middle", num(kShapeSteps[i])) + "\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

GmmsGrid grid_from_aggregate_rows(const std::vector<AggregateRow>& rows, const std::string& color_metric,
                                  const std::string& shape_metric) {
  GmmsGrid grid;
  grid.color_label = color_metric;
  grid.shape_label = shape_metric;
  std::set<std::string> seen_methods;
  std::set<std::string> seen_scenarios;
  std::map<std::pair<std::string, std::string>, double> color;
  std::map<std::pair<std::string, std::string>, double> shape;
  for (const auto& row : rows) {
    if (row.scenario.empty() || !row.normalized) continue;
    if (row.metric != color_metric && row.metric != shape_metric) continue;
    if (seen_methods.insert(row.method).second) grid.methods.push_back(row.method);
    if (seen_scenarios.insert(row.scenario).second) grid.scenarios.push_back(row.scenario);
    if (row.metric == color_metric) color[{row.method, row.scenario}] = *row.normalized;
    if (row.metric == shape_metric) shape[{row.method, row.scenario}] = *row.normalized;
  }
  if (grid.methods.empty()) {
    throw ConfigError("aggregate report has no normalized rows for '" + color_metric + "' or '" + shape_metric + "'");
  }
  for (const auto& m : grid.methods) {
    for (const auto& s : grid.scenarios) {
      const auto c = color.find({m, s});
      const auto h = shape.find({m, s});
      if (c == color.end()) throw ConfigError("missing cell: " + color_metric + " for (" + m + ", " + s + ")");
      if (h == shape.end()) throw ConfigError("missing cell: " + shape_metric + " for (" + m + ", " + s + ")");
      grid.cells[{m, s}] = {c->second, h->second};
    }
  }
  return grid;
}

}  // namespace ips

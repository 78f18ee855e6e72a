#pragma once

// Method x scenario grid of ellipses. Fill color encodes one normalized
// metric on a log2 scale, the ellipse aspect encodes a second one.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ips/report.hpp"

namespace ips {

struct GmmsCell {
  double color = 1.0;  // normalized metric driving the fill
  double shape = 1.0;  // normalized metric driving the aspect
};

struct GmmsGrid {
  std::vector<std::string> methods;    // rows, top to bottom
  std::vector<std::string> scenarios;  // columns, left to right
  std::map<std::pair<std::string, std::string>, GmmsCell> cells;  // (method, scenario)
  std::string color_label = "tau_db";
  std::string shape_label = "epsilon_3d";
};

/// Throws ConfigError for an empty grid, duplicate labels, a missing cell or
/// a value that is not finite and positive.
void validate(const GmmsGrid& grid);

/// clamp(log2 v, -2, 2) / 2.
double color_score(double v);

struct Rgb {
  int r = 255;
  int g = 255;
  int b = 255;
  bool operator==(const Rgb&) const = default;
};

/// White at s = 0, green (0,160,0) at s = -1, red (200,0,0) at s = +1.
Rgb fill_color(double v);
std::string to_hex(Rgb c);

/// clamp(v, 1/3, 3); height/width ratio of the rendered ellipse.
double shape_aspect(double v);

enum class ColorClass { Green, White, Red };
enum class ShapeClass { Horizontal, Circle, Vertical };

/// |s| <= tolerance counts as white.
ColorClass classify_color(double v, double tolerance = 0.05);
/// |aspect - 1| <= tolerance counts as a circle.
ShapeClass classify_shape(double v, double tolerance = 0.05);

/// SVG 1.1 document. Cells are emitted row-major; a cell whose aspect is
/// exactly 1 is a <circle>, every other cell an <ellipse>.
std::string render_gmms(const GmmsGrid& grid, int cell_px = 48);

/// Grid from the per-scenario normalized rows of an aggregate report, in
/// order of first appearance. Throws ConfigError on a missing cell.
GmmsGrid grid_from_aggregate_rows(const std::vector<AggregateRow>& rows, const std::string& color_metric,
                                  const std::string& shape_metric);

}  // namespace ips

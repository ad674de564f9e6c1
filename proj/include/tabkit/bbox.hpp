#pragma once

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "tabkit/error.hpp"

namespace tabkit {

// Axis-aligned rectangle in normalized page coordinates: origin top-left,
// x to the right, y downward, every coordinate a fraction of the page in [0,1].
struct BBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }

  bool operator==(const BBox&) const = default;
};

// True when 0 <= x1 < x2 <= 1 and 0 <= y1 < y2 <= 1.
bool is_valid(const BBox& box);

// Clamps each coordinate into [0,1], then rejects boxes with x1 >= x2 or
// y1 >= y2 (and non-finite input) with a DegenerateBox diagnostic.
std::variant<BBox, Diagnostic> validate_bbox(const std::array<double, 4>& raw);

// Throwing form of validate_bbox.
BBox make_bbox(double x1, double y1, double x2, double y2);

// Intersection over union. Throws Error(DegenerateBox) on invalid input.
double bbox_iou(const BBox& a, const BBox& b);

double intersection_area(const BBox& a, const BBox& b);
std::optional<BBox> intersect(const BBox& a, const BBox& b);
BBox enclose(const BBox& a, const BBox& b);
bool contains_point(const BBox& box, double x, double y);

// "[x1, y1, x2, y2]" with exactly three decimals.
std::string format_bbox(const BBox& box);

}  // namespace tabkit

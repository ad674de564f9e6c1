#include "tabkit/bbox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tabkit {

namespace {

std::string raw_to_string(const std::array<double, 4>& raw) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "(%g, %g, %g, %g)", raw[0], raw[1], raw[2], raw[3]);
  return buf;
}

void require_valid(const BBox& box) {
  if (!is_valid(box)) {
    throw Error(ErrorCode::DegenerateBox,
                "invalid box " + raw_to_string({box.x1, box.y1, box.x2, box.y2}));
  }
}

}  // namespace

bool is_valid(const BBox& b) {
  return b.x1 >= 0.0 && b.y1 >= 0.0 && b.x2 <= 1.0 && b.y2 <= 1.0 && b.x1 < b.x2 &&
         b.y1 < b.y2;
}

std::variant<BBox, Diagnostic> validate_bbox(const std::array<double, 4>& raw) {
  for (double v : raw) {
    if (!std::isfinite(v)) {
      return Diagnostic{DiagnosticKind::DegenerateBox, 0,
                        "non-finite coordinate " + raw_to_string(raw)};
    }
  }
  BBox box{std::clamp(raw[0], 0.0, 1.0), std::clamp(raw[1], 0.0, 1.0),
           std::clamp(raw[2], 0.0, 1.0), std::clamp(raw[3], 0.0, 1.0)};
  if (box.x1 >= box.x2 || box.y1 >= box.y2) {
    return Diagnostic{DiagnosticKind::DegenerateBox, 0, "degenerate box " + raw_to_string(raw)};
  }
  return box;
}

BBox make_bbox(double x1, double y1, double x2, double y2) {
  auto result = validate_bbox({x1, y1, x2, y2});
  if (auto* diag = std::get_if<Diagnostic>(&result)) {
    throw Error(ErrorCode::DegenerateBox, diag->message);
  }
  return std::get<BBox>(result);
}

double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double bbox_iou(const BBox& a, const BBox& b) {
  require_valid(a);
  require_valid(b);
  if (a == b) return 1.0;
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

std::optional<BBox> intersect(const BBox& a, const BBox& b) {
  BBox out{std::max(a.x1, b.x1), std::max(a.y1, b.y1), std::min(a.x2, b.x2),
           std::min(a.y2, b.y2)};
  if (out.x1 >= out.x2 || out.y1 >= out.y2) return std::nullopt;
  return out;
}

BBox enclose(const BBox& a, const BBox& b) {
  return {std::min(a.x1, b.x1), std::min(a.y1, b.y1), std::max(a.x2, b.x2),
          std::max(a.y2, b.y2)};
}

bool contains_point(const BBox& box, double x, double y) {
  return x >= box.x1 && x <= box.x2 && y >= box.y1 && y <= box.y2;
}

std::string format_bbox(const BBox& box) {
  char buf[96];
  // + 0.0 folds negative zero so it never prints as "-0.000".
  std::snprintf(buf, sizeof buf, "[%.3f, %.3f, %.3f, %.3f]", box.x1 + 0.0, box.y1 + 0.0,
                box.x2 + 0.0, box.y2 + 0.0);
  return buf;
}

}  // namespace tabkit

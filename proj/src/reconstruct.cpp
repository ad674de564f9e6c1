#include "tabkit/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "tabkit/textio.hpp"

namespace tabkit {

namespace {

constexpr double kEdgeEpsilon = 1e-9;
constexpr double kDuplicateIou = 0.5;

bool near(double a, double b) { return std::abs(a - b) <= kEdgeEpsilon; }

// Center containment, with the area-overlap fallback when the center sits on
// the object edge.
bool belongs_to(const BBox& cell, const BBox& object) {
  const double cx = cell.center_x();
  const double cy = cell.center_y();
  if (!contains_point(object, cx, cy)) {
    // Tolerate centers that miss the edge by rounding noise.
    const bool on_edge_x = near(cx, object.x1) || near(cx, object.x2);
    const bool on_edge_y = near(cy, object.y1) || near(cy, object.y2);
    const bool inside_x = cx >= object.x1 - kEdgeEpsilon && cx <= object.x2 + kEdgeEpsilon;
    const bool inside_y = cy >= object.y1 - kEdgeEpsilon && cy <= object.y2 + kEdgeEpsilon;
    if (!((on_edge_x || on_edge_y) && inside_x && inside_y)) return false;
  } else {
    const bool on_edge = near(cx, object.x1) || near(cx, object.x2) || near(cy, object.y1) ||
                         near(cy, object.y2);
    if (!on_edge) return true;
  }
  const double area = cell.area();
  return area > 0.0 && intersection_area(cell, object) / area >= 0.5;
}

std::vector<BBox> suppress_duplicates(std::vector<BBox> boxes, std::string_view what,
                                      Diagnostics& diags) {
  // Larger area wins; ties fall back to reading order so the result does not
  // depend on input order.
  std::sort(boxes.begin(), boxes.end(), [](const BBox& a, const BBox& b) {
    if (a.area() != b.area()) return a.area() > b.area();
    return std::tie(a.y1, a.x1, a.y2, a.x2) < std::tie(b.y1, b.x1, b.y2, b.x2);
  });
  std::vector<BBox> kept;
  for (const BBox& box : boxes) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const BBox& k) {
      return bbox_iou(k, box) > kDuplicateIou;
    });
    if (duplicate) {
      diags.push_back({DiagnosticKind::DroppedObject, 0,
                       std::string(what) + " " + format_bbox(box) + " duplicates a larger one"});
    } else {
      kept.push_back(box);
    }
  }
  return kept;
}

struct Rect {
  std::size_t r0, c0, r1, c1;  // half-open
};

}  // namespace

GridReconstruction objects_to_grid(std::span<const TableObject> objects) {
  GridReconstruction out;
  Diagnostics& diags = out.diagnostics;

  const std::vector<TableObject> ordered = canonicalize(std::vector<TableObject>(objects.begin(), objects.end()));
  std::vector<BBox> rows, cols, headers, projected, spanning;
  for (const TableObject& obj : ordered) {
    if (!is_valid(obj.bbox)) {
      diags.push_back({DiagnosticKind::DegenerateBox, 0, "skipped invalid " +
                                                             std::string(surface_string(obj.cls))});
      continue;
    }
    switch (obj.cls) {
      case ObjectClass::TableRow: rows.push_back(obj.bbox); break;
      case ObjectClass::TableColumn: cols.push_back(obj.bbox); break;
      case ObjectClass::ColumnHeader: headers.push_back(obj.bbox); break;
      case ObjectClass::ProjectedRowHeader: projected.push_back(obj.bbox); break;
      case ObjectClass::SpanningCell: spanning.push_back(obj.bbox); break;
    }
  }

  rows = suppress_duplicates(std::move(rows), "row", diags);
  cols = suppress_duplicates(std::move(cols), "column", diags);
  if (rows.empty()) throw Error(ErrorCode::NoRows, "no table row objects");
  if (cols.empty()) throw Error(ErrorCode::NoColumns, "no table column objects");

  std::sort(rows.begin(), rows.end(), [](const BBox& a, const BBox& b) {
    return std::make_tuple(a.center_y(), a.center_x(), a.y1, a.x1) <
           std::make_tuple(b.center_y(), b.center_x(), b.y1, b.x1);
  });
  std::sort(cols.begin(), cols.end(), [](const BBox& a, const BBox& b) {
    return std::make_tuple(a.center_x(), a.center_y(), a.x1, a.y1) <
           std::make_tuple(b.center_x(), b.center_y(), b.x1, b.y1);
  });

  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = cols.size();
  std::vector<BBox> base(n_rows * n_cols);
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      // Rows and columns that fail to overlap still define an aligned cell.
      base[r * n_cols + c] =
          intersect(rows[r], cols[c]).value_or(BBox{cols[c].x1, rows[r].y1, cols[c].x2, rows[r].y2});
    }
  }

  std::vector<bool> claimed(n_rows * n_cols, false);
  std::vector<std::pair<Rect, bool>> merged;  // rectangle, projected-row-header flag
  auto rect_free = [&](const Rect& rc) {
    for (std::size_t r = rc.r0; r < rc.r1; ++r)
      for (std::size_t c = rc.c0; c < rc.c1; ++c)
        if (claimed[r * n_cols + c]) return false;
    return true;
  };
  auto claim = [&](const Rect& rc) {
    for (std::size_t r = rc.r0; r < rc.r1; ++r)
      for (std::size_t c = rc.c0; c < rc.c1; ++c) claimed[r * n_cols + c] = true;
  };

  for (const BBox& prh : projected) {
    bool any = false;
    for (std::size_t r = 0; r < n_rows; ++r) {
      if (!belongs_to(rows[r], prh)) continue;
      any = true;
      const Rect rc{r, 0, r + 1, n_cols};
      if (!rect_free(rc)) continue;
      claim(rc);
      merged.push_back({rc, true});
    }
    if (!any) {
      diags.push_back({DiagnosticKind::DroppedObject, 0,
                       "projected row header " + format_bbox(prh) + " matches no row"});
    }
  }

  for (const BBox& span : spanning) {
    std::optional<Rect> rc;
    std::size_t members = 0;
    for (std::size_t r = 0; r < n_rows; ++r) {
      for (std::size_t c = 0; c < n_cols; ++c) {
        if (!belongs_to(base[r * n_cols + c], span)) continue;
        ++members;
        if (!rc) {
          rc = Rect{r, c, r + 1, c + 1};
        } else {
          rc->r0 = std::min(rc->r0, r);
          rc->c0 = std::min(rc->c0, c);
          rc->r1 = std::max(rc->r1, r + 1);
          rc->c1 = std::max(rc->c1, c + 1);
        }
      }
    }
    if (!rc) {
      diags.push_back({DiagnosticKind::DroppedObject, 0,
                       "spanning cell " + format_bbox(span) + " contains no cell center"});
      continue;
    }
    if (members != (rc->r1 - rc->r0) * (rc->c1 - rc->c0)) {
      diags.push_back({DiagnosticKind::NonContiguousSpan, 0,
                       "spanning cell " + format_bbox(span) + " widened to its enclosing rectangle"});
    }
    if ((rc->r1 - rc->r0) * (rc->c1 - rc->c0) == 1) continue;
    if (!rect_free(*rc)) {
      diags.push_back({DiagnosticKind::OverlappingSpan, 0,
                       "spanning cell " + format_bbox(span) + " overlaps an earlier merge"});
      continue;
    }
    claim(*rc);
    merged.push_back({*rc, false});
  }

  std::vector<bool> header_base(n_rows * n_cols, false);
  for (const BBox& head : headers) {
    for (std::size_t p = 0; p < base.size(); ++p) {
      if (belongs_to(base[p], head)) header_base[p] = true;
    }
  }

  TableGrid& grid = out.grid;
  grid.n_rows = n_rows;
  grid.n_cols = n_cols;
  auto make_cell = [&](const Rect& rc, bool prh) {
    GridCell cell;
    cell.row = rc.r0;
    cell.col = rc.c0;
    cell.rowspan = rc.r1 - rc.r0;
    cell.colspan = rc.c1 - rc.c0;
    cell.is_projected_row_header = prh;
    BBox box = base[rc.r0 * n_cols + rc.c0];
    for (std::size_t r = rc.r0; r < rc.r1; ++r) {
      for (std::size_t c = rc.c0; c < rc.c1; ++c) {
        box = enclose(box, base[r * n_cols + c]);
        if (header_base[r * n_cols + c]) cell.is_column_header = true;
      }
    }
    cell.bbox = box;
    grid.cells.push_back(std::move(cell));
  };
  for (const auto& [rc, prh] : merged) make_cell(rc, prh);
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!claimed[r * n_cols + c]) make_cell(Rect{r, c, r + 1, c + 1}, false);
    }
  }

  normalize_header_prefix(grid, diags);
  grid.sort_cells();
  return out;
}

std::vector<TableObject> grid_to_objects(const TableGrid& grid, const BBox& table_bbox) {
  require_valid_grid(grid);
  const std::size_t n_rows = grid.n_rows;
  const std::size_t n_cols = grid.n_cols;

  std::vector<double> row_y1(n_rows), row_y2(n_rows), col_x1(n_cols), col_x2(n_cols);
  auto uniform = [&] {
    for (std::size_t r = 0; r < n_rows; ++r) {
      row_y1[r] = table_bbox.y1 + table_bbox.height() * static_cast<double>(r) / n_rows;
      row_y2[r] = table_bbox.y1 + table_bbox.height() * static_cast<double>(r + 1) / n_rows;
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      col_x1[c] = table_bbox.x1 + table_bbox.width() * static_cast<double>(c) / n_cols;
      col_x2[c] = table_bbox.x1 + table_bbox.width() * static_cast<double>(c + 1) / n_cols;
    }
    if (n_rows > 0) row_y2[n_rows - 1] = table_bbox.y2;
    if (n_cols > 0) col_x2[n_cols - 1] = table_bbox.x2;
  };
  uniform();

  const bool located = !grid.cells.empty() &&
                       std::all_of(grid.cells.begin(), grid.cells.end(),
                                   [](const GridCell& c) { return c.bbox && is_valid(*c.bbox); });
  if (located) {
    std::vector<char> have_y1(n_rows), have_y2(n_rows), have_x1(n_cols), have_x2(n_cols);
    auto take_min = [](double& slot, char& have, double v) {
      slot = have ? std::min(slot, v) : v;
      have = 1;
    };
    auto take_max = [](double& slot, char& have, double v) {
      slot = have ? std::max(slot, v) : v;
      have = 1;
    };
    for (const GridCell& cell : grid.cells) {
      const BBox& b = *cell.bbox;
      const std::size_t r_last = cell.row_end() - 1;
      const std::size_t c_last = cell.col_end() - 1;
      take_min(row_y1[cell.row], have_y1[cell.row], b.y1);
      take_max(row_y2[r_last], have_y2[r_last], b.y2);
      take_min(col_x1[cell.col], have_x1[cell.col], b.x1);
      take_max(col_x2[c_last], have_x2[c_last], b.x2);
    }
    bool sane = true;
    for (std::size_t r = 0; r < n_rows; ++r) sane = sane && row_y1[r] < row_y2[r];
    for (std::size_t c = 0; c < n_cols; ++c) sane = sane && col_x1[c] < col_x2[c];
    if (!sane) uniform();
  }

  std::vector<TableObject> out;
  if (n_rows == 0 || n_cols == 0) return out;
  const double tx1 = *std::min_element(col_x1.begin(), col_x1.end());
  const double tx2 = *std::max_element(col_x2.begin(), col_x2.end());
  const double ty1 = *std::min_element(row_y1.begin(), row_y1.end());
  const double ty2 = *std::max_element(row_y2.begin(), row_y2.end());

  auto push = [&out](ObjectClass cls, double x1, double y1, double x2, double y2) {
    out.push_back({cls, make_bbox(x1, y1, x2, y2)});
  };
  for (std::size_t c = 0; c < n_cols; ++c) push(ObjectClass::TableColumn, col_x1[c], ty1, col_x2[c], ty2);
  for (std::size_t r = 0; r < n_rows; ++r) push(ObjectClass::TableRow, tx1, row_y1[r], tx2, row_y2[r]);

  const std::size_t header = grid.header_rows();
  if (header > 0) push(ObjectClass::ColumnHeader, tx1, row_y1[0], tx2, row_y2[header - 1]);

  for (const GridCell& cell : grid.cells) {
    if (cell.is_projected_row_header) {
      push(ObjectClass::ProjectedRowHeader, tx1, row_y1[cell.row], tx2, row_y2[cell.row]);
    } else if (cell.rowspan > 1 || cell.colspan > 1) {
      push(ObjectClass::SpanningCell, col_x1[cell.col], row_y1[cell.row], col_x2[cell.col_end() - 1],
           row_y2[cell.row_end() - 1]);
    }
  }
  return canonicalize(std::move(out));
}

BBox box_crop_to_page(const BBox& box, const BBox& region) {
  const double w = region.width();
  const double h = region.height();
  return {region.x1 + box.x1 * w, region.y1 + box.y1 * h, region.x1 + box.x2 * w,
          region.y1 + box.y2 * h};
}

BBox box_page_to_crop_unclamped(const BBox& box, const BBox& region) {
  const double w = region.width();
  const double h = region.height();
  if (!(w > 0.0) || !(h > 0.0)) {
    throw Error(ErrorCode::ZeroExtent, "table region " + format_bbox(region) + " has no area");
  }
  return {(box.x1 - region.x1) / w, (box.y1 - region.y1) / h, (box.x2 - region.x1) / w,
          (box.y2 - region.y1) / h};
}

std::vector<TableObject> crop_to_page(std::span<const TableObject> objects,
                                      const BBox& table_bbox_in_page) {
  if (!is_valid(table_bbox_in_page)) {
    throw Error(ErrorCode::DegenerateBox, "table region " + format_bbox(table_bbox_in_page));
  }
  std::vector<TableObject> out;
  out.reserve(objects.size());
  for (const TableObject& obj : objects) {
    const BBox mapped = box_crop_to_page(obj.bbox, table_bbox_in_page);
    out.push_back({obj.cls, make_bbox(mapped.x1, mapped.y1, mapped.x2, mapped.y2)});
  }
  return out;
}

RemapResult page_to_crop(std::span<const TableObject> objects, const BBox& table_bbox_in_page) {
  RemapResult out;
  const BBox& region = table_bbox_in_page;
  for (const TableObject& obj : objects) {
    const BBox raw = box_page_to_crop_unclamped(obj.bbox, region);
    const BBox& b = obj.bbox;
    if (b.x1 < region.x1 - kRegionTolerance || b.y1 < region.y1 - kRegionTolerance ||
        b.x2 > region.x2 + kRegionTolerance || b.y2 > region.y2 + kRegionTolerance) {
      out.diagnostics.push_back({DiagnosticKind::OutOfRegion, 0,
                                 std::string(surface_string(obj.cls)) + " " + format_bbox(b) +
                                     " extends past region " + format_bbox(region)});
    }
    auto clamped = validate_bbox({raw.x1, raw.y1, raw.x2, raw.y2});
    if (auto* diag = std::get_if<Diagnostic>(&clamped)) {
      out.diagnostics.push_back(*diag);
      continue;
    }
    out.objects.push_back({obj.cls, std::get<BBox>(clamped)});
  }
  return out;
}

}  // namespace tabkit

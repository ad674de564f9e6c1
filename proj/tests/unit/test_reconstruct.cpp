#include <doctest.h>

#include <algorithm>

#include "tabkit/fixtures.hpp"
#include "tabkit/reconstruct.hpp"
#include "tabkit/textio.hpp"

using namespace tabkit;

namespace {

const TableObject kCol0{ObjectClass::TableColumn, {0.0, 0.0, 0.5, 1.0}};
const TableObject kCol1{ObjectClass::TableColumn, {0.5, 0.0, 1.0, 1.0}};
const TableObject kRow0{ObjectClass::TableRow, {0.0, 0.0, 1.0, 0.5}};
const TableObject kRow1{ObjectClass::TableRow, {0.0, 0.5, 1.0, 1.0}};

bool has(const Diagnostics& d, DiagnosticKind kind) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.kind == kind; });
}

std::size_t count(const std::vector<TableObject>& objs, ObjectClass cls) {
  return static_cast<std::size_t>(std::count_if(objs.begin(), objs.end(), [&](const TableObject& o) { return o.cls == cls; }));
}

bool near(const BBox& a, const BBox& b, double eps) {
  return std::abs(a.x1 - b.x1) <= eps && std::abs(a.y1 - b.y1) <= eps && std::abs(a.x2 - b.x2) <= eps &&
         std::abs(a.y2 - b.y2) <= eps;
}

}  // namespace

TEST_CASE("rows and columns intersect into base cells") {
  const std::vector<TableObject> objs{kRow1, kCol1, kRow0, kCol0};
  const auto rec = objects_to_grid(objs);
  CHECK(rec.diagnostics.empty());
  CHECK(rec.grid.n_rows == 2);
  CHECK(rec.grid.n_cols == 2);
  REQUIRE(rec.grid.cells.size() == 4);
  CHECK(rec.grid.cells[0].bbox == BBox{0.0, 0.0, 0.5, 0.5});
  CHECK(rec.grid.cells[3].bbox == BBox{0.5, 0.5, 1.0, 1.0});
  CHECK(grid_validate(rec.grid).empty());
}

TEST_CASE("spanning cell over the first row") {
  const std::vector<TableObject> objs{kRow0, kRow1, kCol0, kCol1, {ObjectClass::SpanningCell, {0.0, 0.0, 1.0, 0.5}}};
  const auto rec = objects_to_grid(objs);
  REQUIRE(rec.grid.cells.size() == 3);
  CHECK(rec.grid.cells[0].row == 0);
  CHECK(rec.grid.cells[0].col == 0);
  CHECK(rec.grid.cells[0].colspan == 2);
  CHECK(rec.grid.cells[0].rowspan == 1);
}

TEST_CASE("3x3 with a 2x2 spanning cell and a header row") {
  // Hand-executed: the spanning cell contains the centers of base cells
  // (0,0) (0,1) (1,0) (1,1), so it absorbs them into one 2x2 anchor. The
  // header box contains row 0 centers, flagging (0,0); the prefix closes
  // over rowspan 2, so row 1 becomes header as well.
  std::vector<TableObject> objs;
  for (int i = 0; i < 3; ++i) {
    objs.push_back({ObjectClass::TableRow, {0.0, i / 3.0, 1.0, (i + 1) / 3.0}});
    objs.push_back({ObjectClass::TableColumn, {i / 3.0, 0.0, (i + 1) / 3.0, 1.0}});
  }
  objs.push_back({ObjectClass::SpanningCell, {0.0, 0.0, 2 / 3.0, 2 / 3.0}});
  objs.push_back({ObjectClass::ColumnHeader, {0.0, 0.0, 1.0, 1 / 3.0}});
  const auto rec = objects_to_grid(objs);
  CHECK(grid_validate(rec.grid).empty());
  const GridCell& anchor = rec.grid.cells[0];
  CHECK(anchor.row == 0);
  CHECK(anchor.col == 0);
  CHECK(anchor.rowspan == 2);
  CHECK(anchor.colspan == 2);
  CHECK(anchor.is_column_header);
  CHECK(rec.grid.cells.size() == 6);
  CHECK(rec.grid.header_rows() == 2);
}

TEST_CASE("near-duplicate rows are suppressed") {
  const std::vector<TableObject> objs{kRow0, {ObjectClass::TableRow, {0.0, 0.01, 1.0, 0.49}}, kRow1, kCol0, kCol1};
  const auto rec = objects_to_grid(objs);
  CHECK(rec.grid.n_rows == 2);
  CHECK(has(rec.diagnostics, DiagnosticKind::DroppedObject));
}

TEST_CASE("a span overlapping an earlier merge is dropped") {
  std::vector<TableObject> objs;
  for (int i = 0; i < 3; ++i) {
    objs.push_back({ObjectClass::TableRow, {0.0, i / 3.0, 1.0, (i + 1) / 3.0}});
    objs.push_back({ObjectClass::TableColumn, {i / 3.0, 0.0, (i + 1) / 3.0, 1.0}});
  }
  objs.push_back({ObjectClass::SpanningCell, {0.0, 0.0, 2 / 3.0, 1 / 3.0}});
  objs.push_back({ObjectClass::SpanningCell, {1 / 3.0, 0.0, 1.0, 2 / 3.0}});
  const auto rec = objects_to_grid(objs);
  CHECK(grid_validate(rec.grid).empty());
  CHECK(has(rec.diagnostics, DiagnosticKind::OverlappingSpan));
}

TEST_CASE("missing rows or columns") {
  const std::vector<TableObject> only_cols{kCol0, kCol1};
  const std::vector<TableObject> only_rows{kRow0};
  CHECK_THROWS_AS(objects_to_grid(only_cols), Error);
  CHECK_THROWS_AS(objects_to_grid(only_rows), Error);
}

TEST_CASE("grid to objects") {
  TableGrid g{2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}};
  auto objs = grid_to_objects(g, {0, 0, 1, 1});
  CHECK(objs.size() == 4);
  CHECK(count(objs, ObjectClass::TableRow) == 2);
  CHECK(count(objs, ObjectClass::TableColumn) == 2);

  TableGrid spanned{2, 2, {{0, 0, 1, 2}, {1, 0}, {1, 1}}};
  objs = grid_to_objects(spanned, {0, 0, 1, 1});
  CHECK(count(objs, ObjectClass::SpanningCell) == 1);
  CHECK(objects_to_grid(objs).grid.cells[0].colspan == 2);
}

TEST_CASE("grid to objects to grid is structurally identity") {
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const TableGrid g = random_grid(rng, {8, 8});
    const auto objs = grid_to_objects(g, {0.05, 0.05, 0.95, 0.95});
    const auto rec = objects_to_grid(objs);
    INFO(serialize_tsr(objs));
    CHECK(rec.diagnostics.empty());
    CHECK(grid_validate(rec.grid).empty());
    CHECK(structurally_equal(rec.grid, g));
    // And the object list is a fixed point.
    CHECK(grid_to_objects(rec.grid, {0.05, 0.05, 0.95, 0.95}) == objs);
  }
}

TEST_CASE("row and column counts follow surviving objects") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const TableGrid g = random_grid(rng, {6, 6});
    const auto objs = grid_to_objects(g, {0, 0, 1, 1});
    const auto rec = objects_to_grid(objs);
    CHECK(rec.grid.n_rows == count(objs, ObjectClass::TableRow));
    CHECK(rec.grid.n_cols == count(objs, ObjectClass::TableColumn));
  }
}

TEST_CASE("crop and page coordinates") {
  const BBox region{0.2, 0.2, 0.7, 0.7};
  const std::vector<TableObject> objs{{ObjectClass::TableRow, {0, 0, 1, 1}},
                                      {ObjectClass::TableColumn, {0.5, 0.5, 1, 1}}};
  const auto page = crop_to_page(objs, region);
  CHECK(near(page[0].bbox, {0.2, 0.2, 0.7, 0.7}, 1e-15));
  CHECK(near(page[1].bbox, {0.45, 0.45, 0.7, 0.7}, 1e-15));
  const auto back = page_to_crop(page, region);
  CHECK(back.diagnostics.empty());
  CHECK(near(back.objects[0].bbox, objs[0].bbox, 1e-12));
  CHECK(near(back.objects[1].bbox, objs[1].bbox, 1e-12));
}

TEST_CASE("objects outside the region are flagged and clamped") {
  const BBox region{0.2, 0.2, 0.7, 0.7};
  const std::vector<TableObject> objs{{ObjectClass::TableRow, {0.1, 0.3, 0.6, 0.4}},
                                      {ObjectClass::TableRow, {0.8, 0.8, 0.9, 0.9}},
                                      {ObjectClass::TableRow, {0.195, 0.3, 0.6, 0.4}}};
  const auto out = page_to_crop(objs, region);
  REQUIRE(out.objects.size() == 2);
  CHECK(out.objects[0].bbox.x1 == 0.0);
  std::size_t flagged = 0;
  for (const Diagnostic& d : out.diagnostics) flagged += d.kind == DiagnosticKind::OutOfRegion;
  CHECK(flagged == 2);
  CHECK_THROWS_AS(page_to_crop(objs, BBox{0.2, 0.2, 0.2, 0.7}), Error);
}

TEST_CASE("affine maps invert each other") {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const double rx = rng.uniform(0.0, 0.6), ry = rng.uniform(0.0, 0.6);
    const BBox region{rx, ry, rng.uniform(rx + 0.05, 1.0), rng.uniform(ry + 0.05, 1.0)};
    const double x1 = rng.uniform(0.0, 0.9), y1 = rng.uniform(0.0, 0.9);
    const BBox box{x1, y1, rng.uniform(x1 + 0.01, 1.0), rng.uniform(y1 + 0.01, 1.0)};
    CHECK(near(box_page_to_crop_unclamped(box_crop_to_page(box, region), region), box, 1e-9));
  }
}

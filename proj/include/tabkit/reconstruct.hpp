#pragma once

#include <span>
#include <vector>

#include "tabkit/bbox.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/objects.hpp"

namespace tabkit {

struct GridReconstruction {
  TableGrid grid;
  Diagnostics diagnostics;
};

// Builds the logical grid from overlapping structure rectangles:
//   1. rows/columns overlapping a larger same-class box with IoU > 0.5 are dropped;
//   2. rows are ordered by y-center, columns by x-center;
//   3. each row x column intersection is a base cell;
//   4. projected row headers merge their row into one full-width cell, then
//      spanning cells absorb the base cells they contain;
//   5. base cells inside a column header object are flagged as header.
// A base cell belongs to an object when its center lies inside the object;
// a center exactly on the object edge falls back to >= 50% area overlap.
//
// Throws Error(NoRows) / Error(NoColumns). Non-rectangular absorption is
// repaired to the enclosing rectangle with a NonContiguousSpan diagnostic.
GridReconstruction objects_to_grid(std::span<const TableObject> objects);

// Inverse direction. Cell boxes drive the geometry when every cell has one;
// otherwise rows and columns are a uniform partition of table_bbox.
// Output is canonicalized. Throws Error(InvalidGrid).
std::vector<TableObject> grid_to_objects(const TableGrid& grid, const BBox& table_bbox);

// Maps crop-normalized objects into page coordinates of the table region:
// x' = bx1 + x * (bx2 - bx1), same for y.
std::vector<TableObject> crop_to_page(std::span<const TableObject> objects,
                                      const BBox& table_bbox_in_page);

struct RemapResult {
  std::vector<TableObject> objects;
  Diagnostics diagnostics;
};

// Exact inverse of crop_to_page. Objects reaching more than
// kRegionTolerance (page units) outside the region are flagged OutOfRegion
// and then clamped; objects left with no area are dropped.
// Throws Error(ZeroExtent) when the region has no width or height.
RemapResult page_to_crop(std::span<const TableObject> objects, const BBox& table_bbox_in_page);

inline constexpr double kRegionTolerance = 0.01;

// Same maps for bare boxes.
BBox box_crop_to_page(const BBox& box, const BBox& region);
BBox box_page_to_crop_unclamped(const BBox& box, const BBox& region);

}  // namespace tabkit

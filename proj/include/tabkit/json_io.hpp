#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "tabkit/bbox.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/objects.hpp"

namespace tabkit {

using Json = nlohmann::json;

// Boxes are [x1, y1, x2, y2] arrays; coordinates are written rounded to
// three decimals, matching the text wire format.
Json bbox_to_json(const BBox& box);
// Validates (clamp, then reject degenerate). Throws Error(MalformedInput)
// or Error(DegenerateBox).
BBox bbox_from_json(const Json& value);

// [{"class": "table row", "bbox": [...]}, ...]
Json objects_to_json(std::span<const TableObject> objects);
std::vector<TableObject> objects_from_json(const Json& value);

// {"n_rows", "n_cols", "cells": [{"row", "col", "rowspan", "colspan",
//   "column_header", "projected_row_header", "text"?, "bbox"?}]}
Json grid_to_json(const TableGrid& grid);
TableGrid grid_from_json(const Json& value);

double round3(double v);

}  // namespace tabkit

#include "tabkit/json_io.hpp"

#include <cmath>

namespace tabkit {

namespace {

// Bounds for untrusted grid documents; far beyond any real table.
constexpr long long kMaxExtent = 100000;
constexpr std::size_t kMaxPositions = 1000000;

}  // namespace

double round3(double v) { return std::round(v * 1000.0) / 1000.0 + 0.0; }

Json bbox_to_json(const BBox& box) {
  return Json::array({round3(box.x1), round3(box.y1), round3(box.x2), round3(box.y2)});
}

BBox bbox_from_json(const Json& value) {
  if (!value.is_array() || value.size() != 4) {
    throw Error(ErrorCode::MalformedInput, "box must be an array of four numbers");
  }
  std::array<double, 4> raw{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!value[i].is_number()) throw Error(ErrorCode::MalformedInput, "box coordinate is not a number");
    raw[i] = value[i].get<double>();
  }
  auto result = validate_bbox(raw);
  if (auto* diag = std::get_if<Diagnostic>(&result)) throw Error(ErrorCode::DegenerateBox, diag->message);
  return std::get<BBox>(result);
}

Json objects_to_json(std::span<const TableObject> objects) {
  Json out = Json::array();
  for (const TableObject& obj : objects) {
    out.push_back({{"class", std::string(surface_string(obj.cls))}, {"bbox", bbox_to_json(obj.bbox)}});
  }
  return out;
}

std::vector<TableObject> objects_from_json(const Json& value) {
  if (!value.is_array()) throw Error(ErrorCode::MalformedInput, "objects must be an array");
  std::vector<TableObject> out;
  for (const Json& item : value) {
    if (!item.is_object() || !item.contains("class") || !item["class"].is_string() ||
        !item.contains("bbox")) {
      throw Error(ErrorCode::MalformedInput, "object needs \"class\" and \"bbox\"");
    }
    const auto cls = object_class_from_string(item["class"].get<std::string>());
    if (!cls) throw Error(ErrorCode::MalformedInput, "unknown class " + item["class"].dump());
    out.push_back({*cls, bbox_from_json(item["bbox"])});
  }
  return out;
}

Json grid_to_json(const TableGrid& grid) {
  Json cells = Json::array();
  for (const GridCell& cell : grid.cells) {
    Json c = {{"row", cell.row},
              {"col", cell.col},
              {"rowspan", cell.rowspan},
              {"colspan", cell.colspan},
              {"column_header", cell.is_column_header},
              {"projected_row_header", cell.is_projected_row_header}};
    if (cell.text) c["text"] = *cell.text;
    if (cell.bbox) c["bbox"] = bbox_to_json(*cell.bbox);
    cells.push_back(std::move(c));
  }
  return {{"n_rows", grid.n_rows}, {"n_cols", grid.n_cols}, {"cells", std::move(cells)}};
}

TableGrid grid_from_json(const Json& value) {
  auto count = [](const Json& obj, const char* key, std::size_t fallback, bool required) {
    if (!obj.contains(key)) {
      if (required) throw Error(ErrorCode::MalformedInput, std::string("missing \"") + key + "\"");
      return fallback;
    }
    const Json& v = obj[key];
    if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() > kMaxExtent) {
      throw Error(ErrorCode::MalformedInput, std::string("\"") + key + "\" must be an integer in [0, " +
                                                 std::to_string(kMaxExtent) + "]");
    }
    return v.get<std::size_t>();
  };
  if (!value.is_object()) throw Error(ErrorCode::MalformedInput, "grid must be an object");
  TableGrid grid;
  grid.n_rows = count(value, "n_rows", 0, true);
  grid.n_cols = count(value, "n_cols", 0, true);
  if (grid.n_rows * grid.n_cols > kMaxPositions) {
    throw Error(ErrorCode::MalformedInput, "grid has more than " + std::to_string(kMaxPositions) + " positions");
  }
  if (!value.contains("cells") || !value["cells"].is_array()) {
    throw Error(ErrorCode::MalformedInput, "grid needs a \"cells\" array");
  }
  for (const Json& c : value["cells"]) {
    if (!c.is_object()) throw Error(ErrorCode::MalformedInput, "cell must be an object");
    GridCell cell;
    cell.row = count(c, "row", 0, true);
    cell.col = count(c, "col", 0, true);
    cell.rowspan = count(c, "rowspan", 1, false);
    cell.colspan = count(c, "colspan", 1, false);
    cell.is_column_header = c.value("column_header", false);
    cell.is_projected_row_header = c.value("projected_row_header", false);
    if (c.contains("text") && c["text"].is_string()) cell.text = c["text"].get<std::string>();
    if (c.contains("bbox") && !c["bbox"].is_null()) cell.bbox = bbox_from_json(c["bbox"]);
    grid.cells.push_back(std::move(cell));
  }
  return grid;
}

}  // namespace tabkit

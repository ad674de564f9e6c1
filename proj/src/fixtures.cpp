#include "tabkit/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "tabkit/json_io.hpp"
#include "tabkit/reconstruct.hpp"
#include "tabkit/textio.hpp"

namespace tabkit {

namespace {

constexpr const char* kWords[] = {"total", "net",  "2019", "12.5", "revenue", "a",   "n/a",
                                  "cost",  "0.31", "%",    "Q4",   "income",  "tax", "-"};

std::string random_text(Rng& rng) {
  const std::size_t n = rng.between(0, 3);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) out.push_back(' ');
    out += kWords[rng.between(0, std::size(kWords) - 1)];
  }
  return out;
}

std::string sample_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fx-%05zu", index);
  return buf;
}

}  // namespace

TableGrid random_grid(Rng& rng, const GridGenOptions& options) {
  TableGrid grid;
  grid.n_rows = rng.between(1, std::max<std::size_t>(1, options.max_rows));
  grid.n_cols = rng.between(1, std::max<std::size_t>(1, options.max_cols));
  const std::size_t R = grid.n_rows;
  const std::size_t C = grid.n_cols;

  std::size_t header = 0;
  if (R >= 2 && rng.chance(options.header_probability)) header = rng.between(1, std::min<std::size_t>(2, R - 1));

  std::vector<char> used(R * C, 0);
  auto free_at = [&](std::size_t r, std::size_t c) { return !used[r * C + c]; };

  for (std::size_t r = 0; r < R; ++r) {
    const std::size_t section_end = r < header ? header : R;
    for (std::size_t c = 0; c < C; ++c) {
      if (!free_at(r, c)) continue;
      GridCell cell;
      cell.row = r;
      cell.col = c;

      bool row_free = c == 0;
      for (std::size_t cc = 0; row_free && cc < C; ++cc) row_free = free_at(r, cc);
      if (row_free && r >= header && C >= 2 && rng.chance(options.projected_row_probability)) {
        cell.colspan = C;
        cell.is_projected_row_header = true;
      } else if (rng.chance(options.span_probability)) {
        std::size_t max_cs = 0;
        while (c + max_cs < C && free_at(r, c + max_cs)) ++max_cs;
        const std::size_t cs = rng.between(1, max_cs);
        std::size_t max_rs = 1;
        while (r + max_rs < section_end) {
          bool ok = true;
          for (std::size_t cc = c; ok && cc < c + cs; ++cc) ok = free_at(r + max_rs, cc);
          if (!ok) break;
          ++max_rs;
        }
        cell.colspan = cs;
        cell.rowspan = rng.between(1, max_rs);
      }
      // A lone full-width body row is a projected row header by definition.
      if (r >= header && C >= 2 && c == 0 && cell.colspan == C && cell.rowspan == 1) {
        cell.is_projected_row_header = true;
      }
      cell.is_column_header = r < header;
      if (options.with_text) cell.text = random_text(rng);
      for (std::size_t rr = r; rr < cell.row_end(); ++rr)
        for (std::size_t cc = c; cc < cell.col_end(); ++cc) used[rr * C + cc] = 1;
      grid.cells.push_back(std::move(cell));
    }
  }

  if (options.with_boxes) {
    const BBox& t = options.table_bbox;
    for (GridCell& cell : grid.cells) {
      const double x1 = t.x1 + t.width() * static_cast<double>(cell.col) / C;
      const double x2 = cell.col_end() == C ? t.x2 : t.x1 + t.width() * static_cast<double>(cell.col_end()) / C;
      const double y1 = t.y1 + t.height() * static_cast<double>(cell.row) / R;
      const double y2 = cell.row_end() == R ? t.y2 : t.y1 + t.height() * static_cast<double>(cell.row_end()) / R;
      cell.bbox = BBox{x1, y1, x2, y2};
    }
  }
  return grid;
}

std::string_view to_string(Corruption corruption) {
  switch (corruption) {
    case Corruption::DropRow: return "drop-row";
    case Corruption::SplitColumn: return "split-column";
    case Corruption::ShiftBoxes: return "shift-boxes";
  }
  return "";
}

Corruption corruption_from_string(std::string_view text) {
  for (Corruption c : {Corruption::DropRow, Corruption::SplitColumn, Corruption::ShiftBoxes}) {
    if (text == to_string(c)) return c;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown corruption '" + std::string(text) + "'");
}

std::vector<TableObject> corrupt(std::vector<TableObject> objects, Corruption corruption, Rng& rng) {
  auto indices_of = [&](ObjectClass cls) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].cls == cls) out.push_back(i);
    return out;
  };
  switch (corruption) {
    case Corruption::DropRow: {
      const auto rows = indices_of(ObjectClass::TableRow);
      if (rows.empty()) break;
      objects.erase(objects.begin() + static_cast<std::ptrdiff_t>(rows[rng.between(0, rows.size() - 1)]));
      break;
    }
    case Corruption::SplitColumn: {
      const auto cols = indices_of(ObjectClass::TableColumn);
      if (cols.empty()) break;
      const std::size_t pick = cols[rng.between(0, cols.size() - 1)];
      const BBox col = objects[pick].bbox;
      const double mid = round3(col.center_x());
      if (!(col.x1 < mid && mid < col.x2)) break;
      objects[pick].bbox = BBox{col.x1, col.y1, mid, col.y2};
      objects.push_back({ObjectClass::TableColumn, BBox{mid, col.y1, col.x2, col.y2}});
      break;
    }
    case Corruption::ShiftBoxes: {
      const double dx = rng.uniform(0.01, 0.03) * (rng.chance(0.5) ? 1.0 : -1.0);
      const double dy = rng.uniform(0.01, 0.03) * (rng.chance(0.5) ? 1.0 : -1.0);
      std::vector<TableObject> shifted;
      for (const TableObject& obj : objects) {
        const BBox& b = obj.bbox;
        auto moved = validate_bbox({b.x1 + dx, b.y1 + dy, b.x2 + dx, b.y2 + dy});
        if (auto* box = std::get_if<BBox>(&moved)) shifted.push_back({obj.cls, *box});
      }
      objects = std::move(shifted);
      break;
    }
  }
  return canonicalize(std::move(objects));
}

FixtureSet gen_fixtures(const FixtureOptions& options) {
  if (options.max_rows < 1 || options.max_cols < 1) {
    throw Error(ErrorCode::InvalidArgument, "fixture bounds must be at least 1");
  }
  if (!(options.corruption_rate >= 0.0 && options.corruption_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "corruption rate must lie in [0, 1]");
  }
  if (options.task != "tsr" && options.task != "tq") {
    throw Error(ErrorCode::InvalidArgument, "fixtures support tasks tsr and tq");
  }
  const bool page = options.task == "tq";

  FixtureSet set;
  for (std::size_t i = 0; i < options.count; ++i) {
    // Independent stream per sample so that count and rate do not perturb
    // other samples.
    Rng rng(options.seed * 0x9E3779B97F4A7C15ull + i + 1);
    GridGenOptions gen;
    gen.max_rows = options.max_rows;
    gen.max_cols = options.max_cols;
    gen.with_text = false;
    gen.with_boxes = false;
    const TableGrid grid = random_grid(rng, gen);

    const double u = rng.uniform();
    const Corruption kind =
        options.corruptions.empty()
            ? Corruption::ShiftBoxes
            : options.corruptions[rng.between(0, options.corruptions.size() - 1)];
    const std::uint64_t corruption_seed = rng.next();

    BBox region{0.0, 0.0, 1.0, 1.0};
    if (page) {
      const double x1 = round3(rng.uniform(0.05, 0.3));
      const double y1 = round3(rng.uniform(0.05, 0.5));
      region = BBox{x1, y1, round3(rng.uniform(x1 + 0.4, 0.95)), round3(rng.uniform(y1 + 0.2, 0.95))};
    }

    // Quantize through the wire format so gt and pred share exact geometry.
    std::vector<TableObject> objects =
        parse_tsr_response(serialize_tsr(grid_to_objects(grid, BBox{0.0, 0.0, 1.0, 1.0}))).items;
    if (page) objects = parse_tsr_response(serialize_tsr(crop_to_page(objects, region))).items;

    std::vector<TableObject> predicted = objects;
    if (!options.corruptions.empty() && u < options.corruption_rate) {
      Rng corruption_rng(corruption_seed);
      predicted = corrupt(std::move(predicted), kind, corruption_rng);
    }

    const std::string id = sample_id(i);
    Json gt = {{"id", id}, {"task", options.task}, {"objects", objects_to_json(objects)}};
    Json pred = {{"id", id}, {"task", options.task}, {"response", serialize_tsr(predicted)}};
    if (page) {
      gt["table_bbox"] = bbox_to_json(region);
      pred["table_bbox"] = bbox_to_json(region);
    }
    set.gt_jsonl += gt.dump() + "\n";
    set.pred_jsonl += pred.dump() + "\n";
  }
  return set;
}

void write_fixtures(const FixtureSet& set, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  auto write = [&](const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw Error(ErrorCode::UnreadableFile, "cannot write " + path.string());
  };
  write(dir / "gt.jsonl", set.gt_jsonl);
  write(dir / "pred.jsonl", set.pred_jsonl);
}

}  // namespace tabkit

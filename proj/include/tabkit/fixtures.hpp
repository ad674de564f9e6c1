#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tabkit/bbox.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/objects.hpp"

namespace tabkit {

// Seeded generator with platform-independent draws (std distributions are
// implementation-defined, mt19937_64 output is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct GridGenOptions {
  std::size_t max_rows = 6;
  std::size_t max_cols = 6;
  double span_probability = 0.2;
  double header_probability = 0.5;
  double projected_row_probability = 0.1;
  bool with_text = true;
  bool with_boxes = true;
  BBox table_bbox{0.05, 0.05, 0.95, 0.95};
};

// Random valid grid: a top header prefix (never the whole table), spans that
// stay inside their section, projected row headers as full-width single
// body rows, and cell boxes from a uniform partition of table_bbox.
TableGrid random_grid(Rng& rng, const GridGenOptions& options = {});

enum class Corruption { DropRow, SplitColumn, ShiftBoxes };

std::string_view to_string(Corruption corruption);
Corruption corruption_from_string(std::string_view text);

// Applies one corruption to an object list. Row dropping and column
// splitting always change structure when rows/columns exist.
std::vector<TableObject> corrupt(std::vector<TableObject> objects, Corruption corruption, Rng& rng);

struct FixtureOptions {
  std::uint64_t seed = 0;
  std::size_t count = 50;
  std::size_t max_rows = 8;
  std::size_t max_cols = 8;
  double corruption_rate = 0.0;
  std::vector<Corruption> corruptions{Corruption::DropRow, Corruption::SplitColumn,
                                      Corruption::ShiftBoxes};
  // "tsr" (crop coordinates) or "tq" (page coordinates plus table_bbox).
  std::string task = "tsr";
};

struct FixtureSet {
  std::string gt_jsonl;
  std::string pred_jsonl;
};

// Sample i is corrupted iff its own draw falls below corruption_rate, and
// the corruption it receives does not depend on the rate. Raising the rate
// therefore only adds corrupted samples.
FixtureSet gen_fixtures(const FixtureOptions& options);

// Writes gt.jsonl and pred.jsonl into dir (created if needed).
void write_fixtures(const FixtureSet& set, const std::filesystem::path& dir);

}  // namespace tabkit

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tabkit/json_io.hpp"
#include "tabkit/tree.hpp"

namespace tabkit {

enum class Task { TD, TSR, TQ, TQA };

std::string_view to_string(Task task);
Task task_from_string(std::string_view text);

// One JSONL line: {"id": ..., "task": ..., <payload fields>}.
//   td:      "boxes": [[x1,y1,x2,y2], ...] or "response": "<detection text>"
//   tsr/tq:  "objects": [{"class", "bbox"}, ...], "response": "<object lines>",
//            "html": "<table>...</table>" or "grid": {...}; tq may add "table_bbox"
//   tqa:     "answer" (ground truth), "response" (prediction), optional "question"
struct SampleRecord {
  std::string id;
  std::optional<Task> task;  // absent means "whatever the run evaluates"
  Json payload;
};

// Parses JSONL text. Blank lines are skipped. Throws Error(MalformedInput)
// for non-JSON lines or lines without an id, Error(DuplicateId) on repeats.
std::vector<SampleRecord> parse_jsonl(std::string_view text, const std::string& source = "<memory>");
std::vector<SampleRecord> read_jsonl(const std::filesystem::path& path);

enum class Aggregation { Macro, Micro };

struct EvalOptions {
  Task task = Task::TSR;
  double iou_threshold = 0.75;
  // Empty selects every metric of the task.
  std::vector<std::string> metrics;
  Aggregation aggregation = Aggregation::Macro;
  unsigned workers = 1;
  TreeOptions tree;
};

struct MetricRecord {
  std::string sample_id;
  std::string metric;
  double value = 0.0;
  std::map<std::string, double> sub;  // e.g. precision/recall counts, edit distance
};

struct SampleResult {
  std::string id;
  std::vector<MetricRecord> metrics;
  bool failed = false;
  std::string error;
  std::size_t diagnostics = 0;
};

struct AggregateRow {
  std::string metric;
  double mean = 0.0;                // macro: mean of per-sample values
  std::optional<double> micro;      // pooled, where the metric defines it
  std::size_t count = 0;
};

struct EvalReport {
  Task task = Task::TSR;
  double iou_threshold = 0.75;
  Aggregation aggregation = Aggregation::Macro;
  std::vector<std::string> metrics;
  std::string gt_digest;
  std::string pred_digest;
  std::vector<SampleResult> samples;  // sorted by id
  std::vector<AggregateRow> aggregates;
  std::size_t failure_count = 0;

  // Deterministic region: everything above, no timestamps or worker counts.
  Json to_json() const;
  std::string digest() const;
  // Aligned plain-text summary, one row per metric.
  std::string to_table() const;
};

// Joins predictions to ground truth on id and scores every sample.
//   td:     per-sample precision/recall/f1, macro and pooled (micro) aggregates
//   tsr/tq: both sides to grids, then steds and the three GriTS kinds
//   tqa:    containment accuracy
// Throws Error(MissingGroundTruth) for a prediction without ground truth.
// Per-sample failures (unparseable payload, missing prediction) score 0.
EvalReport eval_records(const std::vector<SampleRecord>& gt, const std::vector<SampleRecord>& pred,
                        const EvalOptions& options);
EvalReport eval_run(const std::filesystem::path& gt_path, const std::filesystem::path& pred_path,
                    const EvalOptions& options);

// Worker count from TABKIT_WORKERS, falling back to the hardware count.
unsigned workers_from_env();

std::string fnv1a_hex(std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

// ---------------------------------------------------------------- convert

enum class Format { Html, ObjectsText, GridJson };
enum class Remap { None, ToPage, ToCrop };

std::string_view to_string(Format format);
Format format_from_string(std::string_view text);

struct ConvertOptions {
  std::optional<BBox> table_bbox;
  Remap remap = Remap::None;
};

struct ConvertResult {
  std::string output;
  std::vector<std::string> warnings;
};

// html | objects-text | grid-json in both directions. Producing objects from
// a grid without cell boxes needs table_bbox; remapping needs table_bbox and
// an objects-text target. Throws Error(UnsupportedConversion) or
// Error(MalformedInput).
ConvertResult convert(std::string_view input, Format from, Format to, const ConvertOptions& options = {});

}  // namespace tabkit

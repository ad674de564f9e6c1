#include "tabkit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "tabkit/metrics.hpp"
#include "tabkit/reconstruct.hpp"
#include "tabkit/textio.hpp"

namespace tabkit {

namespace {

const std::vector<std::string> kStructureMetrics = {"steds", "grits-top", "grits-cont", "grits-loc"};
const std::vector<std::string> kDetectionMetrics = {"precision", "recall", "f1"};
const std::vector<std::string> kQaMetrics = {"accuracy"};

const std::vector<std::string>& default_metrics(Task task) {
  switch (task) {
    case Task::TD: return kDetectionMetrics;
    case Task::TSR:
    case Task::TQ: return kStructureMetrics;
    case Task::TQA: return kQaMetrics;
  }
  return kStructureMetrics;
}

std::vector<std::string> resolve_metrics(const EvalOptions& options) {
  const auto& allowed = default_metrics(options.task);
  if (options.metrics.empty()) return allowed;
  std::vector<std::string> out;
  for (const std::string& name : options.metrics) {
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      throw Error(ErrorCode::InvalidArgument,
                  "metric '" + name + "' is not available for task " + std::string(to_string(options.task)));
    }
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

std::string require_string(const Json& payload, const char* key) {
  if (!payload.contains(key) || !payload[key].is_string()) {
    throw Error(ErrorCode::MalformedInput, std::string("missing string field \"") + key + "\"");
  }
  return payload[key].get<std::string>();
}

std::vector<BBox> detection_boxes(const Json& payload, std::size_t& diagnostics) {
  if (payload.contains("boxes")) {
    const Json& boxes = payload["boxes"];
    if (!boxes.is_array()) throw Error(ErrorCode::MalformedInput, "\"boxes\" must be an array");
    std::vector<BBox> out;
    for (const Json& b : boxes) out.push_back(bbox_from_json(b));
    return out;
  }
  auto parsed = parse_td_response(require_string(payload, "response"));
  diagnostics += parsed.diagnostics.size();
  return std::move(parsed.items);
}

TableGrid structure_grid(const Json& payload, std::size_t& diagnostics) {
  std::vector<TableObject> objects;
  if (payload.contains("objects")) {
    objects = objects_from_json(payload["objects"]);
  } else if (payload.contains("response")) {
    auto parsed = parse_tsr_response(require_string(payload, "response"));
    diagnostics += parsed.diagnostics.size();
    objects = std::move(parsed.items);
  } else if (payload.contains("grid")) {
    TableGrid grid = grid_from_json(payload["grid"]);
    require_valid_grid(grid);
    return grid;
  } else if (payload.contains("html")) {
    HtmlParse parsed = parse_html_table(require_string(payload, "html"));
    diagnostics += parsed.diagnostics.size();
    return std::move(parsed.grid);
  } else {
    throw Error(ErrorCode::MalformedInput, "record has none of objects/response/grid/html");
  }
  // Crop-normalized objects of a table-querying record move onto the page.
  if (payload.value("frame", std::string("page")) == "crop" && payload.contains("table_bbox")) {
    objects = crop_to_page(objects, bbox_from_json(payload["table_bbox"]));
  }
  GridReconstruction rec = objects_to_grid(objects);
  diagnostics += rec.diagnostics.size();
  return std::move(rec.grid);
}

bool grid_has_boxes(const TableGrid& grid) {
  return std::any_of(grid.cells.begin(), grid.cells.end(), [](const GridCell& c) { return c.bbox.has_value(); });
}

GritsKind grits_kind(const std::string& metric) {
  if (metric == "grits-top") return GritsKind::Top;
  if (metric == "grits-cont") return GritsKind::Cont;
  return GritsKind::Loc;
}

MetricRecord record(const std::string& id, const std::string& metric, double value,
                    std::map<std::string, double> sub = {}) {
  return {id, metric, value, std::move(sub)};
}

SampleResult evaluate_detection(const std::string& id, const SampleRecord& gt, const SampleRecord* pred,
                                const EvalOptions& options) {
  SampleResult out;
  out.id = id;
  const std::vector<BBox> gt_boxes = detection_boxes(gt.payload, out.diagnostics);
  DetectionResult det;
  try {
    if (!pred) throw Error(ErrorCode::MalformedInput, "no prediction for sample");
    const std::vector<BBox> pred_boxes = detection_boxes(pred->payload, out.diagnostics);
    det = detection_prf(gt_boxes, pred_boxes, options.iou_threshold);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
    det = DetectionResult{0.0, 0.0, 0.0, 0, gt_boxes.size(), 0};
  }
  const std::map<std::string, double> counts = {{"tp", static_cast<double>(det.true_positives)},
                                                {"n_gt", static_cast<double>(det.n_gt)},
                                                {"n_pred", static_cast<double>(det.n_pred)}};
  out.metrics.push_back(record(id, "precision", det.precision, counts));
  out.metrics.push_back(record(id, "recall", det.recall, counts));
  out.metrics.push_back(record(id, "f1", det.f1, counts));
  return out;
}

SampleResult evaluate_structure(const std::string& id, const SampleRecord& gt, const SampleRecord* pred,
                                const std::vector<std::string>& metrics, const EvalOptions& options) {
  SampleResult out;
  out.id = id;
  const TableGrid gt_grid = structure_grid(gt.payload, out.diagnostics);
  std::optional<TableGrid> pred_grid;
  try {
    if (!pred) throw Error(ErrorCode::MalformedInput, "no prediction for sample");
    pred_grid = structure_grid(pred->payload, out.diagnostics);
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }

  for (const std::string& metric : metrics) {
    if (metric == "steds") {
      if (pred_grid) {
        const StedsResult r = steds_detail(gt_grid, *pred_grid, options.tree);
        out.metrics.push_back(record(id, metric, r.score,
                                     {{"distance", static_cast<double>(r.distance)},
                                      {"max_nodes", static_cast<double>(r.max_nodes)}}));
      } else {
        const double nodes = static_cast<double>(build_table_tree(gt_grid, options.tree).node_count());
        out.metrics.push_back(record(id, metric, 0.0, {{"distance", nodes}, {"max_nodes", nodes}}));
      }
      continue;
    }
    const GritsKind kind = grits_kind(metric);
    if (kind == GritsKind::Loc &&
        (!grid_has_boxes(gt_grid) || (pred_grid && !grid_has_boxes(*pred_grid)))) {
      continue;  // no locations to compare
    }
    if (pred_grid) {
      const GritsResult r = grits_detail(gt_grid, *pred_grid, kind);
      out.metrics.push_back(record(id, metric, r.score,
                                   {{"similarity_sum", r.similarity_sum},
                                    {"size_gt", static_cast<double>(r.size_gt)},
                                    {"size_pred", static_cast<double>(r.size_pred)}}));
    } else {
      out.metrics.push_back(record(id, metric, 0.0,
                                   {{"similarity_sum", 0.0},
                                    {"size_gt", static_cast<double>(gt_grid.size())},
                                    {"size_pred", 0.0}}));
    }
  }
  return out;
}

SampleResult evaluate_qa(const std::string& id, const SampleRecord& gt, const SampleRecord* pred) {
  SampleResult out;
  out.id = id;
  const std::string answer = require_string(gt.payload, "answer");
  double value = 0.0;
  try {
    if (!pred) throw Error(ErrorCode::MalformedInput, "no prediction for sample");
    value = tqa_correct(answer, require_string(pred->payload, "response")) ? 1.0 : 0.0;
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.metrics.push_back(record(id, "accuracy", value));
  return out;
}

SampleResult evaluate_sample(const std::string& id, const SampleRecord& gt, const SampleRecord* pred,
                             const std::vector<std::string>& metrics, const EvalOptions& options) {
  try {
    switch (options.task) {
      case Task::TD: return evaluate_detection(id, gt, pred, options);
      case Task::TSR:
      case Task::TQ: return evaluate_structure(id, gt, pred, metrics, options);
      case Task::TQA: return evaluate_qa(id, gt, pred);
    }
  } catch (const std::exception& e) {
    // Ground truth itself is unusable: every metric scores 0.
    SampleResult out;
    out.id = id;
    out.failed = true;
    out.error = std::string("ground truth: ") + e.what();
    for (const std::string& metric : metrics) out.metrics.push_back(record(id, metric, 0.0));
    return out;
  }
  return {};
}

double sub_sum(const std::vector<const MetricRecord*>& records, const char* key) {
  double total = 0.0;
  for (const MetricRecord* r : records) {
    auto it = r->sub.find(key);
    if (it != r->sub.end()) total += it->second;
  }
  return total;
}

std::optional<double> micro_value(const std::string& metric, const std::vector<const MetricRecord*>& records) {
  if (records.empty()) return std::nullopt;
  if (metric == "steds") {
    const double nodes = sub_sum(records, "max_nodes");
    if (nodes <= 0.0) return std::nullopt;
    return 1.0 - sub_sum(records, "distance") / nodes;
  }
  if (metric.rfind("grits-", 0) == 0) {
    const double size = sub_sum(records, "size_gt") + sub_sum(records, "size_pred");
    if (size <= 0.0) return 1.0;
    return 2.0 * sub_sum(records, "similarity_sum") / size;
  }
  if (metric == "precision" || metric == "recall" || metric == "f1") {
    const auto det = detection_from_counts(static_cast<std::size_t>(sub_sum(records, "tp")),
                                           static_cast<std::size_t>(sub_sum(records, "n_gt")),
                                           static_cast<std::size_t>(sub_sum(records, "n_pred")));
    return metric == "precision" ? det.precision : metric == "recall" ? det.recall : det.f1;
  }
  return std::nullopt;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::TD: return "td";
    case Task::TSR: return "tsr";
    case Task::TQ: return "tq";
    case Task::TQA: return "tqa";
  }
  return "";
}

Task task_from_string(std::string_view text) {
  for (Task t : {Task::TD, Task::TSR, Task::TQ, Task::TQA}) {
    if (text == to_string(t)) return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown task '" + std::string(text) + "'");
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    hash ^= ch;
    hash *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnreadableFile, "cannot open " + path.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::UnreadableFile, "cannot read " + path.string());
  return body;
}

std::vector<SampleRecord> parse_jsonl(std::string_view text, const std::string& source) {
  std::vector<SampleRecord> out;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const std::string where = source + ":" + std::to_string(line_no);
    Json value = Json::parse(line, nullptr, false);
    if (value.is_discarded() || !value.is_object()) {
      throw Error(ErrorCode::MalformedInput, where + ": not a JSON object");
    }
    SampleRecord rec;
    if (!value.contains("id") || !(value["id"].is_string() || value["id"].is_number_integer())) {
      throw Error(ErrorCode::MalformedInput, where + ": missing \"id\"");
    }
    rec.id = value["id"].is_string() ? value["id"].get<std::string>() : value["id"].dump();
    if (value.contains("task")) {
      if (!value["task"].is_string()) throw Error(ErrorCode::MalformedInput, where + ": \"task\" must be a string");
      try {
        rec.task = task_from_string(value["task"].get<std::string>());
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedInput, where + ": " + e.what());
      }
    }
    if (!seen.insert(rec.id).second) throw Error(ErrorCode::DuplicateId, where + ": duplicate id " + rec.id);
    rec.payload = std::move(value);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<SampleRecord> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_file(path), path.string());
}

unsigned workers_from_env() {
  if (const char* env = std::getenv("TABKIT_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EvalReport eval_records(const std::vector<SampleRecord>& gt, const std::vector<SampleRecord>& pred,
                        const EvalOptions& options) {
  if (!(options.iou_threshold > 0.0 && options.iou_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IoU threshold must lie in (0, 1]");
  }
  EvalReport report;
  report.task = options.task;
  report.iou_threshold = options.iou_threshold;
  report.aggregation = options.aggregation;
  report.metrics = resolve_metrics(options);

  std::unordered_map<std::string, const SampleRecord*> gt_by_id;
  for (const SampleRecord& rec : gt) {
    if (rec.task && *rec.task != options.task) {
      throw Error(ErrorCode::MalformedInput, "ground truth " + rec.id + " is tagged " +
                                                 std::string(to_string(*rec.task)));
    }
    if (!gt_by_id.emplace(rec.id, &rec).second) throw Error(ErrorCode::DuplicateId, "ground truth id " + rec.id);
  }
  std::unordered_map<std::string, const SampleRecord*> pred_by_id;
  for (const SampleRecord& rec : pred) {
    if (!gt_by_id.count(rec.id)) throw Error(ErrorCode::MissingGroundTruth, rec.id);
    if (!pred_by_id.emplace(rec.id, &rec).second) throw Error(ErrorCode::DuplicateId, "prediction id " + rec.id);
  }

  std::vector<const SampleRecord*> order;
  for (const SampleRecord& rec : gt) order.push_back(&rec);
  std::sort(order.begin(), order.end(), [](const SampleRecord* a, const SampleRecord* b) { return a->id < b->id; });

  report.samples.resize(order.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1)) {
      const SampleRecord& g = *order[i];
      auto it = pred_by_id.find(g.id);
      const SampleRecord* p = it == pred_by_id.end() ? nullptr : it->second;
      report.samples[i] = evaluate_sample(g.id, g, p, report.metrics, options);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(order.size())));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  // Reduction runs in id order, so the result is independent of scheduling
  // and of input line order.
  for (const SampleResult& s : report.samples) report.failure_count += s.failed ? 1 : 0;
  for (const std::string& metric : report.metrics) {
    std::vector<const MetricRecord*> records;
    for (const SampleResult& s : report.samples)
      for (const MetricRecord& m : s.metrics)
        if (m.metric == metric) records.push_back(&m);
    AggregateRow row;
    row.metric = metric;
    row.count = records.size();
    double total = 0.0;
    for (const MetricRecord* r : records) total += r->value;
    row.mean = records.empty() ? 0.0 : total / static_cast<double>(records.size());
    row.micro = micro_value(metric, records);
    report.aggregates.push_back(std::move(row));
  }
  return report;
}

EvalReport eval_run(const std::filesystem::path& gt_path, const std::filesystem::path& pred_path,
                    const EvalOptions& options) {
  const std::string gt_text = read_file(gt_path);
  const std::string pred_text = read_file(pred_path);
  EvalReport report = eval_records(parse_jsonl(gt_text, gt_path.string()),
                                   parse_jsonl(pred_text, pred_path.string()), options);
  report.gt_digest = fnv1a_hex(gt_text);
  report.pred_digest = fnv1a_hex(pred_text);
  return report;
}

Json EvalReport::to_json() const {
  Json aggregates_json = Json::array();
  for (const AggregateRow& row : aggregates) {
    Json r = {{"metric", row.metric}, {"mean", row.mean}, {"count", row.count}};
    r["micro"] = row.micro ? Json(*row.micro) : Json(nullptr);
    r["headline"] = aggregation == Aggregation::Micro && row.micro ? *row.micro : row.mean;
    aggregates_json.push_back(std::move(r));
  }
  Json samples_json = Json::array();
  for (const SampleResult& s : samples) {
    Json metrics_json = Json::object();
    for (const MetricRecord& m : s.metrics) {
      Json entry = {{"value", m.value}};
      for (const auto& [key, value] : m.sub) entry[key] = value;
      metrics_json[m.metric] = std::move(entry);
    }
    Json sample = {{"id", s.id}, {"failed", s.failed}, {"diagnostics", s.diagnostics}, {"metrics", metrics_json}};
    if (s.failed) sample["error"] = s.error;
    samples_json.push_back(std::move(sample));
  }
  return {{"task", std::string(to_string(task))},
          {"iou_threshold", iou_threshold},
          {"aggregation", aggregation == Aggregation::Micro ? "micro" : "macro"},
          {"metrics", metrics},
          {"inputs", {{"gt_digest", gt_digest}, {"pred_digest", pred_digest}}},
          {"sample_count", samples.size()},
          {"failure_count", failure_count},
          {"aggregates", std::move(aggregates_json)},
          {"samples", std::move(samples_json)}};
}

std::string EvalReport::digest() const { return fnv1a_hex(to_json().dump()); }

std::string EvalReport::to_table() const {
  std::vector<std::array<std::string, 4>> rows = {{"metric", "macro", "micro", "count"}};
  for (const AggregateRow& row : aggregates) {
    rows.push_back({row.metric, format_value(row.mean), row.micro ? format_value(*row.micro) : "-",
                    std::to_string(row.count)});
  }
  std::array<std::size_t, 4> width{};
  for (const auto& r : rows)
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream out;
  out << "task " << to_string(task) << ", " << samples.size() << " samples, " << failure_count
      << " failed";
  if (task == Task::TD) out << ", IoU@" << format_value(iou_threshold).substr(0, 4);
  out << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) {
      const std::string& cell = rows[i][c];
      if (c == 0) {
        out << cell << std::string(width[c] - cell.size(), ' ');
      } else {
        out << "  " << std::string(width[c] - cell.size(), ' ') << cell;
      }
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------- convert

std::string_view to_string(Format format) {
  switch (format) {
    case Format::Html: return "html";
    case Format::ObjectsText: return "objects-text";
    case Format::GridJson: return "grid-json";
  }
  return "";
}

Format format_from_string(std::string_view text) {
  for (Format f : {Format::Html, Format::ObjectsText, Format::GridJson}) {
    if (text == to_string(f)) return f;
  }
  throw Error(ErrorCode::UnsupportedConversion, "unknown format '" + std::string(text) + "'");
}

ConvertResult convert(std::string_view input, Format from, Format to, const ConvertOptions& options) {
  ConvertResult out;
  auto warn = [&out](const Diagnostics& diags) {
    for (const Diagnostic& d : diags) {
      std::string msg(to_string(d.kind));
      if (d.line) msg += " (line " + std::to_string(d.line) + ")";
      out.warnings.push_back(msg + ": " + d.message);
    }
  };
  if (options.remap != Remap::None) {
    if (to != Format::ObjectsText) {
      throw Error(ErrorCode::UnsupportedConversion, "coordinate remapping needs an objects-text target");
    }
    if (!options.table_bbox) throw Error(ErrorCode::UnsupportedConversion, "coordinate remapping needs --table-bbox");
  }

  std::optional<TableGrid> grid;
  std::vector<TableObject> objects;
  switch (from) {
    case Format::Html: {
      HtmlParse parsed = parse_html_table(input);
      warn(parsed.diagnostics);
      grid = std::move(parsed.grid);
      break;
    }
    case Format::GridJson: {
      Json value = Json::parse(input, nullptr, false);
      if (value.is_discarded()) throw Error(ErrorCode::MalformedInput, "grid-json input is not JSON");
      try {
        grid = grid_from_json(value);
      } catch (const Json::exception& e) {
        throw Error(ErrorCode::MalformedInput, e.what());
      }
      const Diagnostics diags = grid_validate(*grid);
      if (!diags.empty()) {
        throw Error(ErrorCode::MalformedInput,
                    "invalid grid: " + std::string(to_string(diags.front().kind)) + " " + diags.front().message);
      }
      break;
    }
    case Format::ObjectsText: {
      auto parsed = parse_tsr_response(input);
      warn(parsed.diagnostics);
      objects = std::move(parsed.items);
      break;
    }
  }

  if (to == Format::ObjectsText) {
    if (grid) {
      const bool located = !grid->cells.empty() && std::all_of(grid->cells.begin(), grid->cells.end(),
                                                               [](const GridCell& c) { return c.bbox.has_value(); });
      if (!located && !options.table_bbox) {
        throw Error(ErrorCode::UnsupportedConversion, "objects from a grid without cell boxes need --table-bbox");
      }
      // With --to-page the geometry is laid out in the crop and then mapped.
      const BBox frame = options.remap == Remap::None && options.table_bbox ? *options.table_bbox
                                                                            : BBox{0.0, 0.0, 1.0, 1.0};
      objects = grid_to_objects(*grid, frame);
      if (std::any_of(grid->cells.begin(), grid->cells.end(),
                      [](const GridCell& c) { return c.text && !c.text->empty(); })) {
        out.warnings.push_back("cell text dropped: objects carry structure only");
      }
    }
    if (options.remap == Remap::ToPage) {
      objects = crop_to_page(objects, *options.table_bbox);
    } else if (options.remap == Remap::ToCrop) {
      RemapResult mapped = page_to_crop(objects, *options.table_bbox);
      warn(mapped.diagnostics);
      objects = std::move(mapped.objects);
    }
    out.output = serialize_tsr(objects);
    return out;
  }

  if (!grid) {
    GridReconstruction rec = objects_to_grid(objects);
    warn(rec.diagnostics);
    grid = std::move(rec.grid);
  }
  if (to == Format::Html) {
    out.output = emit_html(*grid);
  } else {
    out.output = grid_to_json(*grid).dump(2);
  }
  return out;
}

}  // namespace tabkit

// Python bindings. Grids, object lists and reports cross the boundary as
// JSON text; the Python package decodes them into plain dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tabkit/error.hpp"
#include "tabkit/fixtures.hpp"
#include "tabkit/harness.hpp"
#include "tabkit/json_io.hpp"
#include "tabkit/metrics.hpp"
#include "tabkit/reconstruct.hpp"
#include "tabkit/textio.hpp"

namespace py = pybind11;
using namespace tabkit;

namespace {

using Box = std::array<double, 4>;

Box to_tuple(const BBox& b) { return {b.x1, b.y1, b.x2, b.y2}; }

BBox to_bbox(const Box& raw) { return make_bbox(raw[0], raw[1], raw[2], raw[3]); }

std::vector<std::string> describe(const Diagnostics& diags) {
  std::vector<std::string> out;
  for (const Diagnostic& d : diags) {
    std::string s(to_string(d.kind));
    if (d.line) s += " (line " + std::to_string(d.line) + ")";
    out.push_back(s + ": " + d.message);
  }
  return out;
}

TableGrid grid_arg(const std::string& json_text) {
  TableGrid g = grid_from_json(Json::parse(json_text));
  require_valid_grid(g);
  return g;
}

std::vector<TableObject> objects_arg(const std::string& json_text) {
  return objects_from_json(Json::parse(json_text));
}

GritsKind grits_kind(const std::string& name) {
  if (name == "top" || name == "grits-top") return GritsKind::Top;
  if (name == "cont" || name == "grits-cont") return GritsKind::Cont;
  if (name == "loc" || name == "grits-loc") return GritsKind::Loc;
  throw Error(ErrorCode::InvalidArgument, "unknown GriTS kind '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_tabkit, m) {
  m.doc() = "Table detection, structure recognition and QA evaluation";

  py::register_exception<Error>(m, "TabkitError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Json::exception& e) {
      const auto error_type = py::module_::import("tabkit._tabkit").attr("TabkitError");
      py::set_error(error_type, (std::string("MalformedInput: ") + e.what()).c_str());
    }
  });

  m.def("parse_td_response", [](const std::string& text) {
    auto parsed = parse_td_response(text);
    std::vector<Box> boxes;
    for (const BBox& b : parsed.items) boxes.push_back(to_tuple(b));
    return std::make_pair(boxes, describe(parsed.diagnostics));
  });

  m.def("parse_tsr_response", [](const std::string& text) {
    auto parsed = parse_tsr_response(text);
    return std::make_pair(objects_to_json(parsed.items).dump(), describe(parsed.diagnostics));
  });

  m.def("serialize_tsr", [](const std::string& objects) { return serialize_tsr(objects_arg(objects)); });
  m.def("canonicalize", [](const std::string& objects) { return objects_to_json(canonicalize(objects_arg(objects))).dump(); });

  m.def("parse_html_table", [](const std::string& html) {
    HtmlParse parsed = parse_html_table(html);
    return std::make_pair(grid_to_json(parsed.grid).dump(), describe(parsed.diagnostics));
  });
  m.def("emit_html", [](const std::string& grid) { return emit_html(grid_arg(grid)); });
  m.def("grid_validate", [](const std::string& grid) {
    return describe(grid_validate(grid_from_json(Json::parse(grid))));
  });

  m.def("objects_to_grid", [](const std::string& objects) {
    GridReconstruction rec = objects_to_grid(objects_arg(objects));
    return std::make_pair(grid_to_json(rec.grid).dump(), describe(rec.diagnostics));
  });
  m.def("grid_to_objects", [](const std::string& grid, const Box& table_bbox) {
    return objects_to_json(grid_to_objects(grid_arg(grid), to_bbox(table_bbox))).dump();
  });
  m.def("crop_to_page", [](const std::string& objects, const Box& region) {
    return objects_to_json(crop_to_page(objects_arg(objects), to_bbox(region))).dump();
  });

  m.def("bbox_iou", [](const Box& a, const Box& b) { return bbox_iou(to_bbox(a), to_bbox(b)); });

  m.def("steds", [](const std::string& gt, const std::string& pred, bool header_sections) {
          return steds(grid_arg(gt), grid_arg(pred), TreeOptions{header_sections});
        },
        py::arg("gt"), py::arg("pred"), py::arg("header_sections") = true);
  m.def("grits", [](const std::string& gt, const std::string& pred, const std::string& kind) {
          return grits(grid_arg(gt), grid_arg(pred), grits_kind(kind));
        },
        py::arg("gt"), py::arg("pred"), py::arg("kind") = "top");

  m.def("detection_prf",
        [](const std::vector<Box>& gt, const std::vector<Box>& pred, double threshold) {
          std::vector<BBox> g, p;
          for (const Box& b : gt) g.push_back(to_bbox(b));
          for (const Box& b : pred) p.push_back(to_bbox(b));
          const DetectionResult r = detection_prf(g, p, threshold);
          return std::make_tuple(r.precision, r.recall, r.f1);
        },
        py::arg("gt"), py::arg("pred"), py::arg("iou_threshold") = 0.75);

  m.def("tqa_correct", [](const std::string& answer, const std::string& response) {
    return tqa_correct(answer, response);
  });
  m.def("tqa_accuracy", [](const std::vector<std::pair<std::string, std::string>>& pairs) {
    return tqa_accuracy(pairs);
  });

  m.def("convert",
        [](const std::string& input, const std::string& from, const std::string& to,
           std::optional<Box> table_bbox, const std::string& remap) {
          ConvertOptions opt;
          if (table_bbox) opt.table_bbox = to_bbox(*table_bbox);
          if (remap == "to-page") {
            opt.remap = Remap::ToPage;
          } else if (remap == "to-crop") {
            opt.remap = Remap::ToCrop;
          } else if (remap != "none") {
            throw Error(ErrorCode::InvalidArgument, "remap must be none, to-page or to-crop");
          }
          ConvertResult r = convert(input, format_from_string(from), format_from_string(to), opt);
          return std::make_pair(r.output, r.warnings);
        },
        py::arg("input"), py::arg("from_format"), py::arg("to_format"), py::arg("table_bbox") = py::none(),
        py::arg("remap") = "none");

  m.def("eval_run",
        [](const std::string& gt_path, const std::string& pred_path, const std::string& task, double iou,
           const std::vector<std::string>& metrics, unsigned workers) {
          EvalOptions opt;
          opt.task = task_from_string(task);
          opt.iou_threshold = iou;
          opt.metrics = metrics;
          opt.workers = workers;
          EvalReport report;
          {
            py::gil_scoped_release release;
            report = eval_run(gt_path, pred_path, opt);
          }
          return std::make_pair(report.to_json().dump(), report.to_table());
        },
        py::arg("gt_path"), py::arg("pred_path"), py::arg("task"), py::arg("iou_threshold") = 0.75,
        py::arg("metrics") = std::vector<std::string>{}, py::arg("workers") = 1);

  m.def("gen_fixtures",
        [](std::uint64_t seed, std::size_t count, double corruption_rate, std::size_t max_rows,
           std::size_t max_cols, const std::string& task) {
          FixtureOptions opt;
          opt.seed = seed;
          opt.count = count;
          opt.corruption_rate = corruption_rate;
          opt.max_rows = max_rows;
          opt.max_cols = max_cols;
          opt.task = task;
          FixtureSet set = gen_fixtures(opt);
          return std::make_pair(set.gt_jsonl, set.pred_jsonl);
        },
        py::arg("seed"), py::arg("count") = 50, py::arg("corruption_rate") = 0.0, py::arg("max_rows") = 8,
        py::arg("max_cols") = 8, py::arg("task") = "tsr");
}

// tabkit command line: eval, convert, fixtures.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "tabkit/error.hpp"
#include "tabkit/fixtures.hpp"
#include "tabkit/harness.hpp"

namespace {

constexpr int kInputError = 2;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

tabkit::BBox parse_box_arg(std::string text) {
  for (char& ch : text)
    if (ch == '[' || ch == ']') ch = ' ';
  const auto parts = split_list(text);
  if (parts.size() != 4) throw tabkit::Error(tabkit::ErrorCode::InvalidArgument, "--table-bbox needs x1,y1,x2,y2");
  std::array<double, 4> raw{};
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t used = 0;
    try {
      raw[i] = std::stod(parts[i], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != parts[i].size()) {
      throw tabkit::Error(tabkit::ErrorCode::InvalidArgument, "bad coordinate '" + parts[i] + "'");
    }
  }
  return tabkit::make_bbox(raw[0], raw[1], raw[2], raw[3]);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << body;
  if (!out) throw tabkit::Error(tabkit::ErrorCode::UnreadableFile, "cannot write " + path.string());
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct EvalArgs {
  std::string task;
  std::string gt;
  std::string pred;
  double iou = 0.75;
  std::string metrics;
  std::string aggregate = "macro";
  bool flat_header = false;
  std::string out;
};

int run_eval(const EvalArgs& args) {
  tabkit::EvalOptions options;
  options.task = tabkit::task_from_string(args.task);
  options.iou_threshold = args.iou;
  options.metrics = split_list(args.metrics);
  options.aggregation = args.aggregate == "micro" ? tabkit::Aggregation::Micro : tabkit::Aggregation::Macro;
  options.workers = tabkit::workers_from_env();
  options.tree.header_sections = !args.flat_header;

  const tabkit::EvalReport report = tabkit::eval_run(args.gt, args.pred, options);
  const std::string table = report.to_table();
  std::cout << table;

  if (!args.out.empty()) {
    tabkit::Json doc = {{"report", report.to_json()},
                        {"report_digest", report.digest()},
                        {"meta", {{"generated_at", utc_now()}, {"workers", options.workers}}}};
    const std::filesystem::path out_path(args.out);
    write_text(out_path, doc.dump(2) + "\n");
    std::filesystem::path table_path = out_path;
    table_path.replace_extension(".txt");
    write_text(table_path, table);
  }
  return 0;
}

struct ConvertArgs {
  std::string from;
  std::string to;
  std::string table_bbox;
  bool to_page = false;
  bool to_crop = false;
  std::string in;
  std::string out;
};

int run_convert(const ConvertArgs& args) {
  tabkit::ConvertOptions options;
  if (!args.table_bbox.empty()) options.table_bbox = parse_box_arg(args.table_bbox);
  if (args.to_page) options.remap = tabkit::Remap::ToPage;
  if (args.to_crop) options.remap = tabkit::Remap::ToCrop;

  std::string input;
  if (args.in.empty() || args.in == "-") {
    input.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    input = tabkit::read_file(args.in);
  }
  const tabkit::ConvertResult result = tabkit::convert(input, tabkit::format_from_string(args.from),
                                                       tabkit::format_from_string(args.to), options);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::string body = result.output;
  if (!body.empty() && body.back() != '\n') body.push_back('\n');
  if (args.out.empty() || args.out == "-") {
    std::cout << body;
  } else {
    write_text(args.out, body);
  }
  return 0;
}

struct FixtureArgs {
  std::uint64_t seed = 0;
  std::size_t count = 50;
  double corruption = 0.0;
  std::string out;
  std::size_t max_rows = 8;
  std::size_t max_cols = 8;
  std::string kinds = "drop-row,split-column,shift-boxes";
  std::string task = "tsr";
};

int run_fixtures(const FixtureArgs& args) {
  tabkit::FixtureOptions options;
  options.seed = args.seed;
  options.count = args.count;
  options.corruption_rate = args.corruption;
  options.max_rows = args.max_rows;
  options.max_cols = args.max_cols;
  options.task = args.task;
  options.corruptions.clear();
  for (const std::string& k : split_list(args.kinds)) options.corruptions.push_back(tabkit::corruption_from_string(k));
  const tabkit::FixtureSet set = tabkit::gen_fixtures(options);
  tabkit::write_fixtures(set, args.out);
  std::cout << "wrote " << args.count << " samples to " << args.out << " (gt " << tabkit::fnv1a_hex(set.gt_jsonl)
            << ", pred " << tabkit::fnv1a_hex(set.pred_jsonl) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Table detection, structure and QA evaluation toolkit"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--task", eval_args.task, "td | tsr | tq | tqa")
      ->required()
      ->check(CLI::IsMember({"td", "tsr", "tq", "tqa"}));
  eval->add_option("--gt", eval_args.gt, "ground-truth JSONL")->required();
  eval->add_option("--pred", eval_args.pred, "prediction JSONL")->required();
  eval->add_option("--iou", eval_args.iou, "detection IoU threshold")->capture_default_str();
  eval->add_option("--metrics", eval_args.metrics, "comma-separated subset, e.g. steds,grits-top");
  eval->add_option("--aggregate", eval_args.aggregate, "headline aggregate")
      ->capture_default_str()
      ->check(CLI::IsMember({"macro", "micro"}));
  eval->add_flag("--flat-header", eval_args.flat_header, "omit thead/tbody nodes from S-TEDS trees");
  eval->add_option("--out", eval_args.out, "JSON report path; a .txt table is written beside it");

  ConvertArgs convert_args;
  CLI::App* convert = app.add_subcommand("convert", "Convert between html, objects-text and grid-json");
  convert->add_option("--from", convert_args.from, "html | objects-text | grid-json")->required();
  convert->add_option("--to", convert_args.to, "html | objects-text | grid-json")->required();
  convert->add_option("--table-bbox", convert_args.table_bbox, "x1,y1,x2,y2 of the table on the page");
  auto* to_page = convert->add_flag("--to-page", convert_args.to_page, "map crop coordinates onto the page");
  auto* to_crop = convert->add_flag("--to-crop", convert_args.to_crop, "map page coordinates into the crop");
  to_page->excludes(to_crop);
  convert->add_option("--in", convert_args.in, "input file (default stdin)");
  convert->add_option("--out", convert_args.out, "output file (default stdout)");

  FixtureArgs fixture_args;
  CLI::App* fixtures = app.add_subcommand("fixtures", "Write a synthetic gt/pred corpus");
  fixtures->add_option("--seed", fixture_args.seed)->required();
  fixtures->add_option("--count", fixture_args.count)->required()->check(CLI::NonNegativeNumber);
  fixtures->add_option("--corruption", fixture_args.corruption, "fraction of corrupted predictions")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  fixtures->add_option("--out", fixture_args.out, "output directory")->required();
  fixtures->add_option("--max-rows", fixture_args.max_rows)->capture_default_str()->check(CLI::PositiveNumber);
  fixtures->add_option("--max-cols", fixture_args.max_cols)->capture_default_str()->check(CLI::PositiveNumber);
  fixtures->add_option("--kinds", fixture_args.kinds, "corruptions to draw from")->capture_default_str();
  fixtures->add_option("--task", fixture_args.task)->capture_default_str()->check(CLI::IsMember({"tsr", "tq"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*eval) return run_eval(eval_args);
    if (*convert) return run_convert(convert_args);
    if (*fixtures) return run_fixtures(fixture_args);
  } catch (const tabkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

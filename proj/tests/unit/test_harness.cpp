#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "tabkit/fixtures.hpp"
#include "tabkit/harness.hpp"
#include "tabkit/metrics.hpp"
#include "tabkit/reconstruct.hpp"
#include "tabkit/textio.hpp"

using namespace tabkit;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

const AggregateRow& row(const EvalReport& r, const std::string& metric) {
  for (const auto& a : r.aggregates)
    if (a.metric == metric) return a;
  FAIL("no aggregate " << metric);
  return r.aggregates.front();
}

EvalReport eval_text(const std::string& gt, const std::string& pred, EvalOptions options) {
  return eval_records(parse_jsonl(gt), parse_jsonl(pred), options);
}

}  // namespace

TEST_CASE("jsonl parsing") {
  const auto recs = parse_jsonl("{\"id\":\"a\",\"task\":\"td\",\"boxes\":[]}\n\n{\"id\":7}\n");
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].task == Task::TD);
  CHECK(recs[1].id == "7");
  CHECK_FALSE(recs[1].task.has_value());
  CHECK_THROWS_AS(parse_jsonl("{\"id\":\"a\"}\n{\"id\":\"a\"}"), Error);
  CHECK_THROWS_AS(parse_jsonl("not json"), Error);
  CHECK_THROWS_AS(parse_jsonl("{\"task\":\"td\"}"), Error);
  CHECK_THROWS_AS(parse_jsonl("{\"id\":\"a\",\"task\":\"xx\"}"), Error);
}

TEST_CASE("detection evaluation") {
  const std::string gt =
      "{\"id\":\"1\",\"boxes\":[[0.095,0.139,0.424,0.279],[0.518,0.155,0.807,0.321]]}\n"
      "{\"id\":\"2\",\"boxes\":[[0.1,0.1,0.5,0.5]]}\n";
  const std::string pred =
      "{\"id\":\"1\",\"response\":\"Here: [0.095,0.139,0.424,0.279]\\n[0.518,0.155,0.807,0.321]\"}\n"
      "{\"id\":\"2\",\"response\":\"[0.1,0.1,0.5,0.5] [0.6,0.6,0.9,0.9]\"}\n";
  EvalOptions opt;
  opt.task = Task::TD;
  const EvalReport r = eval_text(gt, pred, opt);
  CHECK(r.failure_count == 0);
  CHECK(row(r, "recall").mean == 1.0);
  CHECK(row(r, "precision").mean == doctest::Approx(0.75));
  CHECK(*row(r, "precision").micro == doctest::Approx(3.0 / 4.0));
  CHECK(*row(r, "f1").micro == doctest::Approx(2 * 0.75 / 1.75));

  const EvalReport same = eval_text(gt, gt, opt);
  CHECK(row(same, "f1").mean == 1.0);
}

TEST_CASE("qa evaluation") {
  const std::string gt = "{\"id\":\"q1\",\"answer\":\"Fukuyama\"}\n{\"id\":\"q2\",\"answer\":\"Fukuyama\"}\n";
  const std::string pred =
      "{\"id\":\"q1\",\"response\":\"Fukuyama \\nReason: last row\"}\n{\"id\":\"q2\",\"response\":\"Fukuoka\"}\n";
  EvalOptions opt;
  opt.task = Task::TQA;
  CHECK(row(eval_text(gt, pred, opt), "accuracy").mean == 0.5);
}

TEST_CASE("unmatched ids and failures") {
  const std::string gt = "{\"id\":\"a\",\"answer\":\"x\"}\n{\"id\":\"b\",\"answer\":\"y\"}\n";
  EvalOptions opt;
  opt.task = Task::TQA;
  CHECK_THROWS_AS(eval_text(gt, "{\"id\":\"zz\",\"response\":\"x\"}", opt), Error);
  const EvalReport r = eval_text(gt, "{\"id\":\"a\",\"response\":\"x\"}\n{\"id\":\"b\"}", opt);
  CHECK(r.failure_count == 1);
  CHECK(row(r, "accuracy").mean == 0.5);

  opt.task = Task::TSR;
  const std::string tsr_gt = "{\"id\":\"a\",\"html\":\"<table><tr><td>1</td></tr></table>\"}\n";
  const EvalReport bad = eval_text(tsr_gt, "{\"id\":\"a\",\"response\":\"garbage\"}", opt);
  CHECK(bad.failure_count == 1);
  CHECK(row(bad, "steds").mean == 0.0);
  CHECK(row(bad, "grits-top").mean == 0.0);
  CHECK(row(bad, "grits-loc").count == 0);
}

TEST_CASE("metric selection") {
  EvalOptions opt;
  opt.metrics = {"steds", "grits-top"};
  const std::string gt = "{\"id\":\"a\",\"html\":\"<table><tr><td>1</td><td>2</td></tr></table>\"}\n";
  const EvalReport r = eval_text(gt, gt, opt);
  CHECK(r.aggregates.size() == 2);
  opt.metrics = {"accuracy"};
  CHECK_THROWS_AS(eval_text(gt, gt, opt), Error);
}

TEST_CASE("fixtures: clean corpus scores one, seeds reproduce") {
  FixtureOptions fo;
  fo.seed = 42;
  fo.count = 40;
  const FixtureSet a = gen_fixtures(fo), b = gen_fixtures(fo);
  CHECK(a.gt_jsonl == b.gt_jsonl);
  CHECK(a.pred_jsonl == b.pred_jsonl);
  const EvalReport r = eval_text(a.gt_jsonl, a.pred_jsonl, {});
  for (const auto& agg : r.aggregates) {
    INFO(agg.metric);
    CHECK(agg.mean == 1.0);
  }

  fo.task = "tq";
  const FixtureSet tq = gen_fixtures(fo);
  EvalOptions opt;
  opt.task = Task::TQ;
  for (const auto& agg : eval_text(tq.gt_jsonl, tq.pred_jsonl, opt).aggregates) CHECK(agg.mean == 1.0);
}

TEST_CASE("fixtures: every dropped row lowers S-TEDS") {
  FixtureOptions fo;
  fo.seed = 9;
  fo.count = 50;
  fo.corruption_rate = 1.0;
  fo.corruptions = {Corruption::DropRow};
  const FixtureSet set = gen_fixtures(fo);
  const EvalReport r = eval_text(set.gt_jsonl, set.pred_jsonl, {});
  for (const auto& s : r.samples) {
    for (const auto& m : s.metrics)
      if (m.metric == "steds") CHECK(m.value < 1.0);
  }
}

TEST_CASE("aggregates equal the mean of independently scored samples") {
  FixtureOptions fo;
  fo.seed = 77;
  fo.count = 50;
  fo.corruption_rate = 0.5;
  const FixtureSet set = gen_fixtures(fo);
  const EvalReport r = eval_text(set.gt_jsonl, set.pred_jsonl, {});

  const auto gt = parse_jsonl(set.gt_jsonl), pred = parse_jsonl(set.pred_jsonl);
  double steds_sum = 0.0, top_sum = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i) {
    const TableGrid g = objects_to_grid(objects_from_json(gt[i].payload["objects"])).grid;
    const auto parsed = parse_tsr_response(pred[i].payload["response"].get<std::string>());
    try {
      const TableGrid p = objects_to_grid(parsed.items).grid;
      steds_sum += steds(g, p);
      top_sum += grits(g, p, GritsKind::Top);
    } catch (const Error&) {
      // scored 0
    }
  }
  CHECK(row(r, "steds").mean == doctest::Approx(steds_sum / 50.0).epsilon(1e-9));
  CHECK(row(r, "grits-top").mean == doctest::Approx(top_sum / 50.0).epsilon(1e-9));
}

TEST_CASE("reports ignore worker count and line order") {
  FixtureOptions fo;
  fo.seed = 5;
  fo.count = 60;
  fo.corruption_rate = 0.4;
  const FixtureSet set = gen_fixtures(fo);
  EvalOptions one, many;
  many.workers = 7;
  const EvalReport a = eval_text(set.gt_jsonl, set.pred_jsonl, one);
  const EvalReport b = eval_text(set.gt_jsonl, set.pred_jsonl, many);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.digest() == b.digest());

  auto gl = lines_of(set.gt_jsonl), pl = lines_of(set.pred_jsonl);
  std::mt19937 shuffler(1);
  std::shuffle(gl.begin(), gl.end(), shuffler);
  std::shuffle(pl.begin(), pl.end(), shuffler);
  const EvalReport c = eval_text(join(gl), join(pl), many);
  CHECK(c.to_json().dump() == a.to_json().dump());
}

TEST_CASE("report shape") {
  FixtureOptions fo;
  fo.count = 3;
  const FixtureSet set = gen_fixtures(fo);
  const EvalReport r = eval_text(set.gt_jsonl, set.pred_jsonl, {});
  const Json j = r.to_json();
  CHECK(j["task"] == "tsr");
  CHECK(j["sample_count"] == 3);
  CHECK(j["samples"][0]["id"] == "fx-00000");
  const std::string table = r.to_table();
  CHECK(table.find("steds") != std::string::npos);
  CHECK(table.find("grits-loc") != std::string::npos);
}

TEST_CASE("convert html to objects and back") {
  const std::string html = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>";
  CHECK_THROWS_AS(convert(html, Format::Html, Format::ObjectsText), Error);
  ConvertOptions opt;
  opt.table_bbox = BBox{0, 0, 1, 1};
  const ConvertResult objs = convert(html, Format::Html, Format::ObjectsText, opt);
  const auto parsed = parse_tsr_response(objs.output);
  CHECK(parsed.items.size() == 4);
  CHECK(objs.warnings.size() == 1);

  const ConvertResult back = convert(objs.output, Format::ObjectsText, Format::Html);
  CHECK(back.output == "<table><tr><td></td><td></td></tr><tr><td></td><td></td></tr></table>");
  const ConvertResult again = convert(convert(back.output, Format::Html, Format::ObjectsText, opt).output,
                                      Format::ObjectsText, Format::ObjectsText);
  CHECK(again.output == objs.output);

  const ConvertResult grid = convert(html, Format::Html, Format::GridJson);
  CHECK(convert(grid.output, Format::GridJson, Format::Html).output ==
        "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>");
}

TEST_CASE("convert fixed point over random grids") {
  Rng rng(3);
  ConvertOptions opt;
  opt.table_bbox = BBox{0, 0, 1, 1};
  GridGenOptions gen{6, 6};
  gen.with_boxes = false;
  for (int i = 0; i < 100; ++i) {
    const TableGrid g = random_grid(rng, gen);
    const std::string text = serialize_tsr(grid_to_objects(g, {0, 0, 1, 1}));
    const std::string html = convert(text, Format::ObjectsText, Format::Html).output;
    const std::string cycled = convert(html, Format::Html, Format::ObjectsText, opt).output;
    CHECK(cycled == text);
  }
}

TEST_CASE("convert with remapping") {
  ConvertOptions opt;
  opt.table_bbox = BBox{0.2, 0.2, 0.7, 0.7};
  opt.remap = Remap::ToPage;
  const std::string crop = "table row [0.000, 0.000, 1.000, 1.000]\ntable column [0.500, 0.500, 1.000, 1.000]";
  const auto page = convert(crop, Format::ObjectsText, Format::ObjectsText, opt);
  CHECK(page.output == "table column [0.450, 0.450, 0.700, 0.700]\ntable row [0.200, 0.200, 0.700, 0.700]");
  opt.remap = Remap::ToCrop;
  CHECK(convert(page.output, Format::ObjectsText, Format::ObjectsText, opt).output ==
        "table column [0.500, 0.500, 1.000, 1.000]\ntable row [0.000, 0.000, 1.000, 1.000]");
  CHECK_THROWS_AS(convert(crop, Format::ObjectsText, Format::Html, opt), Error);
  CHECK_THROWS_AS(format_from_string("latex"), Error);
}

TEST_CASE("oversized grid documents are rejected") {
  const std::string gt = "{\"id\":\"a\",\"grid\":{\"n_rows\":100000,\"n_cols\":100000,\"cells\":[]}}\n";
  const std::string ok = "{\"id\":\"a\",\"html\":\"<table><tr><td>1</td></tr></table>\"}\n";
  const EvalReport r = eval_text(ok, gt, {});
  CHECK(r.failure_count == 1);
}

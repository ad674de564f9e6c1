#include <doctest.h>

#include <algorithm>
#include <random>

#include "tabkit/fixtures.hpp"
#include "tabkit/json_io.hpp"
#include "tabkit/textio.hpp"

using namespace tabkit;

namespace {

constexpr const char* kFourTableResponse =
    "Here is a list of all the locations of table element in the picture:\n"
    " [0.095,0.139,0.424,0.279]\n [0.095,0.375,0.458,0.620]\n [0.092,0.704,0.472,0.862]\n"
    " [0.518,0.155,0.807,0.321]";

std::vector<TableObject> random_objects(Rng& rng, std::size_t n) {
  std::vector<TableObject> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = round3(rng.uniform(0.0, 0.8)), y1 = round3(rng.uniform(0.0, 0.8));
    out.push_back({kAllObjectClasses[rng.between(0, 4)],
                   BBox{x1, y1, round3(rng.uniform(x1 + 0.01, 1.0)), round3(rng.uniform(y1 + 0.01, 1.0))}});
  }
  return out;
}

}  // namespace

TEST_CASE("four-table detection response") {
  const auto parsed = parse_td_response(kFourTableResponse);
  CHECK(parsed.diagnostics.empty());
  REQUIRE(parsed.items.size() == 4);
  CHECK(parsed.items[0] == BBox{0.095, 0.139, 0.424, 0.279});
  CHECK(parsed.items[1] == BBox{0.095, 0.375, 0.458, 0.620});
  CHECK(parsed.items[2] == BBox{0.092, 0.704, 0.472, 0.862});
  CHECK(parsed.items[3] == BBox{0.518, 0.155, 0.807, 0.321});
}

TEST_CASE("detection responses without boxes or with bad boxes") {
  auto none = parse_td_response("no tables found");
  CHECK(none.items.empty());
  CHECK(none.diagnostics.empty());

  auto bad = parse_td_response("[0.2,0.1,0.1,0.3]");
  CHECK(bad.items.empty());
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].kind == DiagnosticKind::DegenerateBox);

  auto spaced = parse_td_response("tables at [0.095, 0.673, 0.5, 0.9] and [0.1,0.1,0.2,0.2].");
  CHECK(spaced.items.size() == 2);

  auto short_box = parse_td_response("[0.1, 0.2, 0.3]");
  CHECK(short_box.items.empty());
  CHECK(short_box.diagnostics.size() == 1);
}

TEST_CASE("structure response grammar") {
  auto parsed = parse_tsr_response("table row [0.100, 0.200, 0.900, 0.300]\ntable column [0.100, 0.100, 0.400, 0.900]");
  CHECK(parsed.diagnostics.empty());
  REQUIRE(parsed.items.size() == 2);
  CHECK(parsed.items[0] == TableObject{ObjectClass::TableRow, {0.1, 0.2, 0.9, 0.3}});
  CHECK(parsed.items[1] == TableObject{ObjectClass::TableColumn, {0.1, 0.1, 0.4, 0.9}});

  auto unknown = parse_tsr_response("table banana [0.1,0.1,0.2,0.2]");
  CHECK(unknown.items.empty());
  REQUIRE(unknown.diagnostics.size() == 1);
  CHECK(unknown.diagnostics[0].kind == DiagnosticKind::UnknownClass);
  CHECK(unknown.diagnostics[0].line == 1);

  auto loose = parse_tsr_response("  Table   Spanning Cell [0.1,0.1,0.5,0.5]\r\nsome prose\n");
  REQUIRE(loose.items.size() == 1);
  CHECK(loose.items[0].cls == ObjectClass::SpanningCell);
  CHECK(loose.diagnostics.empty());
}

TEST_CASE("canonical order") {
  const TableObject right{ObjectClass::TableColumn, {0.5, 0, 1, 1}};
  const TableObject left{ObjectClass::TableColumn, {0, 0, 0.5, 1}};
  const TableObject row{ObjectClass::TableRow, {0, 0, 1, 0.5}};
  const auto sorted = canonicalize({row, right, left, left});
  CHECK(sorted == std::vector<TableObject>{left, right, row});
  CHECK(canonicalize(sorted) == sorted);
}

TEST_CASE("canonicalize is idempotent and permutation invariant") {
  Rng rng(3);
  std::mt19937 shuffler(3);
  for (int i = 0; i < 300; ++i) {
    auto objects = random_objects(rng, rng.between(0, 12));
    const auto canon = canonicalize(objects);
    CHECK(canonicalize(canon) == canon);
    std::shuffle(objects.begin(), objects.end(), shuffler);
    CHECK(canonicalize(objects) == canon);
  }
}

TEST_CASE("serialization format") {
  const std::vector<TableObject> one{{ObjectClass::TableRow, {0.1, 0.2, 0.9, 0.3}}};
  CHECK(serialize_tsr(one) == "table row [0.100, 0.200, 0.900, 0.300]");
  CHECK(serialize_tsr({}) == "");
  CHECK(serialize_td({}) == "");
  const std::vector<BBox> boxes{{0.5, 0.5, 0.6, 0.6}, {0.1, 0.1, 0.2, 0.2}};
  CHECK(serialize_td(boxes) == "[0.100, 0.100, 0.200, 0.200]\n[0.500, 0.500, 0.600, 0.600]");
}

TEST_CASE("parse after serialize is canonicalize") {
  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const auto objects = random_objects(rng, rng.between(0, 15));
    const auto parsed = parse_tsr_response(serialize_tsr(objects));
    CHECK(parsed.diagnostics.empty());
    CHECK(parsed.items == canonicalize(objects));
  }
}

TEST_CASE("parsers never throw on arbitrary input") {
  Rng rng(99);
  const std::string alphabet = "[]0123456789.,- \n\tabcdefghijklmnopqrstuvwxyz<>\"=/e+";
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const std::size_t n = rng.between(0, 80);
    for (std::size_t k = 0; k < n; ++k) s.push_back(alphabet[rng.between(0, alphabet.size() - 1)]);
    if (rng.chance(0.3)) s = "table row " + s;
    CHECK_NOTHROW(parse_td_response(s));
    CHECK_NOTHROW(parse_tsr_response(s));
  }
}

TEST_CASE("whitespace collapsing") {
  CHECK(collapse_whitespace("  a \t b\n\nc ") == "a b c");
  CHECK(collapse_whitespace("") == "");
}

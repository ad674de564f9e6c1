#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabkit/bbox.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/objects.hpp"

namespace tabkit {

// Every candidate line of the input ends up either in items or in
// diagnostics. Lines without any bracketed group are prose and are neither.
template <class T>
struct ParseOutcome {
  std::vector<T> items;
  Diagnostics diagnostics;
};

// Pulls every "[x1, y1, x2, y2]" quadruple out of a detection response.
// Never throws.
ParseOutcome<BBox> parse_td_response(std::string_view text);

// One "<class> [x1, y1, x2, y2]" object per line. Never throws.
ParseOutcome<TableObject> parse_tsr_response(std::string_view text);

// Canonical object order: class priority (column, row, column header,
// projected row header, spanning cell), then y-center, then x-center, both
// rounded to three decimals, then raw coordinates. Exact duplicates are
// removed.
std::vector<TableObject> canonicalize(std::vector<TableObject> objects);

// Same reading-order key for bare boxes.
std::vector<BBox> canonicalize(std::vector<BBox> boxes);

std::string serialize_tsr(std::span<const TableObject> objects);
std::string serialize_td(std::span<const BBox> boxes);

struct HtmlParse {
  TableGrid grid;
  Diagnostics diagnostics;
};

// Parses the first <table> of the supported subset (table, thead, tbody,
// tfoot, tr, td, th with rowspan/colspan). th cells and thead rows become
// column headers. A body row holding one full-width cell is read as a
// projected row header when the table has at least two columns.
//
// Throws Error(NoTable), Error(OverlappingSpan) or Error(RaggedTable).
HtmlParse parse_html_table(std::string_view html);

// Minimal markup, no whitespace between tags. Throws Error(InvalidGrid).
std::string emit_html(const TableGrid& grid);

std::string collapse_whitespace(std::string_view text);

}  // namespace tabkit

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "tabkit/textio.hpp"

namespace tabkit {

namespace {

struct Tag {
  std::string name;  // lower-case, without '/'
  bool closing = false;
  int rowspan = 1;
  int colspan = 1;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    const std::size_t semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = text.substr(i + 1, semi - i - 1);
    bool ok = true;
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (name == "nbsp") out.push_back(' ');
    else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      unsigned long cp = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      ok = ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty();
      if (ok) append_utf8(out, cp);
    } else {
      ok = false;
    }
    if (ok) {
      i = semi;
    } else {
      out.push_back('&');
    }
  }
  return out;
}

std::string escape_text(std::string_view text) {
  std::string out;
  for (char ch : text) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

constexpr int kMaxSpan = 1000;

int span_value(std::string_view raw, Diagnostics& diags) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc{} || ptr != raw.data() + raw.size() || v < 1) {
    diags.push_back({DiagnosticKind::InvalidSpan, 0,
                     "span attribute '" + std::string(raw) + "' treated as 1"});
    return 1;
  }
  if (v > kMaxSpan) {
    diags.push_back({DiagnosticKind::InvalidSpan, 0,
                     "span attribute '" + std::string(raw) + "' capped at " + std::to_string(kMaxSpan)});
    return kMaxSpan;
  }
  return v;
}

// Parses the inside of "<...>" starting after '<'. Returns the index of the
// closing '>' (or end of input).
std::size_t read_tag(std::string_view html, std::size_t pos, Tag& tag, Diagnostics& diags) {
  std::size_t i = pos;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < html.size() && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-')) ++i;
  tag.name = lower(html.substr(name_start, i - name_start));

  while (i < html.size() && html[i] != '>') {
    const auto uc = static_cast<unsigned char>(html[i]);
    if (std::isspace(uc) || html[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t attr_start = i;
    while (i < html.size() && html[i] != '=' && html[i] != '>' &&
           !std::isspace(static_cast<unsigned char>(html[i])) && html[i] != '/') {
      ++i;
    }
    const std::string attr = lower(html.substr(attr_start, i - attr_start));
    while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
    std::string_view value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && std::isspace(static_cast<unsigned char>(html[i]))) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char quote = html[i++];
        const std::size_t vstart = i;
        while (i < html.size() && html[i] != quote) ++i;
        value = html.substr(vstart, i - vstart);
        if (i < html.size()) ++i;
      } else {
        const std::size_t vstart = i;
        while (i < html.size() && html[i] != '>' && !std::isspace(static_cast<unsigned char>(html[i]))) ++i;
        value = html.substr(vstart, i - vstart);
      }
    }
    if (attr == "rowspan") tag.rowspan = span_value(value, diags);
    if (attr == "colspan") tag.colspan = span_value(value, diags);
  }
  return i;
}

struct RawCell {
  std::size_t rowspan = 1;
  std::size_t colspan = 1;
  bool header = false;
  std::string text;
};

struct RawRow {
  std::vector<RawCell> cells;
};

}  // namespace

HtmlParse parse_html_table(std::string_view html) {
  HtmlParse out;
  Diagnostics& diags = out.diagnostics;

  std::vector<RawRow> rows;
  bool in_table = false;
  bool done = false;
  bool in_thead = false;
  bool row_open = false;
  RawCell* cell = nullptr;
  int nested_depth = 0;     // depth of tables nested inside ours
  int skip_depth = 0;       // inside caption/colgroup content
  bool reported_markup = false;

  auto unsupported = [&](const std::string& what) {
    if (!reported_markup) {
      diags.push_back({DiagnosticKind::UnsupportedMarkup, 0, what + " ignored"});
      reported_markup = true;
    }
  };
  auto close_cell = [&] {
    if (cell) cell->text = collapse_whitespace(decode_entities(cell->text));
    cell = nullptr;
  };
  auto open_row = [&] {
    close_cell();
    rows.emplace_back();
    row_open = true;
  };

  std::size_t i = 0;
  while (i < html.size() && !done) {
    if (html[i] != '<') {
      const std::size_t next = html.find('<', i);
      const std::size_t end = next == std::string_view::npos ? html.size() : next;
      if (cell && nested_depth == 0 && skip_depth == 0) cell->text.append(html.substr(i, end - i));
      i = end;
      continue;
    }
    if (html.compare(i, 4, "<!--") == 0) {
      const std::size_t end = html.find("-->", i + 4);
      i = end == std::string_view::npos ? html.size() : end + 3;
      continue;
    }
    if (i + 1 < html.size() && (html[i + 1] == '!' || html[i + 1] == '?')) {
      const std::size_t end = html.find('>', i);
      i = end == std::string_view::npos ? html.size() : end + 1;
      continue;
    }
    Tag tag;
    const std::size_t close = read_tag(html, i + 1, tag, diags);
    i = close == html.size() ? close : close + 1;

    if (!in_table) {
      if (tag.name == "table" && !tag.closing) in_table = true;
      continue;
    }
    if (tag.name == "table") {
      if (tag.closing) {
        if (nested_depth > 0) {
          --nested_depth;
        } else {
          done = true;
        }
      } else {
        ++nested_depth;
        unsupported("nested table");
      }
      continue;
    }
    if (nested_depth > 0) continue;
    if (tag.name == "caption" || tag.name == "colgroup") {
      skip_depth += tag.closing ? -1 : 1;
      skip_depth = std::max(skip_depth, 0);
      unsupported(tag.name);
      continue;
    }
    if (skip_depth > 0) continue;
    if (tag.name == "col") {
      unsupported("col");
      continue;
    }

    if (tag.name == "thead" || tag.name == "tbody" || tag.name == "tfoot") {
      close_cell();
      row_open = false;
      in_thead = !tag.closing && tag.name == "thead";
    } else if (tag.name == "tr") {
      if (tag.closing) {
        close_cell();
        row_open = false;
      } else {
        open_row();
      }
    } else if (tag.name == "td" || tag.name == "th") {
      if (tag.closing) {
        close_cell();
      } else {
        if (!row_open) open_row();
        close_cell();
        RawCell raw;
        raw.rowspan = static_cast<std::size_t>(tag.rowspan);
        raw.colspan = static_cast<std::size_t>(tag.colspan);
        raw.header = tag.name == "th" || in_thead;
        rows.back().cells.push_back(std::move(raw));
        cell = &rows.back().cells.back();
      }
    } else if (tag.name == "br" && cell) {
      cell->text.push_back(' ');
    }
    // Other inline tags inside a cell contribute only their text.
  }
  close_cell();
  if (!in_table) throw Error(ErrorCode::NoTable, "no <table> element found");

  // Span resolution: cells fill the first free column of their row, left to
  // right; row spans are clipped at the last row.
  const std::size_t n_rows = rows.size();
  std::vector<std::vector<bool>> occupied(n_rows);
  auto is_occupied = [&](std::size_t r, std::size_t c) {
    return c < occupied[r].size() && occupied[r][c];
  };
  TableGrid& grid = out.grid;
  grid.n_rows = n_rows;
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::size_t c = 0;
    for (RawCell& raw : rows[r].cells) {
      while (is_occupied(r, c)) ++c;
      std::size_t rowspan = raw.rowspan;
      if (r + rowspan > n_rows) {
        diags.push_back({DiagnosticKind::ClippedSpan, 0,
                         "rowspan " + std::to_string(rowspan) + " at row " + std::to_string(r) +
                             " clipped to " + std::to_string(n_rows - r)});
        rowspan = n_rows - r;
      }
      for (std::size_t rr = r; rr < r + rowspan; ++rr) {
        for (std::size_t cc = c; cc < c + raw.colspan; ++cc) {
          if (is_occupied(rr, cc)) {
            throw Error(ErrorCode::OverlappingSpan, "cell spans collide at (" + std::to_string(rr) +
                                                        "," + std::to_string(cc) + ")");
          }
          if (occupied[rr].size() <= cc) occupied[rr].resize(cc + 1, false);
          occupied[rr][cc] = true;
        }
      }
      GridCell gc;
      gc.row = r;
      gc.col = c;
      gc.rowspan = rowspan;
      gc.colspan = raw.colspan;
      gc.is_column_header = raw.header;
      gc.text = std::move(raw.text);
      grid.cells.push_back(std::move(gc));
      c += raw.colspan;
    }
  }

  std::size_t width = 0;
  for (const auto& row : occupied) width = std::max(width, row.size());
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& row = occupied[r];
    if (row.size() != width || std::find(row.begin(), row.end(), false) != row.end()) {
      throw Error(ErrorCode::RaggedTable, "row " + std::to_string(r) + " does not fill " +
                                              std::to_string(width) + " columns");
    }
  }
  grid.n_cols = width;

  normalize_header_prefix(grid, diags);

  if (grid.n_cols >= 2) {
    const std::size_t header = grid.header_rows();
    std::vector<std::size_t> anchors_in_row(grid.n_rows, 0);
    for (const GridCell& gc : grid.cells) ++anchors_in_row[gc.row];
    for (GridCell& gc : grid.cells) {
      if (gc.row >= header && gc.col == 0 && gc.colspan == grid.n_cols && gc.rowspan == 1 &&
          anchors_in_row[gc.row] == 1) {
        gc.is_projected_row_header = true;
      }
    }
  }
  grid.sort_cells();
  return out;
}

std::string emit_html(const TableGrid& grid) {
  require_valid_grid(grid);
  std::vector<std::vector<const GridCell*>> by_row(grid.n_rows);
  for (const GridCell& cell : grid.cells) by_row[cell.row].push_back(&cell);
  for (auto& row : by_row) {
    std::sort(row.begin(), row.end(), [](const GridCell* a, const GridCell* b) { return a->col < b->col; });
  }

  const std::size_t header = grid.header_rows();
  std::string out = "<table>";
  auto emit_rows = [&](std::size_t from, std::size_t to) {
    for (std::size_t r = from; r < to; ++r) {
      out += "<tr>";
      for (const GridCell* cell : by_row[r]) {
        const char* tag = cell->is_column_header ? "th" : "td";
        out += '<';
        out += tag;
        if (cell->colspan > 1) out += " colspan=\"" + std::to_string(cell->colspan) + "\"";
        if (cell->rowspan > 1) out += " rowspan=\"" + std::to_string(cell->rowspan) + "\"";
        out += '>';
        if (cell->text) out += escape_text(*cell->text);
        out += "</";
        out += tag;
        out += '>';
      }
      out += "</tr>";
    }
  };
  if (header > 0) {
    out += "<thead>";
    emit_rows(0, header);
    out += "</thead>";
    if (header < grid.n_rows) {
      out += "<tbody>";
      emit_rows(header, grid.n_rows);
      out += "</tbody>";
    }
  } else {
    emit_rows(0, grid.n_rows);
  }
  out += "</table>";
  return out;
}

}  // namespace tabkit

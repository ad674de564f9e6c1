#include "tabkit/textio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <tuple>

namespace tabkit {

namespace {

struct Bracket {
  std::size_t open;   // index of '['
  std::size_t close;  // index of ']'
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Bracket bodies made only of number-ish characters are coordinate
// candidates; anything else inside brackets is prose.
bool looks_numeric(std::string_view body) {
  bool digit = false;
  for (char ch : body) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isdigit(uc)) {
      digit = true;
    } else if (!(ch == '.' || ch == ',' || ch == '-' || ch == '+' || ch == 'e' || ch == 'E' ||
                 std::isspace(uc))) {
      return false;
    }
  }
  return digit;
}

std::vector<Bracket> find_brackets(std::string_view line) {
  std::vector<Bracket> out;
  std::size_t pos = 0;
  while ((pos = line.find('[', pos)) != std::string_view::npos) {
    const std::size_t close = line.find(']', pos + 1);
    if (close == std::string_view::npos) {
      out.push_back({pos, std::string_view::npos});
      break;
    }
    out.push_back({pos, close});
    pos = close + 1;
  }
  return out;
}

std::optional<std::array<double, 4>> parse_quadruple(std::string_view body) {
  std::array<double, 4> values{};
  std::size_t count = 0;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    std::string_view field =
        trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                : comma - start));
    if (field.empty() || count == 4) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    values[count++] = v;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (count != 4) return std::nullopt;
  return values;
}

// Parses one bracket body into a box, or a diagnostic tagged with the line.
std::variant<BBox, Diagnostic> box_from_body(std::string_view body, std::size_t line_no) {
  auto quad = parse_quadruple(body);
  if (!quad) {
    return Diagnostic{DiagnosticKind::MalformedBox, line_no,
                      "expected four comma-separated numbers in [" + std::string(body) + "]"};
  }
  auto result = validate_bbox(*quad);
  if (auto* diag = std::get_if<Diagnostic>(&result)) diag->line = line_no;
  return result;
}

long long rounded_milli(double v) { return std::llround(v * 1000.0); }

auto reading_key(const BBox& b) {
  return std::make_tuple(rounded_milli(b.center_y()), rounded_milli(b.center_x()), b.y1, b.x1,
                         b.y2, b.x2);
}

}  // namespace

ParseOutcome<BBox> parse_td_response(std::string_view text) {
  ParseOutcome<BBox> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    for (const Bracket& br : find_brackets(lines[i])) {
      if (br.close == std::string_view::npos) {
        const std::string_view tail = lines[i].substr(br.open + 1);
        if (looks_numeric(tail)) {
          out.diagnostics.push_back(
              {DiagnosticKind::MalformedBox, line_no, "unterminated bracket"});
        }
        continue;
      }
      const std::string_view body = lines[i].substr(br.open + 1, br.close - br.open - 1);
      if (!looks_numeric(body)) continue;
      auto result = box_from_body(body, line_no);
      if (auto* box = std::get_if<BBox>(&result)) {
        out.items.push_back(*box);
      } else {
        out.diagnostics.push_back(std::get<Diagnostic>(result));
      }
    }
  }
  return out;
}

ParseOutcome<TableObject> parse_tsr_response(std::string_view text) {
  ParseOutcome<TableObject> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = lines[i];
    const std::size_t open = line.find('[');
    if (open == std::string_view::npos) continue;
    const std::size_t close = line.find(']', open + 1);
    if (close == std::string_view::npos) {
      out.diagnostics.push_back({DiagnosticKind::MalformedBox, line_no, "unterminated bracket"});
      continue;
    }
    const std::string_view label = trim(line.substr(0, open));
    const auto cls = object_class_from_string(label);
    if (!cls) {
      out.diagnostics.push_back(
          {DiagnosticKind::UnknownClass, line_no, "unknown object class '" + std::string(label) + "'"});
      continue;
    }
    auto result = box_from_body(line.substr(open + 1, close - open - 1), line_no);
    if (auto* box = std::get_if<BBox>(&result)) {
      out.items.push_back({*cls, *box});
    } else {
      out.diagnostics.push_back(std::get<Diagnostic>(result));
    }
  }
  return out;
}

std::vector<TableObject> canonicalize(std::vector<TableObject> objects) {
  auto key = [](const TableObject& o) {
    return std::tuple_cat(std::make_tuple(static_cast<int>(o.cls)), reading_key(o.bbox));
  };
  std::sort(objects.begin(), objects.end(),
            [&](const TableObject& a, const TableObject& b) { return key(a) < key(b); });
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  return objects;
}

std::vector<BBox> canonicalize(std::vector<BBox> boxes) {
  std::sort(boxes.begin(), boxes.end(),
            [](const BBox& a, const BBox& b) { return reading_key(a) < reading_key(b); });
  boxes.erase(std::unique(boxes.begin(), boxes.end()), boxes.end());
  return boxes;
}

std::string serialize_tsr(std::span<const TableObject> objects) {
  std::string out;
  for (const TableObject& obj : canonicalize(std::vector<TableObject>(objects.begin(), objects.end()))) {
    if (!out.empty()) out.push_back('\n');
    out.append(surface_string(obj.cls));
    out.push_back(' ');
    out.append(format_bbox(obj.bbox));
  }
  return out;
}

std::string serialize_td(std::span<const BBox> boxes) {
  std::string out;
  for (const BBox& box : canonicalize(std::vector<BBox>(boxes.begin(), boxes.end()))) {
    if (!out.empty()) out.push_back('\n');
    out.append(format_bbox(box));
  }
  return out;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(ch);
    }
  }
  return out;
}

}  // namespace tabkit

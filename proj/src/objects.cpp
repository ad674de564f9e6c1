#include "tabkit/objects.hpp"

#include <cctype>
#include <string>

namespace tabkit {

std::string_view surface_string(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::TableColumn: return "table column";
    case ObjectClass::TableRow: return "table row";
    case ObjectClass::ColumnHeader: return "table column header";
    case ObjectClass::ProjectedRowHeader: return "table projected row header";
    case ObjectClass::SpanningCell: return "table spanning cell";
  }
  return "";
}

std::optional<ObjectClass> object_class_from_string(std::string_view text) {
  // Case-insensitive, tolerant of repeated inner whitespace.
  std::string norm;
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      if (!norm.empty() && norm.back() != ' ') norm.push_back(' ');
    } else {
      norm.push_back(static_cast<char>(std::tolower(uc)));
    }
  }
  while (!norm.empty() && norm.back() == ' ') norm.pop_back();
  for (ObjectClass cls : kAllObjectClasses) {
    if (norm == surface_string(cls)) return cls;
  }
  return std::nullopt;
}

}  // namespace tabkit

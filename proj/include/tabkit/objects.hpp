#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "tabkit/bbox.hpp"

namespace tabkit {

// The five structure classes. Declaration order is the canonical
// serialization priority.
enum class ObjectClass {
  TableColumn,
  TableRow,
  ColumnHeader,
  ProjectedRowHeader,
  SpanningCell,
};

inline constexpr std::array<ObjectClass, 5> kAllObjectClasses = {
    ObjectClass::TableColumn, ObjectClass::TableRow, ObjectClass::ColumnHeader,
    ObjectClass::ProjectedRowHeader, ObjectClass::SpanningCell};

// Wire names: "table column", "table row", "table column header",
// "table projected row header", "table spanning cell".
std::string_view surface_string(ObjectClass cls);
std::optional<ObjectClass> object_class_from_string(std::string_view text);

struct TableObject {
  ObjectClass cls;
  BBox bbox;

  bool operator==(const TableObject&) const = default;
};

}  // namespace tabkit

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tabkit/grid.hpp"

namespace tabkit {

enum class NodeKind { Table, HeaderSection, BodySection, Row, Cell };

// Ordered labeled tree node. Two nodes carry the same label when kind,
// rowspan and colspan all match; text is never part of the label.
struct TreeNode {
  NodeKind kind = NodeKind::Table;
  std::size_t rowspan = 1;
  std::size_t colspan = 1;
  std::vector<TreeNode> children;

  bool same_label(const TreeNode& other) const {
    return kind == other.kind && rowspan == other.rowspan && colspan == other.colspan;
  }
  std::size_t node_count() const;

  bool operator==(const TreeNode&) const = default;
};

using TableTree = TreeNode;

struct TreeOptions {
  // When false, header rows hang directly off the table root like body rows.
  bool header_sections = true;
};

// table -> [thead -> header rows, tbody -> body rows] -> cells when the grid
// has a header prefix; table -> rows -> cells otherwise. Requires a valid grid.
TableTree build_table_tree(const TableGrid& grid, const TreeOptions& options = {});

// Compact bracket form, e.g. "table(tr(td,td[1x2]))". Used in diagnostics and tests.
std::string to_string(const TreeNode& node);

}  // namespace tabkit

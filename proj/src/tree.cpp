#include "tabkit/tree.hpp"

#include <algorithm>

namespace tabkit {

std::size_t TreeNode::node_count() const {
  std::size_t n = 1;
  for (const TreeNode& child : children) n += child.node_count();
  return n;
}

TableTree build_table_tree(const TableGrid& grid, const TreeOptions& options) {
  require_valid_grid(grid);
  std::vector<std::vector<const GridCell*>> by_row(grid.n_rows);
  for (const GridCell& cell : grid.cells) by_row[cell.row].push_back(&cell);

  auto make_row = [&](std::size_t r) {
    auto& anchors = by_row[r];
    std::sort(anchors.begin(), anchors.end(),
              [](const GridCell* a, const GridCell* b) { return a->col < b->col; });
    TreeNode row{NodeKind::Row, 1, 1, {}};
    for (const GridCell* cell : anchors) {
      row.children.push_back({NodeKind::Cell, cell->rowspan, cell->colspan, {}});
    }
    return row;
  };

  TableTree root{NodeKind::Table, 1, 1, {}};
  const std::size_t header = grid.header_rows();
  if (options.header_sections && header > 0) {
    TreeNode head{NodeKind::HeaderSection, 1, 1, {}};
    for (std::size_t r = 0; r < header; ++r) head.children.push_back(make_row(r));
    root.children.push_back(std::move(head));
    if (header < grid.n_rows) {
      TreeNode body{NodeKind::BodySection, 1, 1, {}};
      for (std::size_t r = header; r < grid.n_rows; ++r) body.children.push_back(make_row(r));
      root.children.push_back(std::move(body));
    }
  } else {
    for (std::size_t r = 0; r < grid.n_rows; ++r) root.children.push_back(make_row(r));
  }
  return root;
}

std::string to_string(const TreeNode& node) {
  std::string out;
  switch (node.kind) {
    case NodeKind::Table: out = "table"; break;
    case NodeKind::HeaderSection: out = "thead"; break;
    case NodeKind::BodySection: out = "tbody"; break;
    case NodeKind::Row: out = "tr"; break;
    case NodeKind::Cell: out = "td"; break;
  }
  if (node.rowspan != 1 || node.colspan != 1) {
    out += "[" + std::to_string(node.rowspan) + "x" + std::to_string(node.colspan) + "]";
  }
  if (!node.children.empty()) {
    out += "(";
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) out += ",";
      out += to_string(node.children[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace tabkit

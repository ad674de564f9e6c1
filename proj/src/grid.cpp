#include "tabkit/grid.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace tabkit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::string where(std::size_t r, std::size_t c) {
  return "(" + std::to_string(r) + "," + std::to_string(c) + ")";
}

}  // namespace

std::vector<std::size_t> TableGrid::occupancy() const {
  std::vector<std::size_t> owner(size(), kNone);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const GridCell& cell = cells[i];
    if (cell.rowspan == 0 || cell.colspan == 0 || cell.row_end() > n_rows ||
        cell.col_end() > n_cols) {
      throw Error(ErrorCode::InvalidGrid, "cell at " + where(cell.row, cell.col) + " out of bounds");
    }
    for (std::size_t r = cell.row; r < cell.row_end(); ++r) {
      for (std::size_t c = cell.col; c < cell.col_end(); ++c) {
        std::size_t& slot = owner[r * n_cols + c];
        if (slot != kNone) throw Error(ErrorCode::InvalidGrid, "overlap at " + where(r, c));
        slot = i;
      }
    }
  }
  for (std::size_t p = 0; p < owner.size(); ++p) {
    if (owner[p] == kNone) {
      throw Error(ErrorCode::InvalidGrid, "uncovered position " + where(p / n_cols, p % n_cols));
    }
  }
  return owner;
}

std::size_t TableGrid::header_rows() const {
  std::size_t k = 0;
  for (const GridCell& cell : cells) {
    if (cell.is_column_header) k = std::max(k, cell.row_end());
  }
  return std::min(k, n_rows);
}

void TableGrid::sort_cells() {
  std::stable_sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
}

Diagnostics grid_validate(const TableGrid& grid) {
  Diagnostics out;
  std::vector<int> cover(grid.size(), 0);
  std::vector<bool> header_row(grid.n_rows, false);

  for (const GridCell& cell : grid.cells) {
    const std::string at = where(cell.row, cell.col);
    if (cell.rowspan == 0 || cell.colspan == 0) {
      out.push_back({DiagnosticKind::InvalidSpan, 0, "zero span at " + at});
      continue;
    }
    if (cell.row >= grid.n_rows || cell.col >= grid.n_cols || cell.row_end() > grid.n_rows ||
        cell.col_end() > grid.n_cols) {
      out.push_back({DiagnosticKind::SpanOutOfBounds, 0, "span exceeds grid at " + at});
    }
    const std::size_t r_end = std::min(cell.row_end(), grid.n_rows);
    const std::size_t c_end = std::min(cell.col_end(), grid.n_cols);
    for (std::size_t r = cell.row; r < r_end; ++r) {
      if (cell.is_column_header) header_row[r] = true;
      for (std::size_t c = cell.col; c < c_end; ++c) ++cover[r * grid.n_cols + c];
    }
    if (cell.is_projected_row_header &&
        (cell.col != 0 || cell.colspan != grid.n_cols || cell.rowspan != 1 ||
         cell.is_column_header)) {
      out.push_back({DiagnosticKind::ProjectedRowHeaderShape, 0,
                     "projected row header at " + at + " must be a single full-width body row"});
    }
  }

  for (std::size_t p = 0; p < cover.size(); ++p) {
    const std::string at = where(p / grid.n_cols, p % grid.n_cols);
    if (cover[p] > 1) out.push_back({DiagnosticKind::OverlappingSpan, 0, "overlap at " + at});
    if (cover[p] == 0) out.push_back({DiagnosticKind::UncoveredPosition, 0, "uncovered " + at});
  }

  std::size_t k = 0;
  while (k < grid.n_rows && header_row[k]) ++k;
  const bool prefix_ok = std::find(header_row.begin() + static_cast<std::ptrdiff_t>(k),
                                   header_row.end(), true) == header_row.end();
  if (!prefix_ok) {
    out.push_back({DiagnosticKind::HeaderNotTopPrefix, 0,
                   "column header rows do not form a prefix starting at row 0"});
  } else {
    for (const GridCell& cell : grid.cells) {
      if (!cell.is_column_header && cell.row < k) {
        out.push_back({DiagnosticKind::MixedHeaderRow, 0,
                       "unflagged cell inside header rows at " + where(cell.row, cell.col)});
      }
    }
  }
  return out;
}

void require_valid_grid(const TableGrid& grid) {
  const Diagnostics diags = grid_validate(grid);
  if (!diags.empty()) {
    throw Error(ErrorCode::InvalidGrid,
                std::string(to_string(diags.front().kind)) + ": " + diags.front().message);
  }
}

bool structurally_equal(const TableGrid& a, const TableGrid& b, bool compare_text) {
  if (a.n_rows != b.n_rows || a.n_cols != b.n_cols || a.cells.size() != b.cells.size()) {
    return false;
  }
  auto key = [compare_text](const GridCell& c) {
    return std::make_tuple(c.row, c.col, c.rowspan, c.colspan, c.is_column_header,
                           c.is_projected_row_header,
                           compare_text ? c.text.value_or(std::string{}) : std::string{});
  };
  using Key = decltype(key(GridCell{}));
  std::vector<Key> ka, kb;
  for (const GridCell& c : a.cells) ka.push_back(key(c));
  for (const GridCell& c : b.cells) kb.push_back(key(c));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

void normalize_header_prefix(TableGrid& grid, Diagnostics& diagnostics) {
  std::vector<bool> marked(grid.n_rows, false);
  for (const GridCell& cell : grid.cells) {
    if (!cell.is_column_header) continue;
    for (std::size_t r = cell.row; r < std::min(cell.row_end(), grid.n_rows); ++r) marked[r] = true;
  }
  std::size_t k = 0;
  while (k < grid.n_rows && marked[k]) ++k;

  for (bool grew = k > 0; grew;) {
    grew = false;
    for (const GridCell& cell : grid.cells) {
      const std::size_t end = std::min(cell.row_end(), grid.n_rows);
      if (cell.row < k && end > k) {
        k = end;
        grew = true;
      }
    }
  }

  for (GridCell& cell : grid.cells) {
    const bool inside = cell.row < k;
    if (cell.is_column_header && !inside) {
      diagnostics.push_back({DiagnosticKind::HeaderNotTopPrefix, 0,
                             "header flag dropped below the header prefix at " +
                                 where(cell.row, cell.col)});
    }
    cell.is_column_header = inside;
    if (inside) cell.is_projected_row_header = false;
  }
}

}  // namespace tabkit

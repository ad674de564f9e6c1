#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tabkit/bbox.hpp"
#include "tabkit/error.hpp"

namespace tabkit {

// An anchored cell. The anchor sits at (row, col) and covers
// rowspan x colspan grid positions; the non-anchor positions it covers are
// its continuations.
struct GridCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::size_t rowspan = 1;
  std::size_t colspan = 1;
  bool is_column_header = false;
  bool is_projected_row_header = false;
  std::optional<std::string> text;
  std::optional<BBox> bbox;

  std::size_t row_end() const { return row + rowspan; }
  std::size_t col_end() const { return col + colspan; }
  bool covers(std::size_t r, std::size_t c) const {
    return r >= row && r < row_end() && c >= col && c < col_end();
  }

  bool operator==(const GridCell&) const = default;
};

// Logical R x C table. A well-formed grid has every position covered by
// exactly one cell and column-header cells confined to a top row prefix;
// grid_validate reports every way a grid falls short of that.
struct TableGrid {
  std::size_t n_rows = 0;
  std::size_t n_cols = 0;
  std::vector<GridCell> cells;

  std::size_t size() const { return n_rows * n_cols; }
  bool empty() const { return size() == 0; }

  // Position -> index into cells, row-major. Requires a valid grid; throws
  // Error(InvalidGrid) on overlap, gap or out-of-bounds span.
  std::vector<std::size_t> occupancy() const;

  // Number of leading rows that belong to the column header.
  std::size_t header_rows() const;

  // Sorts cells row-major by anchor.
  void sort_cells();

  bool operator==(const TableGrid&) const = default;
};

Diagnostics grid_validate(const TableGrid& grid);

// Throws Error(InvalidGrid) carrying the first diagnostic when grid_validate
// is non-empty.
void require_valid_grid(const TableGrid& grid);

// Compares dimensions, spans and header flags; ignores text and boxes unless
// asked. Cell order does not matter.
bool structurally_equal(const TableGrid& a, const TableGrid& b, bool compare_text = false);

// Makes the header flags a consistent top prefix: the prefix is the leading
// run of rows touched by a flagged cell, closed under row spans; every cell
// anchored inside it is flagged and every cell outside is cleared. Cells that
// lose their flag are reported as HeaderNotTopPrefix.
void normalize_header_prefix(TableGrid& grid, Diagnostics& diagnostics);

}  // namespace tabkit

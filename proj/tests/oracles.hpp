#pragma once

// Brute-force reference implementations. Deliberately naive and sharing no
// code with the library algorithms they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabkit/fixtures.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/tree.hpp"

namespace oracle {

// ------------------------------------------------------------ tree edits

struct FlatTree {
  std::vector<std::size_t> label;  // encoded kind/rowspan/colspan
  std::vector<int> parent;         // preorder parent, -1 for the root
};

inline std::size_t encode(const tabkit::TreeNode& n) {
  return static_cast<std::size_t>(n.kind) * 1000000 + n.rowspan * 1000 + n.colspan;
}

inline void flatten(const tabkit::TreeNode& node, int parent, FlatTree& out) {
  const int self = static_cast<int>(out.label.size());
  out.label.push_back(encode(node));
  out.parent.push_back(parent);
  for (const auto& child : node.children) flatten(child, self, out);
}

inline FlatTree flatten(const tabkit::TreeNode& root) {
  FlatTree out;
  flatten(root, -1, out);
  return out;
}

inline bool is_ancestor(const FlatTree& t, int a, int d) {
  for (int p = t.parent[d]; p >= 0; p = t.parent[p])
    if (p == a) return true;
  return false;
}

// Minimum-cost edit script by exhaustive enumeration of edit mappings: each
// node of A is deleted or mapped to a node of B so that preorder and
// ancestry are preserved. Any edit script induces such a mapping with the
// same cost (deleted + inserted + relabelled), and vice versa.
inline std::size_t tree_edit_distance(const tabkit::TreeNode& a, const tabkit::TreeNode& b) {
  const FlatTree ta = flatten(a);
  const FlatTree tb = flatten(b);
  const int na = static_cast<int>(ta.label.size());
  const int nb = static_cast<int>(tb.label.size());
  std::vector<std::pair<int, int>> mapped;
  std::size_t best = std::numeric_limits<std::size_t>::max();

  std::function<void(int, int, std::size_t)> visit = [&](int i, int last_j, std::size_t relabels) {
    if (i == na) {
      const std::size_t m = mapped.size();
      best = std::min(best, (na - m) + (nb - m) + relabels);
      return;
    }
    visit(i + 1, last_j, relabels);  // delete node i
    for (int j = last_j + 1; j < nb; ++j) {
      bool ok = true;
      for (const auto& [pi, pj] : mapped) {
        if (is_ancestor(ta, pi, i) != is_ancestor(tb, pj, j)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mapped.emplace_back(i, j);
      visit(i + 1, j, relabels + (ta.label[i] != tb.label[j] ? 1 : 0));
      mapped.pop_back();
    }
  };
  visit(0, -1, 0);
  return best;
}

// Random ordered tree: node i > 0 hangs under a uniformly drawn earlier node.
inline tabkit::TreeNode random_tree(tabkit::Rng& rng, std::size_t nodes) {
  std::vector<std::size_t> parent(nodes, 0);
  for (std::size_t i = 1; i < nodes; ++i) parent[i] = rng.between(0, i - 1);
  std::vector<tabkit::TreeNode> flat(nodes);
  for (tabkit::TreeNode& n : flat) {
    n.kind = static_cast<tabkit::NodeKind>(rng.between(0, 4));
    n.rowspan = rng.between(1, 2);
  }
  for (std::size_t i = nodes; i-- > 1;) {
    auto& siblings = flat[parent[i]].children;
    siblings.insert(siblings.begin(), std::move(flat[i]));
  }
  return flat[0];
}

// --------------------------------------------------------------- GriTS

struct Position {
  std::size_t rowspan, colspan, row_off, col_off;
  std::string text;
  bool operator==(const Position&) const = default;
};

inline std::vector<std::vector<Position>> positions(const tabkit::TableGrid& g) {
  std::vector<std::vector<Position>> out(g.n_rows, std::vector<Position>(g.n_cols));
  for (const auto& c : g.cells)
    for (std::size_t r = c.row; r < c.row + c.rowspan; ++r)
      for (std::size_t k = c.col; k < c.col + c.colspan; ++k)
        out[r][k] = {c.rowspan, c.colspan, r - c.row, k - c.col, c.text.value_or("")};
  return out;
}

inline std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

// Best similarity sum over every pair of equal-length row and column
// subsequences, by plain enumeration of subsets.
template <class F>
double best_substructure(std::size_t ra, std::size_t ca, std::size_t rb, std::size_t cb, F&& f) {
  const auto rows_a = subsets(ra), rows_b = subsets(rb), cols_a = subsets(ca), cols_b = subsets(cb);
  double best = 0.0;
  for (const auto& ra_s : rows_a)
    for (const auto& rb_s : rows_b) {
      if (ra_s.size() != rb_s.size()) continue;
      for (const auto& ca_s : cols_a)
        for (const auto& cb_s : cols_b) {
          if (ca_s.size() != cb_s.size()) continue;
          double sum = 0.0;
          for (std::size_t x = 0; x < ra_s.size(); ++x)
            for (std::size_t y = 0; y < ca_s.size(); ++y) sum += f(ra_s[x], ca_s[y], rb_s[x], cb_s[y]);
          best = std::max(best, sum);
        }
    }
  return best;
}

inline double grits_top(const tabkit::TableGrid& a, const tabkit::TableGrid& b) {
  const std::size_t na = a.n_rows * a.n_cols, nb = b.n_rows * b.n_cols;
  if (na + nb == 0) return 1.0;
  const auto pa = positions(a), pb = positions(b);
  const double s = best_substructure(a.n_rows, a.n_cols, b.n_rows, b.n_cols,
                                     [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
                                       const Position& x = pa[i][j];
                                       const Position& y = pb[k][l];
                                       return x.rowspan == y.rowspan && x.colspan == y.colspan &&
                                                      x.row_off == y.row_off && x.col_off == y.col_off
                                                  ? 1.0
                                                  : 0.0;
                                     });
  return 2.0 * s / static_cast<double>(na + nb);
}

// ------------------------------------------------------------------ LCS

inline bool is_subsequence(const std::string& s, const std::string& of) {
  std::size_t j = 0;
  for (char ch : of)
    if (j < s.size() && s[j] == ch) ++j;
  return j == s.size();
}

// Longest subsequence of a (all 2^|a| of them) that is also a subsequence of b.
inline std::size_t lcs_length(const std::string& a, const std::string& b) {
  std::size_t best = 0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << a.size()); ++mask) {
    std::string s;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (mask >> i & 1) s.push_back(a[i]);
    if (s.size() > best && is_subsequence(s, b)) best = s.size();
  }
  return best;
}

// ------------------------------------------------------- span placement

struct SpanRequest {
  std::size_t rowspan, colspan;
};

struct Placement {
  std::size_t n_rows = 0, n_cols = 0;
  std::vector<tabkit::GridCell> cells;  // document order
};

// Tries every anchor column for every cell (document order, strictly
// increasing inside a row, row spans clipped at the last row) and returns
// all placements that tile a full rectangle without overlap.
inline std::vector<Placement> place_spans(const std::vector<std::vector<SpanRequest>>& rows) {
  const std::size_t n_rows = rows.size();
  std::size_t max_width = 0;
  for (const auto& row : rows) {
    std::size_t w = 0;
    for (const auto& c : row) w += c.colspan;
    max_width += w;
  }
  std::vector<std::pair<std::size_t, SpanRequest>> flat;
  for (std::size_t r = 0; r < n_rows; ++r)
    for (const auto& c : rows[r]) flat.push_back({r, {std::min(c.rowspan, n_rows - r), c.colspan}});

  std::vector<Placement> found;
  std::vector<std::vector<char>> used(n_rows, std::vector<char>(max_width + 1, 0));
  std::vector<std::size_t> anchor(flat.size());

  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (i == flat.size()) {
      std::size_t width = 0;
      for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < max_width; ++c)
          if (used[r][c]) width = std::max(width, c + 1);
      for (std::size_t r = 0; r < n_rows; ++r)
        for (std::size_t c = 0; c < width; ++c)
          if (!used[r][c]) return;
      Placement p{n_rows, width, {}};
      for (std::size_t k = 0; k < flat.size(); ++k) {
        tabkit::GridCell cell;
        cell.row = flat[k].first;
        cell.col = anchor[k];
        cell.rowspan = flat[k].second.rowspan;
        cell.colspan = flat[k].second.colspan;
        p.cells.push_back(cell);
      }
      found.push_back(std::move(p));
      return;
    }
    const auto [r, req] = flat[i];
    const std::size_t lo = i > 0 && flat[i - 1].first == r ? anchor[i - 1] + 1 : 0;
    for (std::size_t c = lo; c + req.colspan <= max_width; ++c) {
      bool free = true;
      for (std::size_t rr = r; free && rr < r + req.rowspan; ++rr)
        for (std::size_t cc = c; free && cc < c + req.colspan; ++cc) free = !used[rr][cc];
      if (!free) continue;
      // A hole skipped in this row could never be filled later.
      bool gapless = true;
      for (std::size_t cc = lo; gapless && cc < c; ++cc) gapless = used[r][cc];
      if (!gapless) continue;
      for (std::size_t rr = r; rr < r + req.rowspan; ++rr)
        for (std::size_t cc = c; cc < c + req.colspan; ++cc) used[rr][cc] = 1;
      anchor[i] = c;
      visit(i + 1);
      for (std::size_t rr = r; rr < r + req.rowspan; ++rr)
        for (std::size_t cc = c; cc < c + req.colspan; ++cc) used[rr][cc] = 0;
    }
  };
  visit(0);
  return found;
}

}  // namespace oracle

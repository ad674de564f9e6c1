#include <algorithm>
#include <tuple>

#include "tabkit/metrics.hpp"

namespace tabkit {

namespace {

struct Position {
  const GridCell* cell = nullptr;
  std::size_t row_offset = 0;
  std::size_t col_offset = 0;
};

std::vector<Position> positions(const TableGrid& grid) {
  const std::vector<std::size_t> owner = grid.occupancy();
  std::vector<Position> out(owner.size());
  for (std::size_t p = 0; p < owner.size(); ++p) {
    const GridCell& cell = grid.cells[owner[p]];
    out[p] = {&cell, p / grid.n_cols - cell.row, p % grid.n_cols - cell.col};
  }
  return out;
}

bool has_location(const TableGrid& grid) {
  return std::any_of(grid.cells.begin(), grid.cells.end(),
                     [](const GridCell& c) { return c.bbox && is_valid(*c.bbox); });
}

double pair_similarity(const Position& a, const Position& b, GritsKind kind) {
  switch (kind) {
    case GritsKind::Top:
      return std::tie(a.cell->rowspan, a.cell->colspan, a.row_offset, a.col_offset) ==
                     std::tie(b.cell->rowspan, b.cell->colspan, b.row_offset, b.col_offset)
                 ? 1.0
                 : 0.0;
    case GritsKind::Cont: {
      const std::string_view ta = a.cell->text ? std::string_view(*a.cell->text) : std::string_view{};
      const std::string_view tb = b.cell->text ? std::string_view(*b.cell->text) : std::string_view{};
      if (ta.empty() && tb.empty()) return 1.0;
      if (ta == tb) return 1.0;
      return 2.0 * static_cast<double>(lcs_length(ta, tb)) / static_cast<double>(ta.size() + tb.size());
    }
    case GritsKind::Loc: {
      if (!a.cell->bbox || !b.cell->bbox) return 0.0;
      if (!is_valid(*a.cell->bbox) || !is_valid(*b.cell->bbox)) return 0.0;
      return bbox_iou(*a.cell->bbox, *b.cell->bbox);
    }
  }
  return 0.0;
}

double alignment_score(const SimilarityTensor& sim, const IndexPairs& rows, const IndexPairs& cols) {
  double total = 0.0;
  for (const auto& [i, k] : rows)
    for (const auto& [j, l] : cols) total += sim.at(i, j, k, l);
  return total;
}

// Every pair of equal-length increasing index sequences drawn from [0,n) and
// [0,m), in lexicographic order.
std::vector<IndexPairs> all_pairings(std::size_t n, std::size_t m) {
  std::vector<std::vector<std::size_t>> subsets_n, subsets_m;
  auto subsets = [](std::size_t size, std::vector<std::vector<std::size_t>>& out) {
    for (unsigned mask = 0; mask < (1u << size); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < size; ++i)
        if (mask & (1u << i)) s.push_back(i);
      out.push_back(std::move(s));
    }
  };
  subsets(n, subsets_n);
  subsets(m, subsets_m);
  std::vector<IndexPairs> out;
  for (const auto& a : subsets_n) {
    for (const auto& b : subsets_m) {
      if (a.size() != b.size()) continue;
      IndexPairs pairs;
      for (std::size_t t = 0; t < a.size(); ++t) pairs.emplace_back(a[t], b[t]);
      out.push_back(std::move(pairs));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One alternating run. rows_first picks which axis the initial, cell-level
// 1D alignment is computed for.
Alignment alternate(const SimilarityTensor& sim, bool rows_first) {
  const std::size_t ra = sim.rows_a(), ca = sim.cols_a(), rb = sim.rows_b(), cb = sim.cols_b();
  Alignment best;
  best.score = -1.0;

  IndexPairs rows, cols;
  std::vector<double> scores;
  std::vector<double> inner;
  double total = 0.0;

  if (rows_first) {
    scores.assign(ra * rb, 0.0);
    for (std::size_t i = 0; i < ra; ++i) {
      for (std::size_t k = 0; k < rb; ++k) {
        inner.assign(ca * cb, 0.0);
        for (std::size_t j = 0; j < ca; ++j)
          for (std::size_t l = 0; l < cb; ++l) inner[j * cb + l] = sim.at(i, j, k, l);
        align_1d(inner, ca, cb, &scores[i * rb + k]);
      }
    }
    rows = align_1d(scores, ra, rb, &total);
  } else {
    scores.assign(ca * cb, 0.0);
    for (std::size_t j = 0; j < ca; ++j) {
      for (std::size_t l = 0; l < cb; ++l) {
        inner.assign(ra * rb, 0.0);
        for (std::size_t i = 0; i < ra; ++i)
          for (std::size_t k = 0; k < rb; ++k) inner[i * rb + k] = sim.at(i, j, k, l);
        align_1d(inner, ra, rb, &scores[j * cb + l]);
      }
    }
    cols = align_1d(scores, ca, cb, &total);
  }

  // Each step is optimal for its axis given the other, so scores never drop;
  // stop at the first step without strict improvement.
  bool fix_rows = rows_first;
  for (int step = 0; step < 2 * kMaxFactoredIterations; ++step) {
    if (fix_rows) {
      scores.assign(ca * cb, 0.0);
      for (const auto& [i, k] : rows)
        for (std::size_t j = 0; j < ca; ++j)
          for (std::size_t l = 0; l < cb; ++l) scores[j * cb + l] += sim.at(i, j, k, l);
      cols = align_1d(scores, ca, cb, &total);
    } else {
      scores.assign(ra * rb, 0.0);
      for (const auto& [j, l] : cols)
        for (std::size_t i = 0; i < ra; ++i)
          for (std::size_t k = 0; k < rb; ++k) scores[i * rb + k] += sim.at(i, j, k, l);
      rows = align_1d(scores, ra, rb, &total);
    }
    if (!(total > best.score)) break;
    best.score = total;
    best.rows = rows;
    best.cols = cols;
    best.iterations = step / 2 + 1;
    fix_rows = !fix_rows;
  }
  return best;
}

IndexPairs swap_pairs(IndexPairs pairs) {
  for (auto& [a, b] : pairs) std::swap(a, b);
  return pairs;
}

}  // namespace

std::string_view to_string(GritsKind kind) {
  switch (kind) {
    case GritsKind::Top: return "grits-top";
    case GritsKind::Cont: return "grits-cont";
    case GritsKind::Loc: return "grits-loc";
  }
  return "";
}

SimilarityTensor::SimilarityTensor(std::size_t rows_a, std::size_t cols_a, std::size_t rows_b,
                                   std::size_t cols_b)
    : ra_(rows_a), ca_(cols_a), rb_(rows_b), cb_(cols_b), values_(rows_a * cols_a * rows_b * cols_b, 0.0) {}

SimilarityTensor SimilarityTensor::swapped() const {
  SimilarityTensor out(rb_, cb_, ra_, ca_);
  for (std::size_t i = 0; i < ra_; ++i)
    for (std::size_t j = 0; j < ca_; ++j)
      for (std::size_t k = 0; k < rb_; ++k)
        for (std::size_t l = 0; l < cb_; ++l) out.at(k, l, i, j) = at(i, j, k, l);
  return out;
}

SimilarityTensor cell_similarity(const TableGrid& a, const TableGrid& b, GritsKind kind) {
  const auto pa = positions(a);
  const auto pb = positions(b);
  SimilarityTensor sim(a.n_rows, a.n_cols, b.n_rows, b.n_cols);
  for (std::size_t i = 0; i < a.n_rows; ++i)
    for (std::size_t j = 0; j < a.n_cols; ++j)
      for (std::size_t k = 0; k < b.n_rows; ++k)
        for (std::size_t l = 0; l < b.n_cols; ++l)
          sim.at(i, j, k, l) = pair_similarity(pa[i * a.n_cols + j], pb[k * b.n_cols + l], kind);
  return sim;
}

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

IndexPairs align_1d(std::span<const double> scores, std::size_t n, std::size_t m, double* total) {
  std::vector<double> dp((n + 1) * (m + 1), 0.0);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return dp[i * (m + 1) + j]; };
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      at(i, j) = std::max({at(i - 1, j), at(i, j - 1), at(i - 1, j - 1) + scores[(i - 1) * m + (j - 1)]});
    }
  }
  if (total) *total = at(n, m);

  IndexPairs pairs;
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    const double s = scores[(i - 1) * m + (j - 1)];
    if (s > 0.0 && at(i, j) == at(i - 1, j - 1) + s) {
      pairs.emplace_back(i - 1, j - 1);
      --i;
      --j;
    } else if (at(i, j) == at(i - 1, j)) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(pairs.begin(), pairs.end());
  return pairs;
}

Alignment mss_exact(const SimilarityTensor& sim) {
  if (sim.rows_a() > kExactOracleLimit || sim.cols_a() > kExactOracleLimit ||
      sim.rows_b() > kExactOracleLimit || sim.cols_b() > kExactOracleLimit) {
    throw Error(ErrorCode::OversizeForOracle, "exhaustive search is limited to 4 x 4 grids");
  }
  const auto row_options = all_pairings(sim.rows_a(), sim.rows_b());
  const auto col_options = all_pairings(sim.cols_a(), sim.cols_b());
  Alignment best;
  best.score = -1.0;
  for (const IndexPairs& rows : row_options) {
    for (const IndexPairs& cols : col_options) {
      const double score = alignment_score(sim, rows, cols);
      if (score > best.score) {
        best.score = score;
        best.rows = rows;
        best.cols = cols;
      }
    }
  }
  best.iterations = 1;
  return best;
}

Alignment mss_factored(const SimilarityTensor& sim) {
  Alignment best;
  if (sim.rows_a() == 0 || sim.cols_a() == 0 || sim.rows_b() == 0 || sim.cols_b() == 0) return best;

  // Both argument orders are searched so the score is symmetric in A and B
  // regardless of how the 1D alignments break ties.
  const SimilarityTensor swapped = sim.swapped();
  best.score = -1.0;
  for (bool rows_first : {true, false}) {
    Alignment forward = alternate(sim, rows_first);
    if (forward.score > best.score) best = std::move(forward);
    Alignment backward = alternate(swapped, rows_first);
    if (backward.score > best.score) {
      best.score = backward.score;
      best.rows = swap_pairs(std::move(backward.rows));
      best.cols = swap_pairs(std::move(backward.cols));
      best.iterations = backward.iterations;
    }
  }
  // Report the sum in the forward orientation.
  best.score = alignment_score(sim, best.rows, best.cols);
  return best;
}

GritsResult grits_detail(const TableGrid& gt, const TableGrid& pred, GritsKind kind,
                         const GritsOptions& options) {
  GritsResult out;
  out.size_gt = gt.size();
  out.size_pred = pred.size();
  if (out.size_gt == 0 && out.size_pred == 0) return out;
  if (kind == GritsKind::Loc &&
      ((out.size_gt > 0 && !has_location(gt)) || (out.size_pred > 0 && !has_location(pred)))) {
    throw Error(ErrorCode::MissingLocation, "GriTS-Loc needs cell boxes on both grids");
  }
  if (out.size_gt == 0 || out.size_pred == 0) {
    out.score = 0.0;
    return out;
  }
  const SimilarityTensor sim = cell_similarity(gt, pred, kind);
  const bool small = gt.n_rows <= kExactOracleLimit && gt.n_cols <= kExactOracleLimit &&
                     pred.n_rows <= kExactOracleLimit && pred.n_cols <= kExactOracleLimit;
  out.exact = options.exact_when_small && small;
  const Alignment best = out.exact ? mss_exact(sim) : mss_factored(sim);
  out.similarity_sum = best.score;
  out.score = std::clamp(2.0 * best.score / static_cast<double>(out.size_gt + out.size_pred), 0.0, 1.0);
  return out;
}

double grits(const TableGrid& gt, const TableGrid& pred, GritsKind kind, const GritsOptions& options) {
  return grits_detail(gt, pred, kind, options).score;
}

}  // namespace tabkit

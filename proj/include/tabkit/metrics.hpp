#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tabkit/bbox.hpp"
#include "tabkit/grid.hpp"
#include "tabkit/tree.hpp"

namespace tabkit {

// ---------------------------------------------------------------- S-TEDS

// Unit-cost ordered tree edit distance (insert, delete, relabel), computed
// with the Zhang-Shasha keyroot dynamic program.
std::size_t tree_edit_distance(const TableTree& a, const TableTree& b);

struct StedsResult {
  double score = 1.0;
  std::size_t distance = 0;
  std::size_t max_nodes = 1;
};

// Structure-only tree-edit-distance similarity:
// 1 - distance / max(|T_gt|, |T_pred|). Text is ignored.
StedsResult steds_detail(const TableGrid& gt, const TableGrid& pred, const TreeOptions& options = {});
double steds(const TableGrid& gt, const TableGrid& pred, const TreeOptions& options = {});

// ----------------------------------------------------------------- GriTS

enum class GritsKind { Top, Cont, Loc };

std::string_view to_string(GritsKind kind);

// Dense cell-pair similarity f(A[i][j], B[k][l]) for two position matrices.
class SimilarityTensor {
 public:
  SimilarityTensor(std::size_t rows_a, std::size_t cols_a, std::size_t rows_b, std::size_t cols_b);

  std::size_t rows_a() const { return ra_; }
  std::size_t cols_a() const { return ca_; }
  std::size_t rows_b() const { return rb_; }
  std::size_t cols_b() const { return cb_; }

  double at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return values_[((i * ca_ + j) * rb_ + k) * cb_ + l];
  }
  double& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return values_[((i * ca_ + j) * rb_ + k) * cb_ + l];
  }

  // Swaps the roles of A and B.
  SimilarityTensor swapped() const;

 private:
  std::size_t ra_, ca_, rb_, cb_;
  std::vector<double> values_;
};

// Builds f over every position pair. Each position carries the cell that
// covers it, so a spanning cell appears at all of its positions.
//   Top:  1 when (rowspan, colspan, offset inside the span) match, else 0.
//   Cont: 2 * LCS(a, b) / (|a| + |b|) over the cell text; empty vs empty = 1.
//   Loc:  IoU of the cell boxes; 0 when either box is missing.
SimilarityTensor cell_similarity(const TableGrid& a, const TableGrid& b, GritsKind kind);

using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;

struct Alignment {
  double score = 0.0;
  IndexPairs rows;  // (row in A, row in B), increasing in both
  IndexPairs cols;  // (col in A, col in B), increasing in both
  int iterations = 0;
};

inline constexpr std::size_t kExactOracleLimit = 4;

// Exhaustive two-dimensional most-similar-substructure search over every
// pair of equal-length row and column subsequences. First lexicographic
// alignment wins ties. Throws Error(OversizeForOracle) past 4 x 4.
Alignment mss_exact(const SimilarityTensor& sim);

// Alternating heuristic: align rows with 1D dynamic programming, fix them
// and align columns, fix those and realign rows, keeping only strict
// improvements (at most kMaxFactoredIterations rounds). Started from both
// axes and both argument orders; the best feasible alignment is returned,
// so the score never exceeds mss_exact.
Alignment mss_factored(const SimilarityTensor& sim);

inline constexpr int kMaxFactoredIterations = 10;

// Maximum-weight monotone 1D alignment of an n x m score matrix (row-major).
IndexPairs align_1d(std::span<const double> scores, std::size_t n, std::size_t m, double* total);

struct GritsOptions {
  // Use the exhaustive search when both grids are within kExactOracleLimit.
  bool exact_when_small = true;
};

struct GritsResult {
  double score = 1.0;
  double similarity_sum = 0.0;
  std::size_t size_gt = 0;
  std::size_t size_pred = 0;
  bool exact = false;
};

// 2 * S / (|A| + |B|) with S the best substructure similarity sum and |.|
// the number of grid positions. Two empty grids score 1.
// Loc throws Error(MissingLocation) when either non-empty grid has no boxes.
GritsResult grits_detail(const TableGrid& gt, const TableGrid& pred, GritsKind kind,
                         const GritsOptions& options = {});
double grits(const TableGrid& gt, const TableGrid& pred, GritsKind kind,
             const GritsOptions& options = {});

// Character-level longest common subsequence length.
std::size_t lcs_length(std::string_view a, std::string_view b);

// ------------------------------------------------------------- detection

struct DetectionResult {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  std::size_t true_positives = 0;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
};

// One-to-one greedy matching in descending IoU order; a pair counts when its
// IoU reaches the threshold. Empty vs empty is (1, 1, 1); with no ground
// truth precision is 0 and recall 1; with no predictions precision is 1 and
// recall 0. Throws Error(InvalidArgument) unless 0 < threshold <= 1.
DetectionResult detection_prf(std::span<const BBox> gt, std::span<const BBox> pred,
                              double iou_threshold = 0.75);

// Precision/recall/F1 from pooled counts.
DetectionResult detection_from_counts(std::size_t true_positives, std::size_t n_gt, std::size_t n_pred);

// ------------------------------------------------------------------ TQA

std::string normalize_answer(std::string_view text);

// Case-insensitive, whitespace-normalized containment of the answer.
bool tqa_correct(std::string_view gt_answer, std::string_view response);

// Throws Error(EmptyEvaluation) on an empty list.
double tqa_accuracy(std::span<const std::pair<std::string, std::string>> pairs);

}  // namespace tabkit

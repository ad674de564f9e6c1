#include <algorithm>
#include <cctype>
#include <tuple>

#include "tabkit/metrics.hpp"

namespace tabkit {

DetectionResult detection_from_counts(std::size_t tp, std::size_t n_gt, std::size_t n_pred) {
  DetectionResult out;
  out.true_positives = tp;
  out.n_gt = n_gt;
  out.n_pred = n_pred;
  if (n_gt == 0 && n_pred == 0) return out;
  if (n_gt == 0 || n_pred == 0) {
    out.precision = n_pred == 0 ? 1.0 : 0.0;
    out.recall = n_gt == 0 ? 1.0 : 0.0;
    out.f1 = 0.0;
    return out;
  }
  out.precision = static_cast<double>(tp) / static_cast<double>(n_pred);
  out.recall = static_cast<double>(tp) / static_cast<double>(n_gt);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

DetectionResult detection_prf(std::span<const BBox> gt, std::span<const BBox> pred,
                              double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "IoU threshold must lie in (0, 1]");
  }
  struct Candidate {
    double iou;
    std::size_t g, p;
  };
  std::vector<Candidate> candidates;
  for (std::size_t g = 0; g < gt.size(); ++g) {
    for (std::size_t p = 0; p < pred.size(); ++p) {
      const double iou = bbox_iou(gt[g], pred[p]);
      if (iou >= iou_threshold) candidates.push_back({iou, g, p});
    }
  }
  // Ties are broken on box coordinates, not list positions, so the match
  // count does not depend on input order.
  auto coords = [](const BBox& b) { return std::make_tuple(b.x1, b.y1, b.x2, b.y2); };
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    return std::tuple_cat(coords(gt[a.g]), coords(pred[a.p])) <
           std::tuple_cat(coords(gt[b.g]), coords(pred[b.p]));
  });
  std::vector<bool> gt_used(gt.size(), false), pred_used(pred.size(), false);
  std::size_t tp = 0;
  for (const Candidate& c : candidates) {
    if (gt_used[c.g] || pred_used[c.p]) continue;
    gt_used[c.g] = pred_used[c.p] = true;
    ++tp;
  }
  return detection_from_counts(tp, gt.size(), pred.size());
}

std::string normalize_answer(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

bool tqa_correct(std::string_view gt_answer, std::string_view response) {
  return normalize_answer(response).find(normalize_answer(gt_answer)) != std::string::npos;
}

double tqa_accuracy(std::span<const std::pair<std::string, std::string>> pairs) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyEvaluation, "no question/answer pairs");
  std::size_t correct = 0;
  for (const auto& [answer, response] : pairs) correct += tqa_correct(answer, response) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

}  // namespace tabkit

#include <algorithm>

#include "tabkit/metrics.hpp"

namespace tabkit {

namespace {

// Postorder view of a tree, 1-based as in the classic presentation.
struct Postorder {
  std::vector<const TreeNode*> node{nullptr};
  std::vector<std::size_t> leftmost{0};
  std::vector<std::size_t> keyroots;

  explicit Postorder(const TreeNode& root) {
    visit(root);
    const std::size_t n = node.size() - 1;
    // A keyroot is the highest node sharing its leftmost leaf.
    std::vector<bool> seen(n + 1, false);
    for (std::size_t i = n; i >= 1; --i) {
      if (!seen[leftmost[i]]) {
        keyroots.push_back(i);
        seen[leftmost[i]] = true;
      }
    }
    std::reverse(keyroots.begin(), keyroots.end());
  }

  std::size_t visit(const TreeNode& n) {
    std::size_t first_leaf = 0;
    for (const TreeNode& child : n.children) {
      const std::size_t child_leftmost = visit(child);
      if (first_leaf == 0) first_leaf = child_leftmost;
    }
    node.push_back(&n);
    const std::size_t index = node.size() - 1;
    leftmost.push_back(first_leaf == 0 ? index : first_leaf);
    return leftmost.back();
  }

  std::size_t size() const { return node.size() - 1; }
};

}  // namespace

std::size_t tree_edit_distance(const TableTree& a, const TableTree& b) {
  const Postorder t1(a);
  const Postorder t2(b);
  const std::size_t n1 = t1.size();
  const std::size_t n2 = t2.size();

  std::vector<std::size_t> treedist((n1 + 1) * (n2 + 1), 0);
  auto td = [&](std::size_t i, std::size_t j) -> std::size_t& { return treedist[i * (n2 + 1) + j]; };
  std::vector<std::size_t> forest;

  for (std::size_t i : t1.keyroots) {
    for (std::size_t j : t2.keyroots) {
      const std::size_t li = t1.leftmost[i];
      const std::size_t lj = t2.leftmost[j];
      const std::size_t rows = i - li + 2;
      const std::size_t cols = j - lj + 2;
      forest.assign(rows * cols, 0);
      auto fd = [&](std::size_t x, std::size_t y) -> std::size_t& { return forest[x * cols + y]; };
      for (std::size_t x = 1; x < rows; ++x) fd(x, 0) = fd(x - 1, 0) + 1;
      for (std::size_t y = 1; y < cols; ++y) fd(0, y) = fd(0, y - 1) + 1;

      for (std::size_t x = 1; x < rows; ++x) {
        const std::size_t u = li + x - 1;
        for (std::size_t y = 1; y < cols; ++y) {
          const std::size_t v = lj + y - 1;
          const std::size_t del = fd(x - 1, y) + 1;
          const std::size_t ins = fd(x, y - 1) + 1;
          if (t1.leftmost[u] == li && t2.leftmost[v] == lj) {
            const std::size_t ren = t1.node[u]->same_label(*t2.node[v]) ? 0 : 1;
            fd(x, y) = std::min({del, ins, fd(x - 1, y - 1) + ren});
            td(u, v) = fd(x, y);
          } else {
            const std::size_t p = t1.leftmost[u] - li;
            const std::size_t q = t2.leftmost[v] - lj;
            fd(x, y) = std::min({del, ins, fd(p, q) + td(u, v)});
          }
        }
      }
    }
  }
  return td(n1, n2);
}

StedsResult steds_detail(const TableGrid& gt, const TableGrid& pred, const TreeOptions& options) {
  const TableTree a = build_table_tree(gt, options);
  const TableTree b = build_table_tree(pred, options);
  StedsResult out;
  out.distance = tree_edit_distance(a, b);
  out.max_nodes = std::max(a.node_count(), b.node_count());
  out.score = 1.0 - static_cast<double>(out.distance) / static_cast<double>(out.max_nodes);
  out.score = std::clamp(out.score, 0.0, 1.0);
  return out;
}

double steds(const TableGrid& gt, const TableGrid& pred, const TreeOptions& options) {
  return steds_detail(gt, pred, options).score;
}

}  // namespace tabkit

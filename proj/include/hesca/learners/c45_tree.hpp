#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "hesca/classifier.hpp"
#include "hesca/prob.hpp"

namespace hesca {

namespace c45 {

// Weka-style pessimistic error bound: extra errors to add to the observed
// count e at a node of size n, at confidence cf.
inline double addErrs(double n, double e, double cf) {
  if (cf > 0.5) return 0.0;
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e == 0.0) return base;
    return base + e * (addErrs(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return std::max(n - e, 0.0);
  const double z = prob::normalQuantile(1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r =
      (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
      (1.0 + z * z / n);
  return r * n - e;
}

struct Node {
  int attr = -1;
  double threshold = 0.0;
  std::unique_ptr<Node> left, right;
  std::vector<double> counts;  // class counts of the train instances reaching this node
  ProbVector dist;             // Laplace-smoothed leaf distribution

  bool isLeaf() const { return attr < 0; }
};

struct SplitChoice {
  int attr = -1;
  double threshold = 0.0;
  double gainRatio = -1.0;
};

}  // namespace c45

// C4.5-style decision tree: binary numeric splits at midpoints between sorted
// distinct values, chosen by gain ratio, with pessimistic-error subtree
// replacement at confidence 0.25. Leaves hold Laplace-smoothed class counts.
//
// Splitting is allowed whenever a node is impure, holds at least minSplit
// instances and some attribute still varies; a zero-gain split is taken when
// nothing better exists, which is what lets structure like XOR be found at
// depth two.
class C45TreeClassifier final : public Classifier {
 public:
  C45TreeClassifier(int minSplit, bool prune, double pruneConfidence)
      : minSplit_(minSplit), prune_(prune), confidence_(pruneConfidence) {}

  void fit(const Dataset& data) override {
    c_ = data.c;
    m_ = data.m;
    std::vector<int> indices(data.n);
    for (int i = 0; i < data.n; ++i) indices[i] = i;
    root_ = build(data, indices);
    if (prune_) pruneNode(*root_);
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    const c45::Node* node = root_.get();
    while (!node->isLeaf()) node = x[node->attr] <= node->threshold ? node->left.get() : node->right.get();
    return node->dist;
  }

  int depth() const { return depthOf(root_.get()); }
  int leafCount() const { return leavesOf(root_.get()); }

 private:
  std::vector<double> countsOf(const Dataset& d, const std::vector<int>& idx) const {
    std::vector<double> counts(c_, 0.0);
    for (int i : idx) counts[d.labels[i]] += 1.0;
    return counts;
  }

  static void setLeafDist(c45::Node& node, int c) {
    node.dist.assign(c, 0.0);
    double total = 0.0;
    for (double v : node.counts) total += v;
    for (int j = 0; j < c; ++j) node.dist[j] = (node.counts[j] + 1.0) / (total + c);
  }

  c45::SplitChoice bestSplit(const Dataset& d, const std::vector<int>& idx) const {
    c45::SplitChoice best;
    const int n = static_cast<int>(idx.size());
    const std::vector<double> total = countsOf(d, idx);
    const double baseEntropy = entropyBits(total, n);

    std::vector<std::pair<double, int>> sorted(n);
    std::vector<double> leftCounts(c_);
    for (int attr = 0; attr < m_; ++attr) {
      for (int i = 0; i < n; ++i) sorted[i] = {d.row(idx[i])[attr], d.labels[idx[i]]};
      std::sort(sorted.begin(), sorted.end());
      std::fill(leftCounts.begin(), leftCounts.end(), 0.0);
      for (int i = 0; i + 1 < n; ++i) {
        leftCounts[sorted[i].second] += 1.0;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double nl = i + 1;
        const double nr = n - nl;
        double hl = 0.0, hr = 0.0;
        for (int j = 0; j < c_; ++j) {
          const double l = leftCounts[j];
          const double r = total[j] - l;
          if (l > 0.0) hl -= (l / nl) * std::log2(l / nl);
          if (r > 0.0) hr -= (r / nr) * std::log2(r / nr);
        }
        const double gain = baseEntropy - (nl / n) * hl - (nr / n) * hr;
        const double pl = nl / n;
        const double splitInfo = -pl * std::log2(pl) - (1.0 - pl) * std::log2(1.0 - pl);
        const double ratio = std::max(gain, 0.0) / splitInfo;
        if (ratio > best.gainRatio + 1e-12) {
          best.attr = attr;
          best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
          best.gainRatio = ratio;
        }
      }
    }
    return best;
  }

  std::unique_ptr<c45::Node> build(const Dataset& d, const std::vector<int>& idx) const {
    auto node = std::make_unique<c45::Node>();
    node->counts = countsOf(d, idx);
    setLeafDist(*node, c_);

    const int n = static_cast<int>(idx.size());
    int present = 0;
    for (double v : node->counts)
      if (v > 0.0) ++present;
    if (present <= 1 || n < minSplit_) return node;

    const c45::SplitChoice split = bestSplit(d, idx);
    if (split.attr < 0) return node;  // all attributes constant on this node

    std::vector<int> leftIdx, rightIdx;
    for (int i : idx)
      (d.row(i)[split.attr] <= split.threshold ? leftIdx : rightIdx).push_back(i);
    if (leftIdx.empty() || rightIdx.empty()) return node;

    node->attr = split.attr;
    node->threshold = split.threshold;
    node->left = build(d, leftIdx);
    node->right = build(d, rightIdx);
    return node;
  }

  // Pessimistic error of this subtree; prunes children first, then replaces
  // the node by a leaf when the leaf bound is no worse.
  double pruneNode(c45::Node& node) const {
    double total = 0.0, maxCount = 0.0;
    for (double v : node.counts) {
      total += v;
      maxCount = std::max(maxCount, v);
    }
    const double leafErrors = total - maxCount;
    const double leafEstimate = leafErrors + c45::addErrs(total, leafErrors, confidence_);
    if (node.isLeaf()) return leafEstimate;

    const double subtreeEstimate = pruneNode(*node.left) + pruneNode(*node.right);
    if (leafEstimate <= subtreeEstimate) {
      node.attr = -1;
      node.left.reset();
      node.right.reset();
      return leafEstimate;
    }
    return subtreeEstimate;
  }

  static int depthOf(const c45::Node* node) {
    if (node->isLeaf()) return 0;
    return 1 + std::max(depthOf(node->left.get()), depthOf(node->right.get()));
  }
  static int leavesOf(const c45::Node* node) {
    if (node->isLeaf()) return 1;
    return leavesOf(node->left.get()) + leavesOf(node->right.get());
  }

  int minSplit_;
  bool prune_;
  double confidence_;
  int c_ = 0, m_ = 0;
  std::unique_ptr<c45::Node> root_;
};

}  // namespace hesca

#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "hesca/classifier.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// Bagged forest of unpruned trees that sample round(sqrt(m)) attributes per
// split and choose thresholds by information gain. Each tree votes its argmax
// class; the forest distribution is the vote proportions.
class RandomForestClassifier final : public Classifier {
 public:
  RandomForestClassifier(int numTrees, std::uint64_t seed)
      : numTrees_(numTrees > 0 ? numTrees : 500), seed_(seed) {}

  void fit(const Dataset& data) override {
    c_ = data.c;
    m_ = data.m;
    attrsPerSplit_ = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(m_)))));
    trees_.clear();
    trees_.reserve(numTrees_);
    for (int t = 0; t < numTrees_; ++t) {
      Rng rng(mixSeed(seed_, static_cast<std::uint64_t>(t) + 1));
      std::vector<int> sample(data.n);
      for (int i = 0; i < data.n; ++i)
        sample[i] = static_cast<int>(rng.nextBelow(static_cast<std::uint64_t>(data.n)));
      trees_.push_back(build(data, sample, rng));
    }
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    ProbVector votes(c_, 0.0);
    for (const auto& tree : trees_) votes[treeVote(tree.get(), x)] += 1.0;
    for (double& v : votes) v /= trees_.size();
    return votes;
  }

 private:
  struct Node {
    int attr = -1;
    double threshold = 0.0;
    int vote = 0;
    std::unique_ptr<Node> left, right;
    bool isLeaf() const { return attr < 0; }
  };

  static int treeVote(const Node* node, std::span<const double> x) {
    while (!node->isLeaf()) node = x[node->attr] <= node->threshold ? node->left.get() : node->right.get();
    return node->vote;
  }

  std::unique_ptr<Node> build(const Dataset& d, const std::vector<int>& idx, Rng& rng) const {
    auto node = std::make_unique<Node>();
    std::vector<double> counts(c_, 0.0);
    for (int i : idx) counts[d.labels[i]] += 1.0;
    node->vote = argmaxLowestTie(counts);

    int present = 0;
    for (double v : counts)
      if (v > 0.0) ++present;
    if (present <= 1 || idx.size() < 2) return node;

    // sample attribute candidates without replacement
    std::vector<int> attrs(m_);
    for (int j = 0; j < m_; ++j) attrs[j] = j;
    rng.shuffle(attrs);
    attrs.resize(attrsPerSplit_);
    std::sort(attrs.begin(), attrs.end());

    const int n = static_cast<int>(idx.size());
    const double baseEntropy = entropyBits(counts, n);
    double bestGain = -1.0;
    int bestAttr = -1;
    double bestThreshold = 0.0;
    std::vector<std::pair<double, int>> sorted(n);
    std::vector<double> leftCounts(c_);
    for (int attr : attrs) {
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
          const double r = counts[j] - l;
          if (l > 0.0) hl -= (l / nl) * std::log2(l / nl);
          if (r > 0.0) hr -= (r / nr) * std::log2(r / nr);
        }
        const double gain = baseEntropy - (nl / n) * hl - (nr / n) * hr;
        if (gain > bestGain + 1e-12) {
          bestGain = gain;
          bestAttr = attr;
          bestThreshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        }
      }
    }
    if (bestAttr < 0 || bestGain <= 0.0) return node;

    std::vector<int> leftIdx, rightIdx;
    for (int i : idx) (d.row(i)[bestAttr] <= bestThreshold ? leftIdx : rightIdx).push_back(i);
    if (leftIdx.empty() || rightIdx.empty()) return node;
    node->attr = bestAttr;
    node->threshold = bestThreshold;
    node->left = build(d, leftIdx, rng);
    node->right = build(d, rightIdx, rng);
    return node;
  }

  int numTrees_;
  std::uint64_t seed_;
  int c_ = 0, m_ = 0, attrsPerSplit_ = 1;
  std::vector<std::unique_ptr<Node>> trees_;
};

}  // namespace hesca

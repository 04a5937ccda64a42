#pragma once

#include <algorithm>
#include <vector>

#include "hesca/classifier.hpp"

namespace hesca {

// k-nearest-neighbour vote on standardized attributes. Distance ties are
// broken toward the lower train-instance index, so the neighbour set is a
// deterministic function of the train data.
class KnnClassifier final : public Classifier {
 public:
  explicit KnnClassifier(int k) : k_(k) {}

  void fit(const Dataset& data) override {
    if (k_ < 1) throw Error("knn: k must be >= 1");
    std_.fit(data);
    train_ = std_.transformAll(data);
    labels_ = data.labels;
    n_ = data.n;
    m_ = data.m;
    c_ = data.c;
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    std::vector<double> z;
    std_.apply(x, z);
    std::vector<std::pair<double, int>> dist(n_);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      const double* row = train_.data() + static_cast<std::size_t>(i) * m_;
      for (int j = 0; j < m_; ++j) {
        const double d = z[j] - row[j];
        s += d * d;
      }
      dist[i] = {s, i};
    }
    const int k = std::min(k_, n_);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    ProbVector p(c_, 0.0);
    for (int i = 0; i < k; ++i) p[labels_[dist[i].second]] += 1.0;
    for (double& v : p) v /= k;
    return p;
  }

 private:
  int k_;
  Standardizer std_;
  std::vector<double> train_;
  std::vector<int> labels_;
  int n_ = 0, m_ = 0, c_ = 0;
};

}  // namespace hesca

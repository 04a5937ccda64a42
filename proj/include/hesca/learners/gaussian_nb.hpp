#pragma once

#include <cmath>
#include <vector>

#include "hesca/classifier.hpp"

namespace hesca {

// Per-class per-attribute Gaussians with a variance floor.
class GaussianNbClassifier final : public Classifier {
 public:
  explicit GaussianNbClassifier(double varianceFloor) : floor_(varianceFloor) {}

  void fit(const Dataset& data) override {
    c_ = data.c;
    m_ = data.m;
    mean_.assign(static_cast<std::size_t>(c_) * m_, 0.0);
    var_.assign(static_cast<std::size_t>(c_) * m_, 0.0);
    logPrior_.assign(c_, 0.0);
    std::vector<int> counts = classCounts(data);
    for (int i = 0; i < data.n; ++i) {
      const auto r = data.row(i);
      const int y = data.labels[i];
      for (int j = 0; j < m_; ++j) mean_[at(y, j)] += r[j];
    }
    for (int y = 0; y < c_; ++y)
      for (int j = 0; j < m_; ++j) mean_[at(y, j)] /= counts[y];
    for (int i = 0; i < data.n; ++i) {
      const auto r = data.row(i);
      const int y = data.labels[i];
      for (int j = 0; j < m_; ++j) {
        const double d = r[j] - mean_[at(y, j)];
        var_[at(y, j)] += d * d;
      }
    }
    for (int y = 0; y < c_; ++y) {
      for (int j = 0; j < m_; ++j) {
        var_[at(y, j)] = std::max(var_[at(y, j)] / counts[y], floor_);
      }
      logPrior_[y] = std::log(static_cast<double>(counts[y]) / data.n);
    }
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    std::vector<double> logPost(c_);
    for (int y = 0; y < c_; ++y) {
      double lp = logPrior_[y];
      for (int j = 0; j < m_; ++j) {
        const double v = var_[at(y, j)];
        const double d = x[j] - mean_[at(y, j)];
        lp += -0.5 * (std::log(2.0 * M_PI * v) + d * d / v);
      }
      logPost[y] = lp;
    }
    const double maxLp = *std::max_element(logPost.begin(), logPost.end());
    ProbVector p(c_);
    for (int y = 0; y < c_; ++y) p[y] = std::exp(logPost[y] - maxLp);
    normalizeDistribution(p);
    return p;
  }

 private:
  std::size_t at(int y, int j) const { return static_cast<std::size_t>(y) * m_ + j; }

  double floor_;
  int c_ = 0, m_ = 0;
  std::vector<double> mean_, var_, logPrior_;
};

}  // namespace hesca

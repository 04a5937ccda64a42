#pragma once

#include "hesca/classifier.hpp"

namespace hesca {

// Predicts the train class distribution for every instance.
class ZeroRClassifier final : public Classifier {
 public:
  void fit(const Dataset& data) override { prior_ = classDistribution(data); }

  ProbVector predictDistribution(std::span<const double>) const override { return prior_; }

 private:
  ProbVector prior_;
};

}  // namespace hesca

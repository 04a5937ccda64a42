#pragma once

#include <string>
#include <vector>

#include "hesca/core.hpp"

namespace hesca {

struct PredictionRecord {
  int trueClass = 0;
  int predictedClass = 0;
  ProbVector dist;
};

// Per-instance predictions of one classifier on one split of one resample,
// carrying the train-data accuracy estimate that drives ensemble weighting.
// Serializable through results_io.
struct PredictionSet {
  std::string datasetName;
  std::string classifierName;
  int resampleId = 0;
  std::string splitTag = "test";  // "train" or "test"
  double trainEstimate = 0.0;     // accuracy in [0,1]
  std::string paramsText;
  std::vector<PredictionRecord> records;

  int classCount() const {
    return records.empty() ? 0 : static_cast<int>(records.front().dist.size());
  }

  double accuracy() const {
    if (records.empty()) return 0.0;
    int correct = 0;
    for (const auto& r : records)
      if (r.trueClass == r.predictedClass) ++correct;
    return static_cast<double>(correct) / records.size();
  }
};

inline void validatePredictionSet(const PredictionSet& p) {
  if (p.records.empty()) throw Error("prediction set has no records");
  const int c = p.classCount();
  if (c < 2) throw Error("prediction set needs >= 2 classes");
  if (p.trainEstimate < 0.0 || p.trainEstimate > 1.0)
    throw Error("trainEstimate outside [0,1]");
  for (std::size_t i = 0; i < p.records.size(); ++i) {
    const auto& r = p.records[i];
    if (static_cast<int>(r.dist.size()) != c)
      throw Error("record " + std::to_string(i) + ": class count mismatch");
    if (!isValidDistribution(r.dist))
      throw Error("record " + std::to_string(i) + ": invalid probability vector");
    if (r.trueClass < 0 || r.trueClass >= c)
      throw Error("record " + std::to_string(i) + ": true class out of range");
    if (r.predictedClass != argmaxLowestTie(r.dist))
      throw Error("record " + std::to_string(i) + ": prediction is not the argmax");
  }
}

}  // namespace hesca

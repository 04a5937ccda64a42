#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hesca/learners.hpp"
#include "hesca/prediction_set.hpp"
#include "hesca/resample.hpp"

namespace hesca {

enum class CombineMode { Probability, Prediction };

// Weighted combination of component distributions. Probability mode sums
// w_i^alpha * q_i; prediction mode distributes each component's weight onto
// its argmax class. The result is normalized by its accumulated sum. Weights
// enter as ratios to the largest weight, so an extreme alpha saturates toward
// the best component instead of underflowing, and scaling every weight by a
// positive constant cannot change the output.
inline ProbVector combine(std::span<const double> weights, double alpha,
                          const std::vector<ProbVector>& dists, CombineMode mode) {
  if (weights.size() != dists.size() || dists.empty())
    throw Error("combine: weights and distributions must align and be non-empty");
  if (alpha < 0.0) throw Error("combine: alpha must be >= 0");
  const std::size_t k = dists.size();
  const std::size_t c = dists.front().size();
  for (const auto& d : dists)
    if (d.size() != c) throw Error("combine: distribution lengths differ");

  double wMax = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error("combine: weights must be finite and >= 0");
    wMax = std::max(wMax, w);
  }

  std::vector<double> effective(k, 1.0);
  if (alpha > 0.0) {
    if (wMax <= 0.0) throw Error("combine: all weights zero with alpha > 0");
    for (std::size_t i = 0; i < k; ++i) effective[i] = std::pow(weights[i] / wMax, alpha);
  }

  ProbVector out(c, 0.0);
  if (mode == CombineMode::Probability) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < c; ++j) out[j] += effective[i] * dists[i][j];
  } else {
    for (std::size_t i = 0; i < k; ++i) out[argmaxLowestTie(dists[i])] += effective[i];
  }
  normalizeDistribution(out);
  return out;
}

// Pooled stratified-CV predictions of one spec on the train data, in train
// instance order. The accuracy of this set is the classifier's HESCA weight.
inline PredictionSet crossValidatePredictions(const ClassifierSpec& spec, const Dataset& train,
                                              int folds) {
  const int k = effectiveFolds(train, folds);
  const auto foldIdx = stratifiedFolds(train, k, hash64(train.name + "/cv", k));

  PredictionSet out;
  out.datasetName = train.name;
  out.classifierName = spec.displayName();
  out.splitTag = "train";
  out.records.resize(train.n);
  for (const auto& holdOut : foldIdx) {
    const Model model = hesca::train(spec, datasetWithout(train, holdOut));
    for (int i : holdOut) {
      PredictionRecord rec;
      rec.trueClass = train.labels[i];
      rec.dist = model.predictDistribution(train.row(i));
      rec.predictedClass = argmaxLowestTie(rec.dist);
      out.records[i] = std::move(rec);
    }
  }
  out.trainEstimate = out.accuracy();
  return out;
}

// Cross-validated accuracy on the train split; Algorithm 1's findWeight.
inline double estimateWeight(const ClassifierSpec& spec, const Dataset& train, int folds) {
  return crossValidatePredictions(spec, train, folds).trainEstimate;
}

// Trained components, their CV-accuracy weights and the exponent alpha.
struct HescaModel {
  std::vector<Model> components;
  std::vector<double> weights;
  double alpha = 4.0;
  CombineMode mode = CombineMode::Probability;
  double trainEstimate = 0.0;          // accuracy of the combined CV predictions
  std::vector<PredictionSet> trainCv;  // per component, train instance order

  ProbVector predictDistribution(std::span<const double> x) const {
    std::vector<ProbVector> dists;
    dists.reserve(components.size());
    for (const Model& model : components) dists.push_back(model.predictDistribution(x));
    return combine(weights, alpha, dists, mode);
  }

  int predictClass(std::span<const double> x) const {
    return argmaxLowestTie(predictDistribution(x));
  }
};

// Algorithm 1: cross validate each component for its weight, then rebuild
// every component on the full train set. The ensemble's own train estimate is
// the accuracy of the weight-combined CV distributions, which needs no extra
// level of cross validation.
inline HescaModel buildHesca(const std::vector<ClassifierSpec>& specs, const Dataset& train,
                             double alpha = 4.0, int folds = 10,
                             CombineMode mode = CombineMode::Probability) {
  if (specs.empty()) throw Error("buildHesca: no component specs");
  HescaModel model;
  model.alpha = alpha;
  model.mode = mode;
  for (const ClassifierSpec& spec : specs) {
    model.trainCv.push_back(crossValidatePredictions(spec, train, folds));
    model.weights.push_back(model.trainCv.back().trainEstimate);
    model.components.push_back(hesca::train(spec, train));
  }

  int correct = 0;
  std::vector<ProbVector> dists(specs.size());
  for (int i = 0; i < train.n; ++i) {
    for (std::size_t j = 0; j < specs.size(); ++j) dists[j] = model.trainCv[j].records[i].dist;
    if (argmaxLowestTie(combine(model.weights, alpha, dists, mode)) == train.labels[i])
      ++correct;
  }
  model.trainEstimate = static_cast<double>(correct) / train.n;
  return model;
}

struct PickBestResult {
  int index = 0;
  double trainEstimate = 0.0;
};

// Baseline: the component with the highest CV accuracy, ties toward the
// lowest spec index.
inline PickBestResult pickBest(const std::vector<ClassifierSpec>& specs, const Dataset& train,
                               int folds) {
  if (specs.empty()) throw Error("pickBest: no component specs");
  PickBestResult best{0, estimateWeight(specs[0], train, folds)};
  for (int i = 1; i < static_cast<int>(specs.size()); ++i) {
    const double w = estimateWeight(specs[i], train, folds);
    if (w > best.trainEstimate) best = {i, w};
  }
  return best;
}

// Stored results for one component: its CV predictions on the train split and
// its predictions on the test split, both carrying the same trainEstimate.
struct ComponentResults {
  PredictionSet train;
  PredictionSet test;
};

struct ComposedResults {
  PredictionSet train;
  PredictionSet test;
};

namespace detail {
inline void checkAligned(const std::vector<const PredictionSet*>& sets) {
  const PredictionSet& first = *sets.front();
  for (const PredictionSet* setPtr : sets) {
    const PredictionSet& s = *setPtr;
    if (s.datasetName != first.datasetName || s.resampleId != first.resampleId)
      throw Error("composeFromResults: sets disagree on dataset/resample (" +
                  s.classifierName + ")");
    if (s.records.size() != first.records.size())
      throw Error("composeFromResults: instance count mismatch (" + s.classifierName + ")");
    if (s.classCount() != first.classCount())
      throw Error("composeFromResults: class count mismatch (" + s.classifierName + ")");
    for (std::size_t i = 0; i < s.records.size(); ++i)
      if (s.records[i].trueClass != first.records[i].trueClass)
        throw Error("composeFromResults: true-class mismatch at instance " + std::to_string(i) +
                    " (" + s.classifierName + ")");
  }
}

inline PredictionSet combineSets(const std::vector<const PredictionSet*>& sets,
                                 std::span<const double> weights, double alpha,
                                 CombineMode mode, const std::string& name) {
  checkAligned(sets);
  const PredictionSet& first = *sets.front();
  PredictionSet out;
  out.datasetName = first.datasetName;
  out.classifierName = name;
  out.resampleId = first.resampleId;
  out.splitTag = first.splitTag;
  out.records.resize(first.records.size());
  std::vector<ProbVector> dists(sets.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    for (std::size_t j = 0; j < sets.size(); ++j) dists[j] = sets[j]->records[i].dist;
    PredictionRecord rec;
    rec.trueClass = first.records[i].trueClass;
    rec.dist = combine(weights, alpha, dists, mode);
    rec.predictedClass = argmaxLowestTie(rec.dist);
    out.records[i] = std::move(rec);
  }
  return out;
}
}  // namespace detail

// Post-hoc HESCA from stored results: combines the components' test
// distributions with their stored trainEstimates as weights; the ensemble's
// own trainEstimate is the accuracy of the combined train-CV records. This is
// how ensembles over results of foreign toolkits (the kitchen-sink variant)
// are assembled without retraining.
inline ComposedResults composeFromResults(const std::vector<ComponentResults>& components,
                                          double alpha,
                                          const std::string& name = "HESCA",
                                          CombineMode mode = CombineMode::Probability) {
  if (components.empty()) throw Error("composeFromResults: no components");
  std::vector<double> weights;
  std::vector<const PredictionSet*> trainSets, testSets;
  for (const ComponentResults& comp : components) {
    if (std::fabs(comp.train.trainEstimate - comp.test.trainEstimate) > 5e-7)
      throw Error("composeFromResults: train/test files disagree on trainEstimate (" +
                  comp.train.classifierName + ")");
    weights.push_back(comp.test.trainEstimate);
    trainSets.push_back(&comp.train);
    testSets.push_back(&comp.test);
  }
  ComposedResults out;
  out.train = detail::combineSets(trainSets, weights, alpha, mode, name);
  out.test = detail::combineSets(testSets, weights, alpha, mode, name);
  out.train.trainEstimate = out.train.accuracy();
  out.test.trainEstimate = out.train.trainEstimate;
  return out;
}

}  // namespace hesca

#pragma once

#include <memory>

#include "hesca/classifier.hpp"
#include "hesca/learners/c45_tree.hpp"
#include "hesca/learners/gaussian_nb.hpp"
#include "hesca/learners/knn.hpp"
#include "hesca/learners/logistic.hpp"
#include "hesca/learners/mlp.hpp"
#include "hesca/learners/random_forest.hpp"
#include "hesca/learners/rotation_forest.hpp"
#include "hesca/learners/svm.hpp"
#include "hesca/learners/zero_r.hpp"

namespace hesca {

inline std::unique_ptr<Classifier> makeClassifier(const ClassifierSpec& spec) {
  const LearnerParams& p = spec.params;
  switch (spec.kind) {
    case LearnerKind::ZeroR:
      return std::make_unique<ZeroRClassifier>();
    case LearnerKind::GaussianNB:
      return std::make_unique<GaussianNbClassifier>(p.varianceFloor);
    case LearnerKind::Knn:
      return std::make_unique<KnnClassifier>(p.k);
    case LearnerKind::Logistic:
      return std::make_unique<LogisticClassifier>(p.ridge, p.logisticMaxIter, p.logisticTol);
    case LearnerKind::C45Tree:
      return std::make_unique<C45TreeClassifier>(p.minSplit, p.prune, p.pruneConfidence);
    case LearnerKind::Svm:
      return std::make_unique<SvmClassifier>(p.kernel, p.svmC, p.rbfGamma, p.polyDegree,
                                             spec.seed);
    case LearnerKind::Mlp:
      return std::make_unique<MlpClassifier>(p, spec.seed);
    case LearnerKind::RandomForest:
      return std::make_unique<RandomForestClassifier>(p.numTrees, spec.seed);
    case LearnerKind::RotationForest:
      return std::make_unique<RotationForestClassifier>(p.numTrees, p.rotationGroupSize,
                                                        p.rotationSampleFraction, spec.seed);
  }
  throw Error("unknown learner kind");
}

// Fits a model; deterministic given (spec including seed, data).
inline Model train(const ClassifierSpec& spec, const Dataset& data) {
  validateDataset(data);
  auto impl = makeClassifier(spec);
  impl->fit(data);
  return Model(spec, std::shared_ptr<const Classifier>(std::move(impl)), data.c, data.m);
}

}  // namespace hesca

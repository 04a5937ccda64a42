#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "hesca/core.hpp"
#include "hesca/dataset.hpp"

namespace hesca {

enum class LearnerKind {
  ZeroR,
  GaussianNB,
  Knn,
  Logistic,
  C45Tree,
  Svm,
  Mlp,
  RandomForest,
  RotationForest,
};

enum class SvmKernelKind { Linear, Poly, Rbf };

// Kind-specific knobs with the library defaults. A spec carries the full
// record; each learner reads only its own section.
struct LearnerParams {
  // logistic
  double ridge = 1e-8;
  int logisticMaxIter = 500;
  double logisticTol = 1e-10;
  // c4.5
  int minSplit = 2;  // impure nodes at least this large may split
  bool prune = true;
  double pruneConfidence = 0.25;
  // svm
  SvmKernelKind kernel = SvmKernelKind::Linear;
  double svmC = 1.0;
  double rbfGamma = 0.0;  // <= 0 means 1/m
  int polyDegree = 2;
  // knn
  int k = 1;
  // mlp
  int hidden1 = 0;  // 0 means (m + c) / 2
  int hidden2 = 0;  // 0 means single hidden layer
  double learnRate = 0.05;
  double momentum = 0.9;
  int epochs = 500;
  bool holdoutStopping = false;
  int patience = 100;
  // forests
  int numTrees = 0;  // 0 means the kind's default (500 RandF, 50 RotF)
  int rotationGroupSize = 3;
  double rotationSampleFraction = 0.5;  // >= 1 disables the class subsample + bootstrap
  // gaussian nb
  double varianceFloor = 1e-9;
};

struct ClassifierSpec {
  LearnerKind kind = LearnerKind::ZeroR;
  LearnerParams params;
  std::uint64_t seed = 0;
  std::string name;  // empty: derived from kind

  std::string displayName() const;
};

inline std::string kindName(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::ZeroR: return "ZeroR";
    case LearnerKind::GaussianNB: return "NB";
    case LearnerKind::Knn: return "NN";
    case LearnerKind::Logistic: return "Logistic";
    case LearnerKind::C45Tree: return "C4.5";
    case LearnerKind::Svm: return "SVM";
    case LearnerKind::Mlp: return "MLP";
    case LearnerKind::RandomForest: return "RandF";
    case LearnerKind::RotationForest: return "RotF";
  }
  return "?";
}

inline std::string ClassifierSpec::displayName() const {
  return name.empty() ? kindName(kind) : name;
}

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const Dataset& data) = 0;
  virtual ProbVector predictDistribution(std::span<const double> x) const = 0;
};

// A fitted classifier plus the metadata needed to validate queries.
class Model {
 public:
  Model() = default;
  Model(ClassifierSpec spec, std::shared_ptr<const Classifier> impl, int classCount,
        int attributeCount)
      : spec_(std::move(spec)),
        impl_(std::move(impl)),
        classCount_(classCount),
        attributeCount_(attributeCount) {}

  ProbVector predictDistribution(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != attributeCount_)
      throw Error("instance length " + std::to_string(x.size()) + " != attribute count " +
                  std::to_string(attributeCount_));
    for (double v : x)
      if (!std::isfinite(v)) throw Error("non-finite attribute value in instance");
    return impl_->predictDistribution(x);
  }

  int predictClass(std::span<const double> x) const {
    return argmaxLowestTie(predictDistribution(x));
  }

  const ClassifierSpec& spec() const { return spec_; }
  int classCount() const { return classCount_; }
  int attributeCount() const { return attributeCount_; }
  bool valid() const { return impl_ != nullptr; }

 private:
  ClassifierSpec spec_;
  std::shared_ptr<const Classifier> impl_;
  int classCount_ = 0;
  int attributeCount_ = 0;
};

// Train-set standardization used by the distance- and gradient-based learners.
// Zero-variance attributes pass through unscaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  void fit(const Dataset& d) {
    mean.assign(d.m, 0.0);
    scale.assign(d.m, 1.0);
    for (int i = 0; i < d.n; ++i) {
      const auto r = d.row(i);
      for (int j = 0; j < d.m; ++j) mean[j] += r[j];
    }
    for (double& v : mean) v /= d.n;
    std::vector<double> var(d.m, 0.0);
    for (int i = 0; i < d.n; ++i) {
      const auto r = d.row(i);
      for (int j = 0; j < d.m; ++j) {
        const double dv = r[j] - mean[j];
        var[j] += dv * dv;
      }
    }
    for (int j = 0; j < d.m; ++j) {
      const double sd = std::sqrt(var[j] / d.n);
      scale[j] = sd > 1e-12 ? sd : 1.0;
    }
  }

  void apply(std::span<const double> x, std::vector<double>& out) const {
    out.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  }

  std::vector<double> transformAll(const Dataset& d) const {
    std::vector<double> out(d.values.size());
    for (int i = 0; i < d.n; ++i) {
      const auto r = d.row(i);
      for (int j = 0; j < d.m; ++j)
        out[static_cast<std::size_t>(i) * d.m + j] = (r[j] - mean[j]) / scale[j];
    }
    return out;
  }
};

}  // namespace hesca

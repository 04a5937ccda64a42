#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "hesca/ensemble.hpp"
#include "hesca/learners.hpp"
#include "hesca/resample.hpp"

namespace hesca::tuning {

using ParamPoint = std::vector<std::pair<std::string, double>>;

// Finite axes iterated lexicographically, first axis outermost.
struct ParamGrid {
  struct Axis {
    std::string name;
    std::vector<double> values;
  };
  std::vector<Axis> axes;

  std::size_t size() const {
    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.values.size();
    return total;
  }

  ParamPoint point(std::size_t index) const {
    ParamPoint out(axes.size());
    for (int a = static_cast<int>(axes.size()) - 1; a >= 0; --a) {
      const std::size_t len = axes[a].values.size();
      out[a] = {axes[a].name, axes[a].values[index % len]};
      index /= len;
    }
    return out;
  }
};

// Applies a named parameter value onto a spec's parameter record.
inline void applyParam(ClassifierSpec& spec, const std::string& name, double value) {
  LearnerParams& p = spec.params;
  if (name == "C") p.svmC = value;
  else if (name == "gamma") p.rbfGamma = value;
  else if (name == "degree") p.polyDegree = static_cast<int>(value);
  else if (name == "k") p.k = static_cast<int>(value);
  else if (name == "ridge") p.ridge = value;
  else if (name == "learnRate") p.learnRate = value;
  else if (name == "hidden1") p.hidden1 = static_cast<int>(value);
  else if (name == "hidden2") p.hidden2 = static_cast<int>(value);
  else if (name == "epochs") p.epochs = static_cast<int>(value);
  else if (name == "trees") p.numTrees = static_cast<int>(value);
  else if (name == "minSplit") p.minSplit = static_cast<int>(value);
  else throw Error("unknown tuning parameter '" + name + "'");
}

struct SearchResult {
  ParamPoint chosenParams;
  std::size_t chosenIndex = 0;
  double trainEstimate = 0.0;           // CV accuracy of the chosen point
  std::vector<double> evaluations;      // per candidate, iteration order
  std::vector<bool> failed;             // candidates that threw and scored 0
  std::uint64_t chosenSeed = 0;         // seed the winning spec was trained with
};

struct TunedModel {
  SearchResult search;
  Model model;                 // retrained on the full train set
  PredictionSet chosenTrainCv; // pooled CV predictions of the chosen point
};

namespace detail {

inline ClassifierSpec specFor(LearnerKind kind, const LearnerParams& base,
                              const ParamPoint& point, std::uint64_t seed) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.params = base;
  spec.seed = seed;
  for (const auto& [name, value] : point) applyParam(spec, name, value);
  return spec;
}

// CV accuracy over a fixed fold partition, retaining pooled predictions.
inline PredictionSet cvOverFolds(const ClassifierSpec& spec, const Dataset& train,
                                 const std::vector<std::vector<int>>& foldIdx) {
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

template <class PointSource>
TunedModel searchOver(LearnerKind kind, const LearnerParams& base, const PointSource& points,
                      std::size_t count, const Dataset& train, int folds, std::uint64_t seed) {
  if (count == 0) throw Error("parameter search: no candidates");
  const int k = effectiveFolds(train, folds);
  const auto foldIdx = stratifiedFolds(train, k, hash64(train.name + "/tune", k));

  TunedModel out;
  out.search.evaluations.reserve(count);
  out.search.failed.assign(count, false);
  double bestScore = -1.0;
  for (std::size_t i = 0; i < count; ++i) {
    const ParamPoint point = points(i);
    const std::uint64_t pointSeed = mixSeed(seed, i);
    double score = 0.0;
    PredictionSet cv;
    try {
      cv = cvOverFolds(specFor(kind, base, point, pointSeed), train, foldIdx);
      score = cv.trainEstimate;
    } catch (const std::exception&) {
      out.search.failed[i] = true;
    }
    out.search.evaluations.push_back(score);
    if (score > bestScore) {
      bestScore = score;
      out.search.chosenIndex = i;
      out.search.chosenParams = point;
      out.search.chosenSeed = pointSeed;
      out.search.trainEstimate = score;
      out.chosenTrainCv = std::move(cv);
    }
  }
  out.model = hesca::train(
      specFor(kind, base, out.search.chosenParams, out.search.chosenSeed), train);
  return out;
}

}  // namespace detail

// Scores every grid point by stratified-CV accuracy over one shared fold
// partition; the maximum wins, ties toward the earliest iteration order. A
// candidate that throws scores 0 and is flagged. The returned model is
// retrained on the full train set at the chosen point.
inline TunedModel gridSearchCV(LearnerKind kind, const ParamGrid& grid, const Dataset& train,
                               int folds, std::uint64_t seed = 0,
                               const LearnerParams& base = {}) {
  return detail::searchOver(
      kind, base, [&](std::size_t i) { return grid.point(i); }, grid.size(), train, folds,
      seed);
}

// A sampling dimension: log-uniform over [lo, hi], or a uniform integer.
// capFromDim (when >= 0) clamps the upper bound to an earlier dimension's
// sampled value, which is how "second layer at most first layer" is encoded.
struct SearchSpace {
  struct Dim {
    std::string name;
    enum Kind { LogUniform, UniformInt } kind = LogUniform;
    double lo = 0.0;
    double hi = 1.0;
    int capFromDim = -1;
  };
  std::vector<Dim> dims;
};

// The three-parameter network search space: learning rate on a log10 scale
// from 0.1 down to 0.00001, first hidden layer 1.5m..5m, second layer between
// the class count and the first layer's size.
inline SearchSpace mlpSearchSpace(int attributes, int classes) {
  SearchSpace space;
  space.dims.push_back({"learnRate", SearchSpace::Dim::LogUniform, 1e-5, 0.1, -1});
  space.dims.push_back({"hidden1", SearchSpace::Dim::UniformInt,
                        std::ceil(1.5 * attributes), 5.0 * attributes, -1});
  space.dims.push_back({"hidden2", SearchSpace::Dim::UniformInt,
                        static_cast<double>(classes), 5.0 * attributes, 1});
  return space;
}

// Random search: `budget` points sampled deterministically from the space,
// then scored and selected exactly like gridSearchCV. When every dimension is
// an integer range and the budget covers the whole space, candidates are
// enumerated exhaustively in grid order instead of sampled.
inline TunedModel randomSearchCV(LearnerKind kind, const SearchSpace& space, int budget,
                                 const Dataset& train, int folds, std::uint64_t seed,
                                 const LearnerParams& base = {}) {
  if (budget < 1) throw Error("randomSearchCV: budget must be >= 1");

  bool allInt = true;
  std::size_t total = 1;
  for (const auto& dim : space.dims) {
    if (dim.kind != SearchSpace::Dim::UniformInt || dim.capFromDim >= 0) {
      allInt = false;
      break;
    }
    total *= static_cast<std::size_t>(dim.hi - dim.lo) + 1;
  }
  if (allInt && static_cast<std::size_t>(budget) >= total) {
    ParamGrid grid;
    for (const auto& dim : space.dims) {
      ParamGrid::Axis axis;
      axis.name = dim.name;
      for (double v = dim.lo; v <= dim.hi + 0.5; v += 1.0) axis.values.push_back(v);
      grid.axes.push_back(std::move(axis));
    }
    return gridSearchCV(kind, grid, train, folds, seed, base);
  }

  Rng rng(mixSeed(seed, 0x5a3d));
  std::vector<ParamPoint> points(budget);
  for (int i = 0; i < budget; ++i) {
    ParamPoint point;
    for (const auto& dim : space.dims) {
      double hi = dim.hi;
      if (dim.capFromDim >= 0) hi = std::min(hi, point[dim.capFromDim].second);
      double value;
      if (dim.kind == SearchSpace::Dim::LogUniform) {
        value = std::exp(rng.uniform(std::log(dim.lo), std::log(hi)));
      } else {
        const int lo = static_cast<int>(dim.lo);
        value = rng.nextInt(lo, std::max(lo, static_cast<int>(hi)));
      }
      point.emplace_back(dim.name, value);
    }
    points[i] = std::move(point);
  }
  return detail::searchOver(
      kind, base, [&](std::size_t i) { return points[i]; }, points.size(), train, folds,
      seed);
}

// The published RBF grid: C and gamma over powers of two from 2^-16 to 2^16.
inline ParamGrid rbfFullGrid() {
  ParamGrid grid;
  ParamGrid::Axis c{"C", {}}, g{"gamma", {}};
  for (int e = -16; e <= 16; ++e) {
    c.values.push_back(std::ldexp(1.0, e));
    g.values.push_back(std::ldexp(1.0, e));
  }
  grid.axes = {c, g};
  return grid;
}

// Desk-scale subset: `perAxis` exponents evenly spread across the same range.
inline ParamGrid rbfReducedGrid(int perAxis = 5) {
  ParamGrid grid;
  ParamGrid::Axis c{"C", {}}, g{"gamma", {}};
  for (int i = 0; i < perAxis; ++i) {
    const int e = -16 + i * 32 / (perAxis - 1);
    c.values.push_back(std::ldexp(1.0, e));
    g.values.push_back(std::ldexp(1.0, e));
  }
  grid.axes = {c, g};
  return grid;
}

}  // namespace hesca::tuning

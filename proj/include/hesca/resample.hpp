#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hesca/dataset.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// A seeded stratified train/test partition of a dataset.
struct Split {
  Dataset train;
  Dataset test;
  int resampleId = 0;
  double trainProportion = 0.5;
};

// Largest-remainder allocation of per-class train counts. Quota of class j is
// count_j * p; floors are handed out first and the remaining seats (up to the
// global target round(n * p)) go to the largest remainders, ties broken toward
// the lower class index. Afterwards every class is pinned to keep at least one
// instance on each side, transferring from the class with the most slack.
inline std::vector<int> largestRemainderTrainCounts(const std::vector<int>& counts, double p) {
  const int c = static_cast<int>(counts.size());
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  const int target = static_cast<int>(std::floor(n * p + 0.5));

  std::vector<int> alloc(c);
  std::vector<double> remainder(c);
  int floorSum = 0;
  for (int j = 0; j < c; ++j) {
    const double quota = counts[j] * p;
    alloc[j] = static_cast<int>(std::floor(quota));
    remainder[j] = quota - alloc[j];
    floorSum += alloc[j];
  }
  int extras = target - floorSum;
  while (extras > 0) {
    int pick = -1;
    for (int j = 0; j < c; ++j)
      if (alloc[j] < counts[j] && (pick < 0 || remainder[j] > remainder[pick])) pick = j;
    if (pick < 0) break;
    ++alloc[pick];
    remainder[pick] -= 1.0;
    --extras;
  }
  while (extras < 0) {
    int pick = -1;
    for (int j = 0; j < c; ++j)
      if (alloc[j] > 0 && (pick < 0 || remainder[j] < remainder[pick])) pick = j;
    if (pick < 0) break;
    --alloc[pick];
    remainder[pick] += 1.0;
    ++extras;
  }

  // Keep both sides non-empty per class (only binds at extreme proportions).
  for (int j = 0; j < c; ++j) {
    while (alloc[j] < 1) {
      int donor = -1;
      for (int i = 0; i < c; ++i)
        if (i != j && alloc[i] > 1 && (donor < 0 || alloc[i] - counts[i] * p > alloc[donor] - counts[donor] * p))
          donor = i;
      if (donor < 0) break;
      --alloc[donor];
      ++alloc[j];
    }
    while (alloc[j] > counts[j] - 1) {
      int taker = -1;
      for (int i = 0; i < c; ++i)
        if (i != j && alloc[i] < counts[i] - 1 &&
            (taker < 0 || alloc[i] - counts[i] * p < alloc[taker] - counts[taker] * p))
          taker = i;
      if (taker < 0) break;
      --alloc[j];
      ++alloc[taker];
    }
  }
  return alloc;
}

namespace detail {

inline Dataset subsetByIndices(const Dataset& d, const std::vector<int>& indices) {
  Dataset out;
  out.name = d.name;
  out.classNames = d.classNames;
  out.m = d.m;
  out.c = d.c;
  out.n = static_cast<int>(indices.size());
  out.values.reserve(static_cast<std::size_t>(out.n) * d.m);
  out.labels.reserve(out.n);
  for (int i : indices) {
    const auto r = d.row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
    out.labels.push_back(d.labels[i]);
  }
  return out;
}

inline std::vector<std::vector<int>> indicesPerClass(const Dataset& d) {
  std::vector<std::vector<int>> byClass(d.c);
  for (int i = 0; i < d.n; ++i) byClass[d.labels[i]].push_back(i);
  return byClass;
}

}  // namespace detail

// Deterministic stratified resample: per-class seeded shuffle, then the
// largest-remainder allocation above. Pure function of (dataset content,
// resampleId, trainProportion); the seed comes from (name, resampleId) only.
inline Split stratifiedResample(const Dataset& d, int resampleId, double trainProportion) {
  if (!(trainProportion > 0.0 && trainProportion < 1.0))
    throw Error("trainProportion must lie in (0,1)");
  const std::vector<int> counts = classCounts(d);
  for (int j = 0; j < d.c; ++j)
    if (counts[j] < 2)
      throw Error("dataset '" + d.name + "': class '" + d.classNames[j] +
                  "' has one instance; cannot stratify");

  const std::vector<int> trainCounts = largestRemainderTrainCounts(counts, trainProportion);
  auto byClass = detail::indicesPerClass(d);

  Rng rng(hash64(d.name, static_cast<std::uint64_t>(resampleId)));
  std::vector<int> trainIdx, testIdx;
  trainIdx.reserve(d.n);
  testIdx.reserve(d.n);
  for (int j = 0; j < d.c; ++j) {
    rng.shuffle(byClass[j]);
    for (int i = 0; i < static_cast<int>(byClass[j].size()); ++i)
      (i < trainCounts[j] ? trainIdx : testIdx).push_back(byClass[j][i]);
  }

  Split split;
  split.train = detail::subsetByIndices(d, trainIdx);
  split.test = detail::subsetByIndices(d, testIdx);
  split.resampleId = resampleId;
  split.trainProportion = trainProportion;
  validateDataset(split.train);
  validateDataset(split.test);
  return split;
}

// Stratified k-fold partition: per-class seeded shuffle, then contiguous deal
// into folds; the first (count_j mod k) folds take the extra instance, which
// is the largest-remainder rule for equal quotas. Returns held-out indices
// per fold, each sorted ascending so instance order is reproducible.
inline std::vector<std::vector<int>> stratifiedFolds(const Dataset& d, int folds,
                                                     std::uint64_t seed) {
  if (folds < 2) throw Error("stratifiedFolds: need at least 2 folds");
  const std::vector<int> counts = classCounts(d);
  for (int count : counts)
    if (count < folds) throw Error("stratifiedFolds: a class has fewer instances than folds");

  auto byClass = detail::indicesPerClass(d);
  Rng rng(seed);
  std::vector<std::vector<int>> foldIdx(folds);
  for (int j = 0; j < d.c; ++j) {
    rng.shuffle(byClass[j]);
    const int base = counts[j] / folds;
    const int extra = counts[j] % folds;
    int pos = 0;
    for (int f = 0; f < folds; ++f) {
      const int take = base + (f < extra ? 1 : 0);
      for (int t = 0; t < take; ++t) foldIdx[f].push_back(byClass[j][pos++]);
    }
  }
  for (auto& fold : foldIdx) std::sort(fold.begin(), fold.end());
  return foldIdx;
}

// Lowers the fold count when stratification cannot support it; the default ten
// folds shrink to the smallest class count, never below two.
inline int effectiveFolds(const Dataset& d, int requested) {
  int minCount = d.n;
  for (int count : classCounts(d)) minCount = std::min(minCount, count);
  if (minCount < 2) throw Error("cross validation impossible: a class has one instance");
  return std::max(2, std::min(requested, minCount));
}

inline Dataset datasetWithout(const Dataset& d, const std::vector<int>& holdOut) {
  std::vector<char> excluded(d.n, 0);
  for (int i : holdOut) excluded[i] = 1;
  std::vector<int> keep;
  keep.reserve(d.n - static_cast<int>(holdOut.size()));
  for (int i = 0; i < d.n; ++i)
    if (!excluded[i]) keep.push_back(i);
  return detail::subsetByIndices(d, keep);
}

inline Dataset datasetSubset(const Dataset& d, const std::vector<int>& indices) {
  return detail::subsetByIndices(d, indices);
}

}  // namespace hesca

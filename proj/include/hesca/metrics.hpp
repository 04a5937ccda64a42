#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "hesca/prediction_set.hpp"

namespace hesca::metrics {

// The per-split performance statistics. weightedRecall is the train-frequency
// weighted per-class recall (the quantity the balanced-error formula of the
// source methodology literally evaluates); balancedError is the standard
// balanced error rate, one minus the unweighted mean recall.
struct MetricReport {
  double error = 0.0;
  double balancedError = 0.0;
  double weightedRecall = 0.0;
  double nllSum = 0.0;
  double nllMean = 0.0;
  double auroc = 0.0;
  std::optional<double> bias;
};

inline double error(const PredictionSet& preds) {
  if (preds.records.empty()) throw Error("error: empty prediction set");
  int wrong = 0;
  for (const auto& r : preds.records)
    if (r.trueClass != r.predictedClass) ++wrong;
  return static_cast<double>(wrong) / preds.records.size();
}

struct BalancedErrorResult {
  double balancedError = 0.0;
  double weightedRecall = 0.0;
};

inline BalancedErrorResult balancedError(const PredictionSet& preds,
                                         std::span<const double> trainProportions) {
  const int c = preds.classCount();
  if (static_cast<int>(trainProportions.size()) != c)
    throw Error("balancedError: train proportion length mismatch");
  double propSum = 0.0;
  for (double r : trainProportions) propSum += r;
  if (std::fabs(propSum - 1.0) > 1e-6)
    throw Error("balancedError: train proportions must sum to 1");
  std::vector<double> correct(c, 0.0), total(c, 0.0);
  for (const auto& r : preds.records) {
    total[r.trueClass] += 1.0;
    if (r.trueClass == r.predictedClass) correct[r.trueClass] += 1.0;
  }
  BalancedErrorResult out;
  double meanRecall = 0.0;
  for (int j = 0; j < c; ++j) {
    if (total[j] == 0.0)
      throw Error("balancedError: class " + std::to_string(j) + " absent from test set");
    const double recall = correct[j] / total[j];
    meanRecall += recall;
    out.weightedRecall += trainProportions[j] * recall;
  }
  out.balancedError = 1.0 - meanRecall / c;
  return out;
}

struct NllResult {
  double sum = 0.0;
  double mean = 0.0;
};

// Negative log likelihood in bits, after squashing each distribution with
// p' = 0.01 + (1 - 0.01c) p so every class keeps probability at least 0.01
// and the vector still sums to one.
inline NllResult negLogLikelihood(const PredictionSet& preds) {
  const int c = preds.classCount();
  if (c > 100) throw Error("negLogLikelihood: floor of 0.01 infeasible for c > 100");
  NllResult out;
  for (const auto& r : preds.records) {
    const double squashed = 0.01 + (1.0 - 0.01 * c) * r.dist[r.trueClass];
    out.sum -= std::log2(squashed);
  }
  out.mean = out.sum / preds.records.size();
  return out;
}

struct RocCurve {
  std::vector<std::pair<double, double>> points;  // (fpr, tpr)
};

namespace detail {

// Breakpoints of the ROC step curve: cumulative (fpr, tpr) after each batch
// of tied scores, in descending score order.
inline std::vector<std::pair<double, double>> rocBreakpoints(std::span<const double> scores,
                                                             std::span<const int> labels,
                                                             long long& posTotal,
                                                             long long& negTotal) {
  if (scores.size() != labels.size() || scores.empty())
    throw Error("roc: scores/labels size mismatch");
  posTotal = negTotal = 0;
  for (int y : labels) (y != 0 ? posTotal : negTotal) += 1;
  if (posTotal == 0 || negTotal == 0) throw Error("roc: both labels must be present");

  std::vector<int> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });

  std::vector<std::pair<double, double>> points;
  long long tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (labels[order[j]] != 0 ? tp : fp) += 1;
      ++j;
    }
    points.emplace_back(static_cast<double>(fp) / negTotal, static_cast<double>(tp) / posTotal);
    i = j;
  }
  return points;
}

}  // namespace detail

// ROC curve from descending-score decision thresholds, tied scores processed
// as one threshold, anchored at (0,0) and (1,1). Interior points that do not
// bend the polyline are dropped, so the point list is the minimal description
// of the step curve.
inline RocCurve rocCurve(std::span<const double> scores, std::span<const int> labels) {
  long long pos = 0, neg = 0;
  auto points = detail::rocBreakpoints(scores, labels, pos, neg);
  points.insert(points.begin(), {0.0, 0.0});
  if (points.back() != std::pair<double, double>{1.0, 1.0}) points.emplace_back(1.0, 1.0);

  RocCurve curve;
  for (const auto& pt : points) {
    while (curve.points.size() >= 2) {
      const auto& a = curve.points[curve.points.size() - 2];
      const auto& b = curve.points.back();
      const double cross = (b.first - a.first) * (pt.second - a.second) -
                           (b.second - a.second) * (pt.first - a.first);
      if (cross == 0.0)
        curve.points.pop_back();  // collinear: b adds nothing
      else
        break;
    }
    if (curve.points.empty() || curve.points.back() != pt) curve.points.push_back(pt);
  }
  return curve;
}

// Area under the ROC step curve; identical to the pairwise comparison count
// (#(pos > neg) + 0.5 #(pos = neg)) / (a * b), computed with integer-valued
// accumulation so ties cost exactly half a unit.
inline double binaryAUROC(std::span<const double> scores, std::span<const int> labels) {
  long long pos = 0, neg = 0;
  const auto points = detail::rocBreakpoints(scores, labels, pos, neg);
  long long prevTp = 0, prevFp = 0;
  long long twiceArea = 0;  // in units of 1 / (2 * pos * neg)
  for (const auto& pt : points) {
    const long long fp = std::llround(pt.first * neg);
    const long long tp = std::llround(pt.second * pos);
    twiceArea += (fp - prevFp) * (tp + prevTp);
    prevTp = tp;
    prevFp = fp;
  }
  return static_cast<double>(twiceArea) / (2.0 * pos * neg);
}

// Train-frequency weighted one-vs-rest AUROC. Two-class problems score the
// minority class (by train frequency) as the success; this is symmetric, so
// the majority view gives the same value.
inline double multiclassAUROC(const PredictionSet& preds,
                              std::span<const double> trainProportions) {
  const int c = preds.classCount();
  if (static_cast<int>(trainProportions.size()) != c)
    throw Error("multiclassAUROC: train proportion length mismatch");
  const std::size_t n = preds.records.size();
  std::vector<double> scores(n);
  std::vector<int> labels(n);
  if (c == 2) {
    int success = trainProportions[1] < trainProportions[0] ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = preds.records[i].dist[success];
      labels[i] = preds.records[i].trueClass == success ? 1 : 0;
    }
    return binaryAUROC(scores, labels);
  }
  double total = 0.0;
  for (int j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = preds.records[i].dist[j];
      labels[i] = preds.records[i].trueClass == j ? 1 : 0;
    }
    total += trainProportions[j] * binaryAUROC(scores, labels);
  }
  return total;
}

// Test error minus the train-data error estimate; positive means the train
// estimate was optimistic.
inline double biasReport(double trainErrorEstimate, double testError) {
  if (trainErrorEstimate < 0.0 || trainErrorEstimate > 1.0 || testError < 0.0 ||
      testError > 1.0)
    throw Error("biasReport: inputs must lie in [0,1]");
  return testError - trainErrorEstimate;
}

inline MetricReport summarize(const PredictionSet& test,
                              std::span<const double> trainProportions,
                              std::optional<double> trainEstimateAccuracy = std::nullopt) {
  MetricReport report;
  report.error = error(test);
  const auto be = balancedError(test, trainProportions);
  report.balancedError = be.balancedError;
  report.weightedRecall = be.weightedRecall;
  const auto nll = negLogLikelihood(test);
  report.nllSum = nll.sum;
  report.nllMean = nll.mean;
  report.auroc = multiclassAUROC(test, trainProportions);
  if (trainEstimateAccuracy)
    report.bias = biasReport(1.0 - *trainEstimateAccuracy, report.error);
  return report;
}

}  // namespace hesca::metrics

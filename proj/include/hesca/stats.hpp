#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hesca/core.hpp"
#include "hesca/prob.hpp"

namespace hesca::stats {

// Scores of k classifiers on N datasets, no missing cells.
struct ResultsMatrix {
  std::vector<std::string> datasets;
  std::vector<std::string> classifiers;
  std::vector<double> scores;  // datasets x classifiers, row-major
  bool higherIsBetter = true;

  int datasetCount() const { return static_cast<int>(datasets.size()); }
  int classifierCount() const { return static_cast<int>(classifiers.size()); }
  double at(int d, int c) const {
    return scores[static_cast<std::size_t>(d) * classifiers.size() + c];
  }
};

// Two-sided paired t-test over per-fold differences.
inline double pairedTTest(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw Error("pairedTTest: need paired samples, n >= 2");
  const int n = static_cast<int>(a.size());
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = a[i] - b[i] - mean;
    ss += d * d;
  }
  const double sd = std::sqrt(ss / (n - 1));
  if (sd <= 0.0) throw Error("pairedTTest: zero-variance differences (degenerate)");
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return 2.0 * (1.0 - prob::studentTCdf(std::fabs(t), n - 1));
}

namespace detail {

// Average ranks of |values|, 1-based, ties averaged.
inline std::vector<double> averageRanks(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return values[x] < values[y]; });
  std::vector<double> ranks(n);
  int i = 0;
  while (i < n) {
    int j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * (i + 1 + j);  // mean of ranks i+1 .. j
    for (int t = i; t < j; ++t) ranks[order[t]] = avg;
    i = j;
  }
  return ranks;
}

}  // namespace detail

// Two-sided Wilcoxon signed-rank p-value. Zero differences are discarded;
// tied magnitudes get average ranks. Exact tail by dynamic programming over
// the 2^n equally likely sign assignments when n <= exactLimit, normal
// approximation with tie correction and continuity correction above.
inline double wilcoxonSignedRank(std::span<const double> a, std::span<const double> b,
                                 int exactLimit = 25) {
  if (a.size() != b.size()) throw Error("wilcoxonSignedRank: length mismatch");
  std::vector<double> absDiff;
  std::vector<int> sign;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d == 0.0) continue;
    absDiff.push_back(std::fabs(d));
    sign.push_back(d > 0.0 ? 1 : -1);
  }
  const int n = static_cast<int>(absDiff.size());
  if (n == 0) throw Error("wilcoxonSignedRank: all differences zero");

  const std::vector<double> ranks = detail::averageRanks(absDiff);
  double wPlus = 0.0;
  for (int i = 0; i < n; ++i)
    if (sign[i] > 0) wPlus += ranks[i];
  const double total = n * (n + 1) / 2.0;

  if (n <= exactLimit) {
    // distribution of 2*W+ over sign assignments; doubling makes the average
    // ranks integral
    std::vector<long long> doubled(n);
    long long maxSum = 0;
    for (int i = 0; i < n; ++i) {
      doubled[i] = std::llround(2.0 * ranks[i]);
      maxSum += doubled[i];
    }
    std::vector<double> density(maxSum + 1, 0.0);
    density[0] = 1.0;
    long long reach = 0;
    for (int i = 0; i < n; ++i) {
      reach += doubled[i];
      for (long long s = reach; s >= doubled[i]; --s) density[s] += density[s - doubled[i]];
    }
    const double denom = std::pow(2.0, n);
    const long long w2 = std::llround(2.0 * wPlus);
    const long long hi = std::max(w2, maxSum - w2);
    double tail = 0.0;
    for (long long s = hi; s <= maxSum; ++s) tail += density[s];
    return std::min(1.0, 2.0 * tail / denom);
  }

  double tieCorrection = 0.0;
  {
    std::vector<double> sorted(absDiff);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tieCorrection += t * t * t - t;
      i = j;
    }
  }
  const double mean = total / 2.0;
  const double var = n * (n + 1) * (2.0 * n + 1) / 24.0 - tieCorrection / 48.0;
  const double z = (std::fabs(wPlus - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, 2.0 * (1.0 - prob::normalCdf(z)));
}

struct FriedmanResult {
  std::vector<double> averageRanks;  // rank 1 = best
  double chiSquared = 0.0;
  double chiSquaredP = 1.0;
  double imanDavenportP = 1.0;
};

// Friedman rank test with the Iman-Davenport F correction. Ranks are averaged
// on ties; rank 1 goes to the best score under the matrix's orientation.
inline FriedmanResult friedmanTest(const ResultsMatrix& m) {
  const int N = m.datasetCount();
  const int k = m.classifierCount();
  if (N < 2 || k < 2) throw Error("friedmanTest: need >= 2 datasets and >= 2 classifiers");

  FriedmanResult out;
  out.averageRanks.assign(k, 0.0);
  std::vector<double> row(k);
  for (int d = 0; d < N; ++d) {
    for (int c = 0; c < k; ++c) row[c] = m.higherIsBetter ? -m.at(d, c) : m.at(d, c);
    const std::vector<double> ranks = detail::averageRanks(row);
    for (int c = 0; c < k; ++c) out.averageRanks[c] += ranks[c];
  }
  for (double& r : out.averageRanks) r /= N;

  double sumSq = 0.0;
  for (double r : out.averageRanks) {
    const double d = r - (k + 1) / 2.0;
    sumSq += d * d;
  }
  out.chiSquared = 12.0 * N / (k * (k + 1.0)) * sumSq;
  out.chiSquaredP = 1.0 - prob::chiSquaredCdf(out.chiSquared, k - 1);

  const double denom = N * (k - 1.0) - out.chiSquared;
  if (denom <= 0.0) {
    out.imanDavenportP = 0.0;
  } else if (out.chiSquared <= 0.0) {
    out.imanDavenportP = 1.0;
  } else {
    const double f = (N - 1.0) * out.chiSquared / denom;
    out.imanDavenportP = 1.0 - prob::fCdf(f, k - 1.0, (k - 1.0) * (N - 1.0));
  }
  return out;
}

// Holm step-down: sort ascending, reject while p_(i) <= alpha / (m - i + 1),
// stop at the first failure. Flags are returned in input order.
inline std::vector<bool> holmCorrection(std::span<const double> pvalues, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("holmCorrection: alpha outside (0,1)");
  const int m = static_cast<int>(pvalues.size());
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return pvalues[x] < pvalues[y]; });
  std::vector<bool> reject(m, false);
  for (int i = 0; i < m; ++i) {
    if (pvalues[order[i]] <= alpha / (m - i)) {
      reject[order[i]] = true;
    } else {
      break;
    }
  }
  return reject;
}

struct CdDiagramData {
  std::vector<std::string> classifiers;
  std::vector<double> averageRanks;
  std::vector<std::vector<int>> cliques;  // classifier indices, rank order
  double alpha = 0.05;
};

// Cliques for a critical difference diagram: Holm-corrected rejections over
// all pairwise p-values, then maximal contiguous runs in rank order with no
// rejected internal pair. Runs contained in a longer run are dropped; only
// multi-member cliques are reported.
inline CdDiagramData formCliques(std::span<const double> avgRanks,
                                 const std::vector<std::vector<double>>& pairwiseP,
                                 double alpha,
                                 std::vector<std::string> names = {}) {
  const int k = static_cast<int>(avgRanks.size());
  if (static_cast<int>(pairwiseP.size()) != k)
    throw Error("formCliques: p-value matrix size mismatch");
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::fabs(pairwiseP[i][j] - pairwiseP[j][i]) > 1e-12)
        throw Error("formCliques: p-value matrix not symmetric");

  std::vector<double> flatP;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      flatP.push_back(pairwiseP[i][j]);
      pairs.emplace_back(i, j);
    }
  const std::vector<bool> rejectFlat = holmCorrection(flatP, alpha);
  std::vector<std::vector<bool>> rejected(k, std::vector<bool>(k, false));
  for (std::size_t t = 0; t < pairs.size(); ++t)
    rejected[pairs[t].first][pairs[t].second] = rejected[pairs[t].second][pairs[t].first] =
        rejectFlat[t];

  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return avgRanks[x] < avgRanks[y]; });

  CdDiagramData out;
  out.averageRanks.assign(avgRanks.begin(), avgRanks.end());
  out.alpha = alpha;
  out.classifiers = std::move(names);

  int prevEnd = -1;
  for (int i = 0; i < k; ++i) {
    int end = i;  // furthest index such that [i..end] has no rejected internal pair
    for (int j = i + 1; j < k; ++j) {
      bool clean = true;
      for (int t = i; t < j && clean; ++t)
        if (rejected[order[t]][order[j]]) clean = false;
      if (!clean) break;
      end = j;
    }
    if (end > i && end > prevEnd) {  // multi-member and not a subset of the previous run
      std::vector<int> clique;
      for (int t = i; t <= end; ++t) clique.push_back(order[t]);
      out.cliques.push_back(std::move(clique));
      prevEnd = end;
    }
  }
  return out;
}

struct SharpshooterResult {
  int tp = 0, tn = 0, fp = 0, fn = 0, ties = 0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::vector<std::pair<double, double>> points;  // (trainRatio, testRatio), ties excluded
};

// Texas sharpshooter quadrants for classifier A over B: per fold, the ratio
// of train accuracies predicts the ratio of test accuracies. Folds with
// either ratio exactly one are counted as ties and excluded from quadrants.
inline SharpshooterResult texasSharpshooter(std::span<const double> trainAccA,
                                            std::span<const double> trainAccB,
                                            std::span<const double> testAccA,
                                            std::span<const double> testAccB) {
  const std::size_t n = trainAccA.size();
  if (trainAccB.size() != n || testAccA.size() != n || testAccB.size() != n)
    throw Error("texasSharpshooter: length mismatch");
  SharpshooterResult out;
  for (std::size_t i = 0; i < n; ++i) {
    if (trainAccB[i] <= 0.0 || testAccB[i] <= 0.0)
      throw Error("texasSharpshooter: zero denominator at fold " + std::to_string(i));
    const double trainRatio = trainAccA[i] / trainAccB[i];
    const double testRatio = testAccA[i] / testAccB[i];
    if (trainRatio == 1.0 || testRatio == 1.0) {
      ++out.ties;
      continue;
    }
    out.points.emplace_back(trainRatio, testRatio);
    if (trainRatio > 1.0)
      (testRatio > 1.0 ? out.tp : out.fp) += 1;
    else
      (testRatio > 1.0 ? out.fn : out.tn) += 1;
  }
  if (out.tp + out.fn > 0)
    out.sensitivity = static_cast<double>(out.tp) / (out.tp + out.fn);
  if (out.tn + out.fp > 0)
    out.specificity = static_cast<double>(out.tn) / (out.tn + out.fp);
  return out;
}

}  // namespace hesca::stats

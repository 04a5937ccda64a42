// Acceptance suite for the bundled synthetic benchmark: prints one pass/fail
// line per criterion and exits nonzero if any fail.
//
// The benchmark is 15 Gaussian-mixture datasets (2..8 classes, 100..500 train
// cases at a 50% resample), 10 resamples, basic five-component ensemble with
// alpha 4 plus the ZeroR robustness variant, the pick-best baseline and a
// reduced-grid tuned RBF SVM.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "hesca/hesca.hpp"

using namespace hesca;
namespace fs = std::filesystem;

namespace {

constexpr int kResamples = 10;
constexpr int kRbfResamples = 2;  // tuned-RBF baseline cost cap
constexpr double kAlpha = 4.0;
constexpr int kFolds = 10;
constexpr int kComponents = 5;  // Logistic, C4.5, SVML, NN, MLP
constexpr int kWithZeroR = 6;

struct TaskOut {
  double compError[kWithZeroR] = {0};
  double weights[kWithZeroR] = {0};
  double hescaError = 0, hescaEstimate = 0;
  double hescaZrError = 0;
  double pickError = 0, pickEstimate = 0;
  double maxProbDiff = 0;  // post-hoc vs live, criterion 10
  int classMismatches = 0;
  int trainSize = 0;
};

struct Criterion {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<ClassifierSpec> benchmarkSpecs() {
  std::vector<ClassifierSpec> specs = hescaComponents();
  specs.push_back(namedSpec(LearnerKind::ZeroR, "ZeroR"));
  return specs;
}

PredictionSet predictSet(const HescaModel& model, int componentIdx, const Dataset& test,
                         const std::string& name, int resampleId, double trainEstimate) {
  PredictionSet out;
  out.datasetName = test.name;
  out.classifierName = name;
  out.resampleId = resampleId;
  out.splitTag = "test";
  out.trainEstimate = trainEstimate;
  for (int i = 0; i < test.n; ++i) {
    PredictionRecord rec;
    rec.trueClass = test.labels[i];
    rec.dist = model.components[componentIdx].predictDistribution(test.row(i));
    rec.predictedClass = argmaxLowestTie(rec.dist);
    out.records.push_back(std::move(rec));
  }
  return out;
}

double setError(const PredictionSet& p) {
  int wrong = 0;
  for (const auto& rec : p.records)
    if (rec.trueClass != rec.predictedClass) ++wrong;
  return static_cast<double>(wrong) / p.records.size();
}

TaskOut runBenchmarkTask(const Dataset& data, int resampleId, const fs::path& fileDir) {
  const Split split = stratifiedResample(data, resampleId, 0.5);
  const std::vector<ClassifierSpec> specs = benchmarkSpecs();
  const HescaModel model = buildHesca(specs, split.train, kAlpha, kFolds);

  TaskOut out;
  out.trainSize = split.train.n;

  // stored component results, written through the file format and read back
  std::vector<ComponentResults> storedAll;
  for (int j = 0; j < kWithZeroR; ++j) {
    out.weights[j] = model.weights[j];
    ComponentResults comp;
    comp.train = model.trainCv[j];
    comp.train.resampleId = resampleId;
    comp.test = predictSet(model, j, split.test, specs[j].displayName(), resampleId,
                           model.weights[j]);
    out.compError[j] = setError(comp.test);

    const fs::path base = fileDir / specs[j].displayName() / data.name;
    writeResults(comp.train, base / ("train" + std::to_string(resampleId) + ".csv"));
    writeResults(comp.test, base / ("test" + std::to_string(resampleId) + ".csv"));
    ComponentResults reread;
    reread.train = readResults(base / ("train" + std::to_string(resampleId) + ".csv"));
    reread.test = readResults(base / ("test" + std::to_string(resampleId) + ".csv"));
    storedAll.push_back(std::move(reread));
  }

  const std::vector<ComponentResults> storedBasic(storedAll.begin(),
                                                  storedAll.begin() + kComponents);
  const ComposedResults hesca = composeFromResults(storedBasic, kAlpha, "HESCA");
  out.hescaError = setError(hesca.test);
  out.hescaEstimate = hesca.test.trainEstimate;

  const ComposedResults hescaZr = composeFromResults(storedAll, kAlpha, "HESCA+ZeroR");
  out.hescaZrError = setError(hescaZr.test);

  // pick-best over the five basic components, ties to the lower index
  int best = 0;
  for (int j = 1; j < kComponents; ++j)
    if (model.weights[j] > model.weights[best]) best = j;
  out.pickError = out.compError[best];
  out.pickEstimate = model.weights[best];

  // criterion 10: the post-hoc ensemble over written-then-read files must
  // reproduce the live six-component ensemble at file precision
  const ComposedResults posthoc = composeFromResults(storedAll, kAlpha, "HESCA");
  for (int i = 0; i < split.test.n; ++i) {
    const ProbVector live = model.predictDistribution(split.test.row(i));
    if (posthoc.test.records[i].predictedClass != argmaxLowestTie(live)) ++out.classMismatches;
    for (int j = 0; j < split.test.c; ++j)
      out.maxProbDiff =
          std::max(out.maxProbDiff, std::fabs(posthoc.test.records[i].dist[j] - live[j]));
  }
  return out;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

// Independent restatement of the largest-remainder rule for criterion 9.
std::vector<int> largestRemainderOracle(const std::vector<int>& counts, double p) {
  int n = 0;
  for (int k : counts) n += k;
  const int target = static_cast<int>(std::floor(n * p + 0.5));
  std::vector<int> alloc(counts.size());
  std::vector<double> rem(counts.size());
  int used = 0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    alloc[j] = static_cast<int>(std::floor(counts[j] * p));
    rem[j] = counts[j] * p - alloc[j];
    used += alloc[j];
  }
  for (int extra = 0; extra < target - used; ++extra) {
    int pick = -1;
    for (std::size_t j = 0; j < counts.size(); ++j)
      if (rem[j] >= 0.0 && (pick < 0 || rem[j] > rem[pick])) pick = static_cast<int>(j);
    alloc[pick] += 1;
    rem[pick] = -1.0;
  }
  return alloc;
}

double pairwiseAurocOracle(std::span<const double> scores, std::span<const int> labels) {
  double wins = 0.0;
  long long pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) wins += 1.0;
      else if (scores[i] == scores[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

double wilcoxonEnumeration(const std::vector<double>& diffs) {
  std::vector<double> absDiff;
  for (double d : diffs)
    if (d != 0.0) absDiff.push_back(std::fabs(d));
  const int n = static_cast<int>(absDiff.size());
  std::vector<double> ranks(n);
  for (int i = 0; i < n; ++i) {
    double below = 0.0, equal = 0.0;
    for (int j = 0; j < n; ++j) {
      if (absDiff[j] < absDiff[i]) below += 1.0;
      if (absDiff[j] == absDiff[i]) equal += 1.0;
    }
    ranks[i] = below + (equal + 1.0) / 2.0;
  }
  double observed = 0.0;
  int idx = 0;
  for (double d : diffs) {
    if (d == 0.0) continue;
    if (d > 0.0) observed += ranks[idx];
    ++idx;
  }
  double total = 0.0;
  for (double r : ranks) total += r;
  const double hi = std::max(observed, total - observed);
  long long tail = 0;
  const long long assignments = 1LL << n;
  for (long long mask = 0; mask < assignments; ++mask) {
    double wPlus = 0.0;
    for (int i = 0; i < n; ++i)
      if (mask & (1LL << i)) wPlus += ranks[i];
    if (wPlus >= hi - 1e-12) ++tail;
  }
  return std::min(1.0, 2.0 * static_cast<double>(tail) / assignments);
}

std::vector<double> columnRanks(const std::vector<double>& errors) {
  const int k = static_cast<int>(errors.size());
  std::vector<double> ranks(k);
  for (int i = 0; i < k; ++i) {
    double below = 0.0, equal = 0.0;
    for (int j = 0; j < k; ++j) {
      if (errors[j] < errors[i]) below += 1.0;
      if (errors[j] == errors[i]) equal += 1.0;
    }
    ranks[i] = below + (equal + 1.0) / 2.0;
  }
  return ranks;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  const auto t0 = std::chrono::steady_clock::now();

  // ---- benchmark runs ----
  std::vector<Dataset> datasets;
  for (const SynthSpec& spec : bundledSuite()) datasets.push_back(genGaussianMixture(spec));
  const int nDatasets = static_cast<int>(datasets.size());

  const fs::path workDir = fs::temp_directory_path() / "hesca_acceptance";
  fs::remove_all(workDir);
  fs::create_directories(workDir);

  std::vector<std::vector<TaskOut>> table(nDatasets, std::vector<TaskOut>(kResamples));
  {
    std::atomic<int> next{0};
    const int taskCount = nDatasets * kResamples;
    auto worker = [&] {
      for (;;) {
        const int t = next.fetch_add(1);
        if (t >= taskCount) return;
        const int d = t / kResamples;
        const int r = t % kResamples;
        table[d][r] = runBenchmarkTask(datasets[d], r, workDir);
      }
    };
    std::thread a(worker), b(worker);
    a.join();
    b.join();
  }

  auto meanOver = [&](int d, auto member) {
    double sum = 0.0;
    for (int r = 0; r < kResamples; ++r) sum += table[d][r].*member;
    return sum / kResamples;
  };

  // ---- criterion 1: ensemble-improves-components trend ----
  {
    const std::vector<ClassifierSpec> specs = benchmarkSpecs();
    std::vector<double> rankSum(kComponents + 1, 0.0);
    int beatsAll = 0;
    for (int d = 0; d < nDatasets; ++d) {
      std::vector<double> errors;
      for (int j = 0; j < kComponents; ++j) {
        double sum = 0.0;
        for (int r = 0; r < kResamples; ++r) sum += table[d][r].compError[j];
        errors.push_back(sum / kResamples);
      }
      const double hescaErr = meanOver(d, &TaskOut::hescaError);
      bool beaten = true;
      for (double e : errors)
        if (hescaErr >= e) beaten = false;
      if (beaten) ++beatsAll;
      errors.push_back(hescaErr);
      const std::vector<double> ranks = columnRanks(errors);
      for (std::size_t j = 0; j < ranks.size(); ++j) rankSum[j] += ranks[j];
    }
    int bestRank = 0;
    for (int j = 1; j <= kComponents; ++j)
      if (rankSum[j] < rankSum[bestRank]) bestRank = j;
    const bool pass = bestRank == kComponents && beatsAll * 100 >= 60 * nDatasets;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "HESCA avg rank %.2f (best of 6: %s); beats all components on %d/%d datasets",
                  rankSum[kComponents] / nDatasets, bestRank == kComponents ? "yes" : "NO",
                  beatsAll, nDatasets);
    results.push_back({1, "ensemble improves components (Fig. 2 analog)", pass, detail});
  }

  // ---- criterion 2: HESCA vs pick-best on small train sets ----
  {
    int hescaWins = 0, pickWins = 0, small = 0;
    for (int d = 0; d < nDatasets; ++d) {
      if (table[d][0].trainSize > 200) continue;
      ++small;
      const double he = meanOver(d, &TaskOut::hescaError);
      const double pe = meanOver(d, &TaskOut::pickError);
      if (he < pe) ++hescaWins;
      if (pe < he) ++pickWins;
    }
    const bool pass = hescaWins > pickWins;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "on %d datasets with <= 200 train cases: HESCA wins %d, pick-best wins %d",
                  small, hescaWins, pickWins);
    results.push_back({2, "HESCA beats pick-best on small trains (Table 2 trend)", pass, detail});
  }

  // ---- criterion 3: bias sign and magnitude (Fig. 4 analog) ----
  {
    double pickBias = 0.0, hescaBias = 0.0;
    int folds = 0;
    for (int d = 0; d < nDatasets; ++d) {
      for (int r = 0; r < kResamples; ++r) {
        pickBias += table[d][r].pickError - (1.0 - table[d][r].pickEstimate);
        hescaBias += table[d][r].hescaError - (1.0 - table[d][r].hescaEstimate);
        ++folds;
      }
    }
    pickBias /= folds;
    hescaBias /= folds;
    const bool pass = pickBias > 0.0 && std::fabs(hescaBias) < std::fabs(pickBias);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "mean bias: pick-best %+.4f (must be > 0), HESCA %+.4f (|.| must be smaller)",
                  pickBias, hescaBias);
    results.push_back({3, "pick-best underestimates error, HESCA less biased", pass, detail});
  }

  // ---- criterion 4: AUROC oracle equivalence ----
  {
    Rng rng(2024);
    int checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int n = 2 + static_cast<int>(rng.nextBelow(29));
      std::vector<double> scores(n);
      std::vector<int> labels(n);
      labels[0] = 1;
      labels[1] = 0;
      for (int i = 0; i < n; ++i) {
        scores[i] = static_cast<double>(rng.nextBelow(12)) / 12.0;  // ties likely
        if (i >= 2) labels[i] = static_cast<int>(rng.nextBelow(2));
      }
      worst = std::max(worst, std::fabs(metrics::binaryAUROC(scores, labels) -
                                        pairwiseAurocOracle(scores, labels)));
      ++checked;
    }
    const bool pass = worst <= 1e-12;
    char detail[120];
    std::snprintf(detail, sizeof detail, "%d randomized cases, max |difference| = %.2e",
                  checked, worst);
    results.push_back({4, "binary AUROC equals the pairwise oracle", pass, detail});
  }

  // ---- criterion 5: exact-test correctness ----
  {
    Rng rng(2025);
    double worst = 0.0;
    for (int n = 2; n <= 12; ++n) {
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(n), b(n, 0.0);
        for (int i = 0; i < n; ++i) {
          const double mag = (1.0 + static_cast<double>(rng.nextBelow(5))) / 4.0;
          a[i] = rng.nextBelow(2) ? mag : -mag;
        }
        worst = std::max(worst,
                         std::fabs(stats::wilcoxonSignedRank(a, b) - wilcoxonEnumeration(a)));
      }
    }
    stats::ResultsMatrix identical;
    identical.datasets = {"a", "b", "c"};
    identical.classifiers = {"x", "y", "z"};
    identical.scores = {0.5, 0.5, 0.5, 0.7, 0.7, 0.7, 0.2, 0.2, 0.2};
    const auto fr = stats::friedmanTest(identical);
    const auto holm = stats::holmCorrection(std::vector<double>{0.01, 0.02, 0.04}, 0.05);
    const bool holmAll = holm[0] && holm[1] && holm[2];
    const bool pass = worst <= 1e-9 && std::fabs(fr.chiSquaredP - 1.0) <= 1e-12 && holmAll;
    char detail[180];
    std::snprintf(detail, sizeof detail,
                  "wilcoxon exact vs enumeration max |diff| = %.2e; friedman identical-columns "
                  "p = %.3f; holm rejects all three: %s",
                  worst, fr.chiSquaredP, holmAll ? "yes" : "NO");
    results.push_back({5, "exact statistical tests", pass, detail});
  }

  // ---- criterion 6: alpha-limit property ----
  {
    Rng rng(2026);
    int failures = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const int k = 2 + static_cast<int>(rng.nextBelow(7));
      const int c = 2 + static_cast<int>(rng.nextBelow(7));
      std::vector<double> w(k);
      for (double& v : w) v = 0.2 + 0.7 * rng.nextDouble();
      const int best = static_cast<int>(rng.nextBelow(k));
      double maxOther = 0.0;
      for (int i = 0; i < k; ++i)
        if (i != best) maxOther = std::max(maxOther, w[i]);
      w[best] = std::max(w[best], maxOther * 1.001);  // relative gap >= 0.1%

      std::vector<ProbVector> dists(k, ProbVector(c));
      for (int i = 0; i < k; ++i) {
        double sum = 0.0;
        for (int j = 0; j < c; ++j) {
          dists[i][j] = rng.nextDouble() + 0.01;
          sum += dists[i][j];
        }
        for (double& v : dists[i]) v /= sum;
      }
      const int top = argmaxLowestTie(dists[best]);
      dists[best][top] += 0.011;  // argmax margin >= 0.01
      double sum = 0.0;
      for (double v : dists[best]) sum += v;
      for (double& v : dists[best]) v /= sum;

      const ProbVector p = combine(w, 1e4, dists, CombineMode::Probability);
      if (argmaxLowestTie(p) != argmaxLowestTie(dists[best])) ++failures;
    }
    char detail[120];
    std::snprintf(detail, sizeof detail, "10000 randomized cases, %d mismatches", failures);
    results.push_back({6, "alpha = 10^4 recovers the best component's argmax", failures == 0,
                       detail});
  }

  // ---- criterion 7: weight-scale invariance ----
  {
    Rng rng(2027);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int k = 2 + static_cast<int>(rng.nextBelow(6));
      const int c = 2 + static_cast<int>(rng.nextBelow(6));
      std::vector<double> w(k);
      for (double& v : w) v = 0.05 + rng.nextDouble();
      std::vector<ProbVector> dists(k, ProbVector(c));
      for (int i = 0; i < k; ++i) {
        double sum = 0.0;
        for (int j = 0; j < c; ++j) {
          dists[i][j] = rng.nextDouble() + 1e-3;
          sum += dists[i][j];
        }
        for (double& v : dists[i]) v /= sum;
      }
      const double alpha = rng.nextDouble() * 8.0;
      const ProbVector base = combine(w, alpha, dists, CombineMode::Probability);
      for (double lambda : {0.001, 1000.0}) {
        std::vector<double> scaled(w);
        for (double& v : scaled) v *= lambda;
        const ProbVector p = combine(scaled, alpha, dists, CombineMode::Probability);
        for (int j = 0; j < c; ++j) worst = std::max(worst, std::fabs(p[j] - base[j]));
      }
    }
    char detail[120];
    std::snprintf(detail, sizeof detail, "1000 randomized cases, max |difference| = %.2e",
                  worst);
    results.push_back({7, "combine is invariant to weight scaling", worst <= 1e-12, detail});
  }

  // ---- criterion 8: NLL floor ----
  {
    Rng rng(2028);
    bool floorOk = true;
    for (int trial = 0; trial < 1000; ++trial) {
      const int c = 2 + static_cast<int>(rng.nextBelow(20));
      ProbVector dist(c, 0.0);
      dist[rng.nextBelow(c)] = 1.0;
      double sum = 0.0;
      for (int j = 0; j < c; ++j) {
        const double squashed = 0.01 + (1.0 - 0.01 * c) * dist[j];
        if (squashed < 0.01 - 1e-12) floorOk = false;
        sum += squashed;
      }
      if (std::fabs(sum - 1.0) > 1e-9) floorOk = false;
    }
    PredictionSet oneHotWrong;
    oneHotWrong.datasetName = "x";
    oneHotWrong.classifierName = "x";
    PredictionRecord rec;
    rec.trueClass = 0;
    rec.dist = {0.0, 1.0};
    rec.predictedClass = 1;
    oneHotWrong.records.push_back(rec);
    const double nll = metrics::negLogLikelihood(oneHotWrong).sum;
    const double want = -std::log2(0.01);
    const bool pass = floorOk && std::fabs(nll - want) <= 1e-9;
    char detail[140];
    std::snprintf(detail, sizeof detail,
                  "floor holds on 1000 cases; one-hot-wrong nll = %.9f (want %.9f)", nll, want);
    results.push_back({8, "NLL probability floor", pass, detail});
  }

  // ---- criterion 9: resampling determinism and stratification ----
  {
    Rng rng(2029);
    bool countsOk = true, bytesOk = true;
    for (int trial = 0; trial < 200; ++trial) {
      const int c = 2 + static_cast<int>(rng.nextBelow(5));
      std::vector<int> counts;
      std::vector<int> labels;
      std::vector<double> values;
      std::vector<std::string> names;
      for (int j = 0; j < c; ++j) {
        counts.push_back(4 + static_cast<int>(rng.nextBelow(40)));
        names.push_back("k" + std::to_string(j));
        for (int i = 0; i < counts[j]; ++i) {
          labels.push_back(j);
          values.push_back(rng.nextDouble());
        }
      }
      const double p = trial % 2 == 0 ? 0.5 : 0.3 + 0.4 * rng.nextDouble();
      const Dataset d = makeDataset("acc" + std::to_string(trial), values, labels, names, 1);
      const Split a = stratifiedResample(d, trial, p);
      if (classCounts(a.train) != largestRemainderOracle(counts, p)) countsOk = false;
      const Split b = stratifiedResample(d, trial, p);
      if (a.train.values != b.train.values || a.train.labels != b.train.labels ||
          a.test.values != b.test.values)
        bytesOk = false;
    }

    // parallel vs sequential experiment output
    bool parallelOk = true;
    {
      std::vector<Dataset> mini;
      for (int i = 0; i < 2; ++i) {
        SynthSpec spec;
        spec.name = "par" + std::to_string(i);
        spec.classes = 2;
        spec.instances = 40;
        spec.attributes = 3;
        spec.separation = 1.5;
        spec.seed = 70 + i;
        mini.push_back(genGaussianMixture(spec));
      }
      ExperimentConfig config;
      config.roster.push_back(parseRosterToken("zeror", kAlpha));
      config.roster.push_back(parseRosterToken("nn", kAlpha));
      config.resamples = 3;
      config.folds = 4;
      const fs::path seqDir = workDir / "seq";
      const fs::path parDir = workDir / "par";
      config.outDir = seqDir;
      config.threads = 1;
      runExperiment(config, mini);
      config.outDir = parDir;
      config.threads = 4;
      runExperiment(config, mini);
      for (const auto& entry : fs::recursive_directory_iterator(seqDir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream fa(entry.path(), std::ios::binary);
        std::ifstream fb(parDir / fs::relative(entry.path(), seqDir), std::ios::binary);
        std::stringstream sa, sb;
        sa << fa.rdbuf();
        sb << fb.rdbuf();
        if (sa.str() != sb.str() || sa.str().empty()) parallelOk = false;
      }
    }
    const bool pass = countsOk && bytesOk && parallelOk;
    char detail[180];
    std::snprintf(detail, sizeof detail,
                  "largest-remainder counts on 200 datasets: %s; repeat calls byte-identical: "
                  "%s; parallel == sequential output: %s",
                  countsOk ? "exact" : "MISMATCH", bytesOk ? "yes" : "NO",
                  parallelOk ? "yes" : "NO");
    results.push_back({9, "stratified resampling determinism", pass, detail});
  }

  // ---- criterion 10: post-hoc equals live at file precision ----
  {
    double worst = 0.0;
    int mismatches = 0;
    for (int d = 0; d < nDatasets; ++d) {
      for (int r = 0; r < kResamples; ++r) {
        worst = std::max(worst, table[d][r].maxProbDiff);
        mismatches += table[d][r].classMismatches;
      }
    }
    const bool pass = mismatches == 0 && worst <= 5e-5;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "predicted classes identical on all folds (%d mismatches); max probability "
                  "drift %.2e (file precision budget 5e-5)",
                  mismatches, worst);
    results.push_back({10, "post-hoc composition reproduces the live ensemble", pass, detail});
  }

  // ---- criterion 11: ZeroR robustness ----
  {
    double withErr = 0.0, withoutErr = 0.0;
    for (int d = 0; d < nDatasets; ++d) {
      withErr += meanOver(d, &TaskOut::hescaZrError);
      withoutErr += meanOver(d, &TaskOut::hescaError);
    }
    withErr /= nDatasets;
    withoutErr /= nDatasets;
    const double shift = std::fabs(withErr - withoutErr);
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "suite mean error %s without ZeroR vs %s with; |shift| = %s (< 1 point)",
                  pct(withoutErr).c_str(), pct(withErr).c_str(), pct(shift).c_str());
    results.push_back({11, "adding ZeroR barely moves HESCA", shift < 0.01, detail});
  }

  // ---- criterion 12: tuned RBF baseline harness ----
  {
    double rbfErrSum = 0.0, hescaErrSum = 0.0;
    int cells = 0;
    bool estimateExact = true;
    for (int d = 0; d < nDatasets; ++d) {
      for (int r = 0; r < kRbfResamples; ++r) {
        const Split split = stratifiedResample(datasets[d], r, 0.5);
        LearnerParams base;
        base.kernel = SvmKernelKind::Rbf;
        const tuning::TunedModel tuned = tuning::gridSearchCV(
            LearnerKind::Svm, tuning::rbfReducedGrid(), split.train, kFolds,
            hash64("TunedSVMRBF"), base);
        int wrong = 0;
        for (int i = 0; i < split.test.n; ++i)
          if (tuned.model.predictClass(split.test.row(i)) != split.test.labels[i]) ++wrong;
        rbfErrSum += static_cast<double>(wrong) / split.test.n;
        hescaErrSum += table[d][r].hescaError;
        ++cells;

        if (d == 0 && r == 0) {
          // the reported estimate must replay exactly at the chosen point
          ClassifierSpec spec;
          spec.kind = LearnerKind::Svm;
          spec.params = base;
          spec.seed = tuned.search.chosenSeed;
          for (const auto& [name, value] : tuned.search.chosenParams)
            tuning::applyParam(spec, name, value);
          const int k = effectiveFolds(split.train, kFolds);
          const auto folds =
              stratifiedFolds(split.train, k, hash64(split.train.name + "/tune", k));
          int correct = 0;
          for (const auto& holdOut : folds) {
            const Model m = train(spec, datasetWithout(split.train, holdOut));
            for (int i : holdOut)
              if (m.predictClass(split.train.row(i)) == split.train.labels[i]) ++correct;
          }
          estimateExact =
              tuned.search.trainEstimate == static_cast<double>(correct) / split.train.n;
        }
      }
    }
    const double rbfErr = rbfErrSum / cells;
    const double hescaErr = hescaErrSum / cells;
    const bool pass = estimateExact && hescaErr <= rbfErr + 0.02;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "5x5 grid complete on %d cells; estimate replay exact: %s; mean error HESCA "
                  "%s vs tuned RBF %s (margin 2 points)",
                  cells, estimateExact ? "yes" : "NO", pct(hescaErr).c_str(),
                  pct(rbfErr).c_str());
    results.push_back({12, "tuned RBF-SVM baseline harness", pass, detail});
  }

  // ---- report ----
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  int passed = 0;
  for (const Criterion& criterion : results) {
    std::printf("[%s] criterion %2d: %s — %s\n", criterion.pass ? "PASS" : "FAIL",
                criterion.id, criterion.name.c_str(), criterion.detail.c_str());
    if (criterion.pass) ++passed;
  }
  std::printf("RESULT: %d/%zu criteria passed in %.1f s\n", passed, results.size(), seconds);
  fs::remove_all(workDir);
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}

#pragma once

#include <filesystem>
#include <map>
#include <set>

#include "json.hpp"

#include "hesca/ensemble.hpp"
#include "hesca/metrics.hpp"
#include "hesca/results_io.hpp"
#include "hesca/stats.hpp"

namespace hesca::report {

using nlohmann::json;

// Per-(classifier, dataset, resample) numbers distilled from one pair of
// result files, plus a fingerprint of the test-split ground truth used to
// check that classifiers were run on the same folds.
struct FoldMetrics {
  int resampleId = 0;
  double accuracy = 0.0;
  metrics::MetricReport report;
  double trainEstimate = 0.0;  // accuracy scale
  int trainSize = 0;
  int classCount = 0;
  std::uint64_t truthHash = 0;
};

struct ResultsStore {
  std::vector<std::string> classifiers;
  std::vector<std::string> datasets;
  // cells[classifier][dataset] -> resampleId -> metrics
  std::vector<std::vector<std::map<int, FoldMetrics>>> cells;

  int classifierIndex(const std::string& name) const {
    for (std::size_t i = 0; i < classifiers.size(); ++i)
      if (classifiers[i] == name) return static_cast<int>(i);
    throw Error("classifier '" + name + "' not in results");
  }
};

namespace detail {

inline std::uint64_t truthHash(const PredictionSet& p) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& rec : p.records) {
    h ^= static_cast<std::uint64_t>(rec.trueClass) + 0x9e37;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline FoldMetrics foldMetrics(const PredictionSet& train, const PredictionSet& test) {
  FoldMetrics out;
  out.resampleId = test.resampleId;
  out.trainSize = static_cast<int>(train.records.size());
  out.classCount = test.classCount();
  out.trainEstimate = test.trainEstimate;
  out.truthHash = truthHash(test);

  std::vector<double> trainProps(train.classCount(), 0.0);
  for (const auto& rec : train.records) trainProps[rec.trueClass] += 1.0;
  for (double& v : trainProps) v /= train.records.size();

  out.report = metrics::summarize(test, trainProps, test.trainEstimate);
  out.accuracy = 1.0 - out.report.error;
  return out;
}

}  // namespace detail

// Scans <root>/<classifier>/<dataset>/{train,test}<r>.csv for the requested
// classifiers (all subdirectories when the list is empty).
inline ResultsStore loadResultsTree(const std::filesystem::path& root,
                                    std::vector<std::string> classifiers = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw Error("results directory '" + root.string() + "' missing");
  if (classifiers.empty()) {
    for (const auto& entry : fs::directory_iterator(root))
      if (entry.is_directory()) classifiers.push_back(entry.path().filename().string());
    std::sort(classifiers.begin(), classifiers.end());
  }

  ResultsStore store;
  store.classifiers = classifiers;
  std::set<std::string> datasetNames;
  for (const std::string& cls : classifiers) {
    const fs::path dir = root / cls;
    if (!fs::is_directory(dir)) throw Error("no results for classifier '" + cls + "'");
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_directory()) datasetNames.insert(entry.path().filename().string());
  }
  store.datasets.assign(datasetNames.begin(), datasetNames.end());

  store.cells.resize(classifiers.size());
  for (std::size_t c = 0; c < classifiers.size(); ++c) {
    store.cells[c].resize(store.datasets.size());
    for (std::size_t d = 0; d < store.datasets.size(); ++d) {
      const fs::path dir = root / classifiers[c] / store.datasets[d];
      if (!fs::is_directory(dir)) continue;
      for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string file = entry.path().filename().string();
        if (file.rfind("test", 0) != 0) continue;
        const PredictionSet test = readResults(entry.path());
        const fs::path trainPath = dir / ("train" + std::to_string(test.resampleId) + ".csv");
        if (!fs::exists(trainPath))
          throw Error("missing train file for " + entry.path().string());
        const PredictionSet train = readResults(trainPath);
        store.cells[c][d][test.resampleId] = detail::foldMetrics(train, test);
      }
    }
  }
  return store;
}

// Folds present for every classifier on a dataset; misaligned ground truth is
// an error naming the offenders.
inline std::vector<int> alignedResamples(const ResultsStore& store, int dataset) {
  std::vector<int> common;
  if (store.cells.empty()) return common;
  for (const auto& [r, fm] : store.cells[0][dataset]) {
    bool everywhere = true;
    for (std::size_t c = 1; c < store.cells.size(); ++c)
      if (!store.cells[c][dataset].count(r)) everywhere = false;
    if (!everywhere) continue;
    for (std::size_t c = 1; c < store.cells.size(); ++c) {
      const FoldMetrics& other = store.cells[c][dataset].at(r);
      if (other.truthHash != fm.truthHash)
        throw Error("misaligned folds on " + store.datasets[dataset] + " resample " +
                    std::to_string(r) + ": " + store.classifiers[0] + " vs " +
                    store.classifiers[c]);
    }
    common.push_back(r);
  }
  return common;
}

inline double foldMean(const std::map<int, FoldMetrics>& cell, const std::vector<int>& folds,
                       double FoldMetrics::*member) {
  double sum = 0.0;
  for (int r : folds) sum += cell.at(r).*member;
  return folds.empty() ? 0.0 : sum / folds.size();
}

inline double foldMeanMetric(const std::map<int, FoldMetrics>& cell,
                             const std::vector<int>& folds,
                             double metrics::MetricReport::*member) {
  double sum = 0.0;
  for (int r : folds) sum += cell.at(r).report.*member;
  return folds.empty() ? 0.0 : sum / folds.size();
}

struct BandRow {
  std::string label;
  int problems = 0;
  int winsA = 0;
  double meanErrorDifference = 0.0;  // error(B) - error(A): positive favours A
};

struct CompareReport {
  std::vector<std::string> classifiers;
  std::vector<std::string> datasets;       // datasets with complete aligned cells
  std::vector<std::string> missing;        // dropped dataset cells, explicit
  std::string metric;                      // primary metric name
  stats::ResultsMatrix matrix;             // mean primary metric per cell
  stats::ResultsMatrix accuracyMatrix;
  stats::FriedmanResult friedman;
  std::vector<std::vector<double>> wilcoxonP;
  stats::CdDiagramData cd;
  std::vector<std::vector<int>> wins;      // wins[a][b]: a strictly better than b
  std::vector<double> meanBias;            // per classifier over all folds
  std::vector<std::vector<double>> biasValues;
  stats::SharpshooterResult sharpshooter;  // classifiers[0] vs classifiers[1]
  std::vector<BandRow> byTrainSize;        // classifiers[0] vs classifiers[1]
  std::vector<BandRow> byClassCount;
};

namespace detail {

inline bool lowerIsBetter(const std::string& metric) {
  return metric == "error" || metric == "balancedError" || metric == "nllMean" ||
         metric == "nllSum";
}

inline double metricValue(const FoldMetrics& fm, const std::string& metric) {
  if (metric == "error") return fm.report.error;
  if (metric == "accuracy") return fm.accuracy;
  if (metric == "balancedError") return fm.report.balancedError;
  if (metric == "auroc") return fm.report.auroc;
  if (metric == "nllMean") return fm.report.nllMean;
  if (metric == "nllSum") return fm.report.nllSum;
  throw Error("unknown metric '" + metric + "'");
}

}  // namespace detail

inline CompareReport compareResults(const ResultsStore& store, const std::string& metric,
                                    double alpha) {
  const int k = static_cast<int>(store.classifiers.size());
  if (k < 2) throw Error("compare needs >= 2 classifiers");

  CompareReport report;
  report.classifiers = store.classifiers;
  report.metric = metric;

  struct DatasetBlock {
    std::string name;
    std::vector<int> folds;
    std::vector<double> means;     // per classifier, primary metric
    std::vector<double> accMeans;  // per classifier
    int trainSize = 0;
    int classCount = 0;
  };
  std::vector<DatasetBlock> blocks;
  for (std::size_t d = 0; d < store.datasets.size(); ++d) {
    const std::vector<int> folds = alignedResamples(store, static_cast<int>(d));
    if (folds.empty()) {
      report.missing.push_back(store.datasets[d]);
      continue;
    }
    DatasetBlock block;
    block.name = store.datasets[d];
    block.folds = folds;
    for (int c = 0; c < k; ++c) {
      double metricSum = 0.0, accSum = 0.0;
      for (int r : folds) {
        const FoldMetrics& fm = store.cells[c][d].at(r);
        metricSum += detail::metricValue(fm, metric);
        accSum += fm.accuracy;
      }
      block.means.push_back(metricSum / folds.size());
      block.accMeans.push_back(accSum / folds.size());
    }
    const FoldMetrics& any = store.cells[0][d].at(folds.front());
    block.trainSize = any.trainSize;
    block.classCount = any.classCount;
    blocks.push_back(std::move(block));
  }
  if (blocks.size() < 2) throw Error("compare needs >= 2 datasets with aligned results");

  report.matrix.higherIsBetter = !detail::lowerIsBetter(metric);
  report.accuracyMatrix.higherIsBetter = true;
  report.matrix.classifiers = report.accuracyMatrix.classifiers = store.classifiers;
  for (const DatasetBlock& block : blocks) {
    report.datasets.push_back(block.name);
    report.matrix.datasets.push_back(block.name);
    report.accuracyMatrix.datasets.push_back(block.name);
    for (int c = 0; c < k; ++c) {
      report.matrix.scores.push_back(block.means[c]);
      report.accuracyMatrix.scores.push_back(block.accMeans[c]);
    }
  }

  report.friedman = stats::friedmanTest(report.matrix);

  report.wilcoxonP.assign(k, std::vector<double>(k, 1.0));
  report.wins.assign(k, std::vector<int>(k, 0));
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      std::vector<double> va, vb;
      for (const DatasetBlock& block : blocks) {
        va.push_back(block.means[a]);
        vb.push_back(block.means[b]);
      }
      double p = 1.0;
      try {
        p = stats::wilcoxonSignedRank(va, vb);
      } catch (const Error&) {
        p = 1.0;  // identical columns: no evidence of difference
      }
      report.wilcoxonP[a][b] = report.wilcoxonP[b][a] = p;
      for (std::size_t i = 0; i < va.size(); ++i) {
        const bool aBetter = report.matrix.higherIsBetter ? va[i] > vb[i] : va[i] < vb[i];
        const bool bBetter = report.matrix.higherIsBetter ? vb[i] > va[i] : vb[i] < va[i];
        if (aBetter) ++report.wins[a][b];
        if (bBetter) ++report.wins[b][a];
      }
    }
  }

  report.cd = stats::formCliques(report.friedman.averageRanks, report.wilcoxonP, alpha,
                                 store.classifiers);

  // bias distribution over all folds (Fig. 4 analog)
  report.biasValues.assign(k, {});
  report.meanBias.assign(k, 0.0);
  for (int c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < store.datasets.size(); ++d) {
      for (const auto& [r, fm] : store.cells[c][d])
        report.biasValues[c].push_back(fm.report.bias.value_or(0.0));
    }
    for (double b : report.biasValues[c]) report.meanBias[c] += b;
    if (!report.biasValues[c].empty()) report.meanBias[c] /= report.biasValues[c].size();
  }

  // pair analyses: classifiers[0] as A, classifiers[1] as B
  {
    std::vector<double> trainA, trainB, testA, testB;
    for (std::size_t d = 0; d < store.datasets.size(); ++d) {
      const std::vector<int> folds = alignedResamples(store, static_cast<int>(d));
      for (int r : folds) {
        const FoldMetrics& fa = store.cells[0][d].at(r);
        const FoldMetrics& fb = store.cells[1][d].at(r);
        trainA.push_back(fa.trainEstimate);
        trainB.push_back(fb.trainEstimate);
        testA.push_back(fa.accuracy);
        testB.push_back(fb.accuracy);
      }
    }
    report.sharpshooter = stats::texasSharpshooter(trainA, trainB, testA, testB);
  }

  auto fillBands = [&](auto bandOf, const std::vector<std::string>& labels,
                       std::vector<BandRow>& rows) {
    rows.clear();
    for (const std::string& label : labels) rows.push_back({label, 0, 0, 0.0});
    for (const DatasetBlock& block : blocks) {
      const int band = bandOf(block);
      BandRow& row = rows[band];
      ++row.problems;
      const double errA = 1.0 - block.accMeans[0];
      const double errB = 1.0 - block.accMeans[1];
      if (errA < errB) ++row.winsA;
      row.meanErrorDifference += errB - errA;
    }
    for (BandRow& row : rows)
      if (row.problems > 0) row.meanErrorDifference /= row.problems;
  };
  fillBands(
      [](const DatasetBlock& b) {
        if (b.trainSize <= 100) return 0;
        if (b.trainSize <= 500) return 1;
        if (b.trainSize <= 1000) return 2;
        if (b.trainSize <= 5000) return 3;
        return 4;
      },
      {"1-100", "101-500", "501-1000", "1001-5000", ">5001"}, report.byTrainSize);
  fillBands(
      [](const DatasetBlock& b) {
        if (b.classCount <= 2) return 0;
        if (b.classCount <= 5) return 1;
        if (b.classCount <= 10) return 2;
        return 3;
      },
      {"2", "3-5", "6-10", "11+"}, report.byClassCount);

  return report;
}

// ---- serialization ----

inline json cdToJson(const stats::CdDiagramData& cd) {
  json out;
  out["alpha"] = cd.alpha;
  out["classifiers"] = cd.classifiers;
  out["averageRanks"] = cd.averageRanks;
  out["cliques"] = cd.cliques;
  return out;
}

inline json toJson(const CompareReport& report) {
  json out;
  out["classifiers"] = report.classifiers;
  out["datasets"] = report.datasets;
  out["missing"] = report.missing;
  out["metric"] = report.metric;
  out["matrix"] = report.matrix.scores;
  out["friedman"] = {{"averageRanks", report.friedman.averageRanks},
                     {"chiSquared", report.friedman.chiSquared},
                     {"chiSquaredP", report.friedman.chiSquaredP},
                     {"imanDavenportP", report.friedman.imanDavenportP}};
  out["wilcoxonP"] = report.wilcoxonP;
  out["cd"] = cdToJson(report.cd);
  out["wins"] = report.wins;
  {
    json wdl = json::array();
    const int k = static_cast<int>(report.classifiers.size());
    const int n = static_cast<int>(report.datasets.size());
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        wdl.push_back({{"a", report.classifiers[a]},
                       {"b", report.classifiers[b]},
                       {"win", report.wins[a][b]},
                       {"draw", n - report.wins[a][b] - report.wins[b][a]},
                       {"loss", report.wins[b][a]}});
    out["winDrawLoss"] = wdl;
  }
  out["meanBias"] = report.meanBias;
  out["biasValues"] = report.biasValues;
  json sharp;
  sharp["pair"] = {report.classifiers[0], report.classifiers[1]};
  sharp["tp"] = report.sharpshooter.tp;
  sharp["tn"] = report.sharpshooter.tn;
  sharp["fp"] = report.sharpshooter.fp;
  sharp["fn"] = report.sharpshooter.fn;
  sharp["ties"] = report.sharpshooter.ties;
  if (report.sharpshooter.sensitivity) sharp["sensitivity"] = *report.sharpshooter.sensitivity;
  if (report.sharpshooter.specificity) sharp["specificity"] = *report.sharpshooter.specificity;
  sharp["points"] = report.sharpshooter.points;
  out["sharpshooter"] = sharp;
  auto bandsJson = [](const std::vector<BandRow>& rows) {
    json arr = json::array();
    for (const BandRow& row : rows)
      arr.push_back({{"band", row.label},
                     {"problems", row.problems},
                     {"wins", row.winsA},
                     {"meanErrorDifference", row.meanErrorDifference}});
    return arr;
  };
  out["byTrainSize"] = bandsJson(report.byTrainSize);
  out["byClassCount"] = bandsJson(report.byClassCount);

  json scatter = json::array();
  const int k = static_cast<int>(report.classifiers.size());
  for (std::size_t d = 0; d < report.datasets.size(); ++d) {
    json row;
    row["dataset"] = report.datasets[d];
    for (int c = 0; c < k; ++c)
      row[report.classifiers[c]] = report.accuracyMatrix.at(static_cast<int>(d), c);
    scatter.push_back(row);
  }
  out["accuracyScatter"] = scatter;
  return out;
}

// Standalone SVG rendering of a critical difference diagram: a rank axis,
// classifier stems, and one bar per clique.
inline std::string cdDiagramSvg(const stats::CdDiagramData& cd) {
  const int k = static_cast<int>(cd.averageRanks.size());
  const double width = 640.0, axisLeft = 60.0, axisRight = width - 60.0, axisY = 60.0;
  const double span = axisRight - axisLeft;
  auto xOf = [&](double rank) { return axisLeft + (rank - 1.0) / std::max(1, k - 1) * span; };

  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return cd.averageRanks[a] < cd.averageRanks[b];
  });

  const double cliqueGap = 12.0;
  const double labelTop = axisY + 30.0 + cliqueGap * (static_cast<double>(cd.cliques.size()) + 1);
  const double height = labelTop + 22.0 * ((k + 1) / 2) + 30.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<line x1=\"" << axisLeft << "\" y1=\"" << axisY << "\" x2=\"" << axisRight
      << "\" y2=\"" << axisY << "\" stroke=\"black\"/>\n";
  for (int r = 1; r <= k; ++r) {
    svg << "<line x1=\"" << xOf(r) << "\" y1=\"" << axisY - 5 << "\" x2=\"" << xOf(r)
        << "\" y2=\"" << axisY + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << xOf(r) << "\" y=\"" << axisY - 10
        << "\" text-anchor=\"middle\">" << r << "</text>\n";
  }
  for (std::size_t q = 0; q < cd.cliques.size(); ++q) {
    double lo = 1e9, hi = -1e9;
    for (int idx : cd.cliques[q]) {
      lo = std::min(lo, cd.averageRanks[idx]);
      hi = std::max(hi, cd.averageRanks[idx]);
    }
    const double y = axisY + 14.0 + cliqueGap * static_cast<double>(q);
    svg << "<line x1=\"" << xOf(lo) - 3 << "\" y1=\"" << y << "\" x2=\"" << xOf(hi) + 3
        << "\" y2=\"" << y << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }
  for (int i = 0; i < k; ++i) {
    const int idx = order[i];
    const bool leftSide = i < (k + 1) / 2;
    const double slot = leftSide ? i : k - 1 - i;
    const double labelY = labelTop + 22.0 * slot;
    const double labelX = leftSide ? axisLeft - 40.0 : axisRight + 40.0;
    const double x = xOf(cd.averageRanks[idx]);
    svg << "<polyline fill=\"none\" stroke=\"black\" points=\"" << x << "," << axisY << " "
        << x << "," << labelY - 4 << " " << (leftSide ? labelX + 35.0 : labelX - 35.0) << ","
        << labelY - 4 << "\"/>\n";
    const std::string name =
        cd.classifiers.empty() ? "#" + std::to_string(idx) : cd.classifiers[idx];
    svg << "<text x=\"" << labelX << "\" y=\"" << labelY - 8 << "\" text-anchor=\""
        << (leftSide ? "end" : "start") << "\">" << name << " ("
        << cd.averageRanks[idx] << ")</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// Mean metrics per (classifier, dataset) recomputed from the raw result
// files; the run summary is this object serialized.
inline json summarizeResultsTree(const std::filesystem::path& root) {
  const ResultsStore store = loadResultsTree(root);
  json out;
  out["classifiers"] = store.classifiers;
  out["datasets"] = store.datasets;
  json cells = json::array();
  for (std::size_t c = 0; c < store.classifiers.size(); ++c) {
    for (std::size_t d = 0; d < store.datasets.size(); ++d) {
      const auto& cell = store.cells[c][d];
      if (cell.empty()) {
        cells.push_back({{"classifier", store.classifiers[c]},
                         {"dataset", store.datasets[d]},
                         {"missing", true}});
        continue;
      }
      std::vector<int> folds;
      for (const auto& [r, fm] : cell) folds.push_back(r);
      json row;
      row["classifier"] = store.classifiers[c];
      row["dataset"] = store.datasets[d];
      row["resamples"] = folds;
      row["error"] = 1.0 - foldMean(cell, folds, &FoldMetrics::accuracy);
      row["accuracy"] = foldMean(cell, folds, &FoldMetrics::accuracy);
      row["balancedError"] = foldMeanMetric(cell, folds, &metrics::MetricReport::balancedError);
      row["weightedRecall"] = foldMeanMetric(cell, folds, &metrics::MetricReport::weightedRecall);
      row["nllMean"] = foldMeanMetric(cell, folds, &metrics::MetricReport::nllMean);
      row["auroc"] = foldMeanMetric(cell, folds, &metrics::MetricReport::auroc);
      row["trainEstimate"] = foldMean(cell, folds, &FoldMetrics::trainEstimate);
      double bias = 0.0;
      for (int r : folds) bias += cell.at(r).report.bias.value_or(0.0);
      row["bias"] = bias / folds.size();
      cells.push_back(row);
    }
  }
  out["cells"] = cells;
  return out;
}

// ---- alpha sweep over stored component results ----

struct AlphaSweepRow {
  double alpha = 0.0;
  double meanAccuracy = 0.0;
};

// Re-applies the combination per alpha over stored component results; no
// retraining. The mean is over every (dataset, resample) pair present for all
// components.
inline std::vector<AlphaSweepRow> sweepAlphaFromStore(
    const std::filesystem::path& root, const std::vector<std::string>& components,
    std::span<const double> alphas) {
  namespace fs = std::filesystem;
  std::vector<AlphaSweepRow> rows;
  for (double a : alphas) rows.push_back({a, 0.0});

  std::set<std::string> datasetNames;
  for (const auto& entry : fs::directory_iterator(root / components.front()))
    if (entry.is_directory()) datasetNames.insert(entry.path().filename().string());

  int cases = 0;
  for (const std::string& dataset : datasetNames) {
    std::set<int> resamples;
    for (const auto& entry : fs::directory_iterator(root / components.front() / dataset)) {
      const std::string file = entry.path().filename().string();
      if (file.rfind("test", 0) == 0)
        resamples.insert(std::stoi(file.substr(4, file.size() - 8)));
    }
    for (int r : resamples) {
      std::vector<ComponentResults> comps;
      bool complete = true;
      for (const std::string& comp : components) {
        const fs::path testPath = root / comp / dataset / ("test" + std::to_string(r) + ".csv");
        const fs::path trainPath = root / comp / dataset / ("train" + std::to_string(r) + ".csv");
        if (!fs::exists(testPath) || !fs::exists(trainPath)) {
          complete = false;
          break;
        }
        comps.push_back({readResults(trainPath), readResults(testPath)});
      }
      if (!complete) continue;
      ++cases;
      for (AlphaSweepRow& row : rows) {
        const ComposedResults composed = composeFromResults(comps, row.alpha);
        row.meanAccuracy += composed.test.accuracy();
      }
    }
  }
  if (cases == 0) throw Error("sweep: no complete (dataset, resample) cases");
  for (AlphaSweepRow& row : rows) row.meanAccuracy /= cases;
  return rows;
}

}  // namespace hesca::report

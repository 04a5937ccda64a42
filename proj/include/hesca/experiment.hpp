#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "hesca/ensemble.hpp"
#include "hesca/results_io.hpp"
#include "hesca/tuning.hpp"

namespace hesca {

// One roster line of an experiment: either a plain classifier or one of the
// composite strategies built on a component roster.
struct RosterEntry {
  enum class Type { Single, Hesca, PickBest, GridTuned, RandomTuned };
  Type type = Type::Single;
  std::string name;
  ClassifierSpec spec;                     // Single
  std::vector<ClassifierSpec> components;  // Hesca / PickBest
  double alpha = 4.0;                      // Hesca
  bool tuneDnnComponent = false;           // Hesca: add the random-search-tuned
                                           // two-hidden-layer network
  LearnerKind tunedKind = LearnerKind::Svm;
  LearnerParams tunedBase;
  tuning::ParamGrid grid;        // GridTuned
  tuning::SearchSpace space;     // RandomTuned; empty dims + Mlp kind means
                                 // the three-parameter network space built
                                 // from the train split's shape
  int budget = 20;               // RandomTuned
  int tuneFolds = 10;
};

struct ExperimentConfig {
  std::vector<std::filesystem::path> datasetPaths;
  std::string classColumn;  // CSV class column override
  std::vector<RosterEntry> roster;
  int resamples = 30;
  double trainProportion = 0.5;
  double alpha = 4.0;
  int folds = 10;
  std::filesystem::path outDir;
  int threads = 1;
};

// ---- roster construction ----

inline ClassifierSpec namedSpec(LearnerKind kind, const std::string& name) {
  ClassifierSpec spec;
  spec.kind = kind;
  spec.name = name;
  spec.seed = hash64(name);
  return spec;
}

// The five basic components.
inline std::vector<ClassifierSpec> hescaComponents() {
  std::vector<ClassifierSpec> specs;
  specs.push_back(namedSpec(LearnerKind::Logistic, "Logistic"));
  specs.push_back(namedSpec(LearnerKind::C45Tree, "C4.5"));
  ClassifierSpec svml = namedSpec(LearnerKind::Svm, "SVML");
  svml.params.kernel = SvmKernelKind::Linear;
  specs.push_back(svml);
  ClassifierSpec nn = namedSpec(LearnerKind::Knn, "NN");
  nn.params.k = 1;
  specs.push_back(nn);
  specs.push_back(namedSpec(LearnerKind::Mlp, "MLP"));
  return specs;
}

inline LearnerParams dnnBaseParams() {
  LearnerParams p;
  p.hidden2 = 1;  // placeholder so two layers exist; the search sets the size
  p.holdoutStopping = true;
  return p;
}

// The strong components; the tuned two-hidden-layer network joins at build
// time (see runTask), since its search space depends on the data shape.
inline std::vector<ClassifierSpec> hescaPlusBaseComponents() {
  std::vector<ClassifierSpec> specs;
  specs.push_back(namedSpec(LearnerKind::RandomForest, "RandF"));
  specs.push_back(namedSpec(LearnerKind::RotationForest, "RotF"));
  ClassifierSpec svmq = namedSpec(LearnerKind::Svm, "SVMQ");
  svmq.params.kernel = SvmKernelKind::Poly;
  svmq.params.polyDegree = 2;
  specs.push_back(svmq);
  return specs;
}

namespace config_detail {

inline LearnerKind kindFromToken(const std::string& token) {
  if (token == "logistic") return LearnerKind::Logistic;
  if (token == "c45") return LearnerKind::C45Tree;
  if (token == "svm" || token == "svml" || token == "svmq" || token == "svmrbf")
    return LearnerKind::Svm;
  if (token == "nn" || token == "knn") return LearnerKind::Knn;
  if (token == "mlp") return LearnerKind::Mlp;
  if (token == "randf") return LearnerKind::RandomForest;
  if (token == "rotf") return LearnerKind::RotationForest;
  if (token == "zeror") return LearnerKind::ZeroR;
  if (token == "nb") return LearnerKind::GaussianNB;
  throw Error("unknown classifier '" + token + "'");
}

inline void applyTextParam(ClassifierSpec& spec, const std::string& key,
                           const std::string& value) {
  if (key == "kernel") {
    if (value == "linear") spec.params.kernel = SvmKernelKind::Linear;
    else if (value == "poly") spec.params.kernel = SvmKernelKind::Poly;
    else if (value == "rbf") spec.params.kernel = SvmKernelKind::Rbf;
    else throw Error("unknown kernel '" + value + "'");
    return;
  }
  if (key == "seed") {
    spec.seed = std::stoull(value);
    return;
  }
  tuning::applyParam(spec, key, std::stod(value));
}

}  // namespace config_detail

// Parses one roster token: a preset name (hesca, hesca-plus, pick-best,
// tuned-rbf, dnn) or `kind[:key=value]...`, e.g. `nn:k=3` or
// `svm:kernel=rbf:C=2`.
inline RosterEntry parseRosterToken(const std::string& token, double alpha) {
  RosterEntry entry;
  entry.name = token;
  if (token == "hesca") {
    entry.type = RosterEntry::Type::Hesca;
    entry.name = "HESCA";
    entry.components = hescaComponents();
    entry.alpha = alpha;
    return entry;
  }
  if (token == "hesca-plus") {
    entry.type = RosterEntry::Type::Hesca;
    entry.name = "HESCA+";
    entry.components = hescaPlusBaseComponents();
    entry.tuneDnnComponent = true;
    entry.alpha = alpha;
    return entry;
  }
  if (token == "pick-best") {
    entry.type = RosterEntry::Type::PickBest;
    entry.name = "PickBest";
    entry.components = hescaComponents();
    return entry;
  }
  if (token == "tuned-rbf") {
    entry.type = RosterEntry::Type::GridTuned;
    entry.name = "TunedSVMRBF";
    entry.tunedKind = LearnerKind::Svm;
    entry.tunedBase.kernel = SvmKernelKind::Rbf;
    entry.grid = tuning::rbfReducedGrid();
    entry.tuneFolds = 10;
    return entry;
  }
  if (token == "dnn") {
    entry.type = RosterEntry::Type::RandomTuned;
    entry.name = "DNN";
    entry.tunedKind = LearnerKind::Mlp;
    entry.tunedBase.hidden2 = 1;
    entry.tunedBase.holdoutStopping = true;
    entry.budget = 20;
    entry.tuneFolds = 3;
    return entry;
  }

  std::stringstream ss(token);
  std::string part;
  std::getline(ss, part, ':');
  entry.type = RosterEntry::Type::Single;
  entry.spec = namedSpec(config_detail::kindFromToken(part), token);
  if (part == "svmq") {
    entry.spec.params.kernel = SvmKernelKind::Poly;
  } else if (part == "svmrbf") {
    entry.spec.params.kernel = SvmKernelKind::Rbf;
  }
  while (std::getline(ss, part, ':')) {
    const std::size_t eq = part.find('=');
    if (eq == std::string::npos) throw Error("bad parameter '" + part + "' in '" + token + "'");
    config_detail::applyTextParam(entry.spec, part.substr(0, eq), part.substr(eq + 1));
  }
  return entry;
}

// ---- config file ----

// Key = value lines; '#' starts a comment. Lists are comma separated.
inline ExperimentConfig loadConfig(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int lineNo = 0;
  auto splitList = [](const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = detail::trim(item);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineNo;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string trimmed = detail::trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineNo);
    const std::string key = detail::trim(trimmed.substr(0, eq));
    const std::string value = detail::trim(trimmed.substr(eq + 1));
    if (key == "datasets") {
      for (const std::string& p : splitList(value)) config.datasetPaths.emplace_back(p);
    } else if (key == "roster") {
      for (const std::string& t : splitList(value))
        config.roster.push_back(parseRosterToken(t, config.alpha));
    } else if (key == "resamples") {
      config.resamples = std::stoi(value);
    } else if (key == "trainProportion") {
      config.trainProportion = std::stod(value);
    } else if (key == "alpha") {
      config.alpha = std::stod(value);
      for (RosterEntry& entry : config.roster)
        if (entry.type == RosterEntry::Type::Hesca) entry.alpha = config.alpha;
    } else if (key == "folds") {
      config.folds = std::stoi(value);
    } else if (key == "out") {
      config.outDir = value;
    } else if (key == "threads") {
      config.threads = std::stoi(value);
    } else if (key == "classColumn") {
      config.classColumn = value;
    } else {
      throw ParseError("unknown config key '" + key + "'", lineNo);
    }
  }
  return config;
}

// ---- running ----

struct TaskResult {
  PredictionSet train;
  PredictionSet test;
};

namespace run_detail {

inline PredictionSet predictTestSet(const Model& model, const Dataset& test,
                                    const std::string& classifierName, int resampleId,
                                    double trainEstimate) {
  PredictionSet out;
  out.datasetName = test.name;
  out.classifierName = classifierName;
  out.resampleId = resampleId;
  out.splitTag = "test";
  out.trainEstimate = trainEstimate;
  out.records.reserve(test.n);
  for (int i = 0; i < test.n; ++i) {
    PredictionRecord rec;
    rec.trueClass = test.labels[i];
    rec.dist = model.predictDistribution(test.row(i));
    rec.predictedClass = argmaxLowestTie(rec.dist);
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace run_detail

// Runs one roster entry on one split; both returned sets carry the entry's
// train-data accuracy estimate.
inline TaskResult runTask(const RosterEntry& entry, const Split& split, int folds) {
  TaskResult out;
  const Dataset& train = split.train;
  switch (entry.type) {
    case RosterEntry::Type::Single: {
      out.train = crossValidatePredictions(entry.spec, train, folds);
      const Model model = hesca::train(entry.spec, train);
      out.test = run_detail::predictTestSet(model, split.test, entry.name, split.resampleId,
                                            out.train.trainEstimate);
      break;
    }
    case RosterEntry::Type::Hesca: {
      std::vector<ClassifierSpec> components = entry.components;
      if (entry.tuneDnnComponent) {
        // three-parameter random search for the deep-network stand-in, run
        // once on this train split; the chosen setting then joins the roster
        // as a fixed component
        const tuning::TunedModel tuned = tuning::randomSearchCV(
            LearnerKind::Mlp, tuning::mlpSearchSpace(train.m, train.c), 20, train, 3,
            hash64(entry.name + "/dnn"), dnnBaseParams());
        ClassifierSpec dnn = namedSpec(LearnerKind::Mlp, "DNN");
        dnn.params = dnnBaseParams();
        dnn.seed = tuned.search.chosenSeed;
        for (const auto& [key, value] : tuned.search.chosenParams)
          tuning::applyParam(dnn, key, value);
        components.push_back(dnn);
      }
      const HescaModel model = buildHesca(components, train, entry.alpha, folds);
      // combined CV records, train instance order
      out.train.datasetName = train.name;
      out.train.splitTag = "train";
      out.train.records.resize(train.n);
      std::vector<ProbVector> dists(model.components.size());
      for (int i = 0; i < train.n; ++i) {
        for (std::size_t j = 0; j < model.trainCv.size(); ++j)
          dists[j] = model.trainCv[j].records[i].dist;
        PredictionRecord rec;
        rec.trueClass = train.labels[i];
        rec.dist = combine(model.weights, model.alpha, dists, model.mode);
        rec.predictedClass = argmaxLowestTie(rec.dist);
        out.train.records[i] = std::move(rec);
      }
      out.train.trainEstimate = model.trainEstimate;

      out.test.datasetName = split.test.name;
      out.test.splitTag = "test";
      out.test.trainEstimate = model.trainEstimate;
      out.test.records.reserve(split.test.n);
      for (int i = 0; i < split.test.n; ++i) {
        PredictionRecord rec;
        rec.trueClass = split.test.labels[i];
        rec.dist = model.predictDistribution(split.test.row(i));
        rec.predictedClass = argmaxLowestTie(rec.dist);
        out.test.records.push_back(std::move(rec));
      }
      break;
    }
    case RosterEntry::Type::PickBest: {
      int bestIndex = 0;
      PredictionSet bestCv;
      double bestWeight = -1.0;
      for (std::size_t i = 0; i < entry.components.size(); ++i) {
        PredictionSet cv = crossValidatePredictions(entry.components[i], train, folds);
        if (cv.trainEstimate > bestWeight) {
          bestWeight = cv.trainEstimate;
          bestIndex = static_cast<int>(i);
          bestCv = std::move(cv);
        }
      }
      out.train = std::move(bestCv);
      const Model model = hesca::train(entry.components[bestIndex], train);
      out.test = run_detail::predictTestSet(model, split.test, entry.name, split.resampleId,
                                            out.train.trainEstimate);
      out.test.paramsText = "chose=" + entry.components[bestIndex].displayName();
      out.train.paramsText = out.test.paramsText;
      break;
    }
    case RosterEntry::Type::GridTuned: {
      const tuning::TunedModel tuned =
          tuning::gridSearchCV(entry.tunedKind, entry.grid, train, entry.tuneFolds,
                               hash64(entry.name), entry.tunedBase);
      out.train = tuned.chosenTrainCv;
      out.test = run_detail::predictTestSet(tuned.model, split.test, entry.name,
                                            split.resampleId, tuned.search.trainEstimate);
      std::string params;
      for (const auto& [key, value] : tuned.search.chosenParams)
        params += (params.empty() ? "" : " ") + key + "=" + std::to_string(value);
      out.test.paramsText = params;
      out.train.paramsText = params;
      break;
    }
    case RosterEntry::Type::RandomTuned: {
      tuning::SearchSpace space = entry.space;
      if (space.dims.empty() && entry.tunedKind == LearnerKind::Mlp)
        space = tuning::mlpSearchSpace(train.m, train.c);
      const tuning::TunedModel tuned =
          tuning::randomSearchCV(entry.tunedKind, space, entry.budget, train, entry.tuneFolds,
                                 hash64(entry.name), entry.tunedBase);
      out.train = tuned.chosenTrainCv;
      out.test = run_detail::predictTestSet(tuned.model, split.test, entry.name,
                                            split.resampleId, tuned.search.trainEstimate);
      break;
    }
  }
  out.train.classifierName = entry.name;
  out.test.classifierName = entry.name;
  out.train.resampleId = split.resampleId;
  out.test.resampleId = split.resampleId;
  return out;
}

inline std::filesystem::path resultPath(const std::filesystem::path& outDir,
                                        const std::string& classifier,
                                        const std::string& dataset, const std::string& split,
                                        int resampleId) {
  return outDir / classifier / dataset / (split + std::to_string(resampleId) + ".csv");
}

struct RunReport {
  int completed = 0;
  std::vector<std::string> failures;  // "classifier/dataset/resample: what"
};

// Work queue over (dataset x roster x resample). Tasks are pure and each
// writes a unique pair of files, so any thread count produces byte-identical
// output. Per-task failures are recorded and the run continues.
inline RunReport runExperiment(const ExperimentConfig& config,
                               const std::vector<Dataset>& datasets) {
  std::filesystem::create_directories(config.outDir);
  struct Task {
    int datasetIdx, rosterIdx, resampleId;
  };
  std::vector<Task> tasks;
  for (int d = 0; d < static_cast<int>(datasets.size()); ++d)
    for (int c = 0; c < static_cast<int>(config.roster.size()); ++c)
      for (int r = 0; r < config.resamples; ++r) tasks.push_back({d, c, r});

  RunReport report;
  std::mutex mtx;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task task = tasks[t];
      const RosterEntry& entry = config.roster[task.rosterIdx];
      const Dataset& data = datasets[task.datasetIdx];
      try {
        const Split split = stratifiedResample(data, task.resampleId, config.trainProportion);
        TaskResult result = runTask(entry, split, config.folds);
        writeResults(result.train, resultPath(config.outDir, entry.name, data.name, "train",
                                              task.resampleId));
        writeResults(result.test, resultPath(config.outDir, entry.name, data.name, "test",
                                             task.resampleId));
        std::lock_guard<std::mutex> lock(mtx);
        ++report.completed;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mtx);
        report.failures.push_back(entry.name + "/" + data.name + "/" +
                                  std::to_string(task.resampleId) + ": " + e.what());
      }
    }
  };

  const int threadCount = std::max(1, config.threads);
  if (threadCount == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threadCount; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(report.failures.begin(), report.failures.end());
  if (!report.failures.empty()) {
    std::ofstream log(config.outDir / "failures.txt", std::ios::binary);
    for (const std::string& f : report.failures) log << f << "\n";
  }
  return report;
}

inline std::vector<Dataset> loadConfigDatasets(const ExperimentConfig& config) {
  std::vector<Dataset> datasets;
  for (const auto& path : config.datasetPaths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset '" + path.string() + "'");
    const DataFormat format =
        path.extension() == ".arff" ? DataFormat::Arff : DataFormat::Csv;
    LoadOptions opts;
    opts.classColumn = config.classColumn;
    datasets.push_back(loadDataset(in, format, path.stem().string(), opts));
  }
  return datasets;
}

// CSV writer used by the synthetic generator CLI.
inline void writeDatasetCsv(const Dataset& d, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  for (int j = 0; j < d.m; ++j) out << "a" << j << ",";
  out << "class\n";
  char buf[40];
  for (int i = 0; i < d.n; ++i) {
    const auto row = d.row(i);
    for (int j = 0; j < d.m; ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", row[j]);
      out << buf << ",";
    }
    out << d.classNames[d.labels[i]] << "\n";
  }
}

}  // namespace hesca

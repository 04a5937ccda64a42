// Command line front end: run experiments, compare stored results, build
// post-hoc ensembles, sweep the weighting exponent, and generate the bundled
// synthetic benchmark.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "hesca/hesca.hpp"

namespace {

std::filesystem::path defaultOutDir() {
  if (const char* env = std::getenv("HESCA_RESULTS_DIR")) return env;
  return "results";
}

std::vector<std::string> splitCommaList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmdRun(const std::string& configPath, const std::vector<std::string>& datasetArgs,
           const std::string& rosterArg, int resamples, double trainProportion, double alpha,
           int folds, const std::string& outArg, int threads, const std::string& classCol) {
  hesca::ExperimentConfig config;
  config.outDir = defaultOutDir();
  if (!configPath.empty()) {
    std::ifstream in(configPath);
    if (!in) throw hesca::Error("cannot open config '" + configPath + "'");
    config = hesca::loadConfig(in);
    if (config.outDir.empty()) config.outDir = defaultOutDir();
  }
  for (const std::string& p : datasetArgs) config.datasetPaths.emplace_back(p);
  if (!rosterArg.empty()) {
    config.roster.clear();
    for (const std::string& token : splitCommaList(rosterArg))
      config.roster.push_back(hesca::parseRosterToken(token, alpha > 0 ? alpha : 4.0));
  }
  if (resamples > 0) config.resamples = resamples;
  if (trainProportion > 0) config.trainProportion = trainProportion;
  if (alpha >= 0) {
    config.alpha = alpha;
    for (auto& entry : config.roster)
      if (entry.type == hesca::RosterEntry::Type::Hesca) entry.alpha = alpha;
  }
  if (folds > 0) config.folds = folds;
  if (!outArg.empty()) config.outDir = outArg;
  if (threads > 0) config.threads = threads;
  if (!classCol.empty()) config.classColumn = classCol;

  if (config.datasetPaths.empty()) throw hesca::Error("no datasets given");
  if (config.roster.empty()) throw hesca::Error("no classifiers given");

  const std::vector<hesca::Dataset> datasets = hesca::loadConfigDatasets(config);
  const hesca::RunReport report = hesca::runExperiment(config, datasets);
  std::cout << "completed " << report.completed << " tasks, " << report.failures.size()
            << " failures\n";
  for (const std::string& f : report.failures) std::cout << "  FAILED " << f << "\n";

  const nlohmann::json summary = hesca::report::summarizeResultsTree(config.outDir);
  std::ofstream out(config.outDir / "summary.json", std::ios::binary);
  out << summary.dump(2) << "\n";
  std::cout << "results in " << config.outDir.string() << "\n";
  return report.failures.empty() ? 0 : 1;
}

int cmdCompare(const std::string& resultsDir, const std::string& classifiersArg,
               const std::string& metric, double alpha, const std::string& outDir) {
  const hesca::report::ResultsStore store =
      hesca::report::loadResultsTree(resultsDir, splitCommaList(classifiersArg));
  const hesca::report::CompareReport report =
      hesca::report::compareResults(store, metric, alpha);

  const std::filesystem::path out = outDir.empty() ? resultsDir : outDir;
  std::filesystem::create_directories(out);
  {
    std::ofstream js(out / ("compare_" + metric + ".json"), std::ios::binary);
    js << hesca::report::toJson(report).dump(2) << "\n";
  }
  {
    std::ofstream svg(out / ("cd_" + metric + ".svg"), std::ios::binary);
    svg << hesca::report::cdDiagramSvg(report.cd);
  }

  std::cout << "datasets: " << report.datasets.size() << " (" << report.missing.size()
            << " dropped)\n";
  std::cout << "friedman chi2 p = " << report.friedman.chiSquaredP
            << ", iman-davenport p = " << report.friedman.imanDavenportP << "\n";
  for (std::size_t i = 0; i < report.classifiers.size(); ++i)
    std::cout << "  " << report.classifiers[i] << ": avg rank "
              << report.friedman.averageRanks[i] << ", mean bias " << report.meanBias[i]
              << "\n";
  std::cout << "wins (" << report.classifiers[0] << " vs " << report.classifiers[1]
            << "): " << report.wins[0][1] << "-" << report.wins[1][0] << "\n";
  std::cout << "reports written to " << out.string() << "\n";
  return 0;
}

int cmdEnsemble(const std::string& resultsDir, const std::string& componentsArg,
                const std::string& name, double alpha) {
  namespace fs = std::filesystem;
  const std::vector<std::string> components = splitCommaList(componentsArg);
  if (components.size() < 1) throw hesca::Error("need at least one component");

  std::set<std::string> datasets;
  for (const auto& entry : fs::directory_iterator(fs::path(resultsDir) / components.front()))
    if (entry.is_directory()) datasets.insert(entry.path().filename().string());

  int written = 0;
  for (const std::string& dataset : datasets) {
    std::set<int> resamples;
    for (const auto& entry :
         fs::directory_iterator(fs::path(resultsDir) / components.front() / dataset)) {
      const std::string file = entry.path().filename().string();
      if (file.rfind("test", 0) == 0)
        resamples.insert(std::stoi(file.substr(4, file.size() - 8)));
    }
    for (int r : resamples) {
      std::vector<hesca::ComponentResults> comps;
      bool complete = true;
      for (const std::string& comp : components) {
        const fs::path base = fs::path(resultsDir) / comp / dataset;
        const fs::path testPath = base / ("test" + std::to_string(r) + ".csv");
        const fs::path trainPath = base / ("train" + std::to_string(r) + ".csv");
        if (!fs::exists(testPath) || !fs::exists(trainPath)) {
          complete = false;
          break;
        }
        comps.push_back({hesca::readResults(trainPath), hesca::readResults(testPath)});
      }
      if (!complete) {
        std::cout << "skipping " << dataset << " resample " << r << " (incomplete)\n";
        continue;
      }
      hesca::ComposedResults composed = hesca::composeFromResults(comps, alpha, name);
      hesca::writeResults(composed.train,
                          fs::path(resultsDir) / name / dataset /
                              ("train" + std::to_string(r) + ".csv"));
      hesca::writeResults(composed.test,
                          fs::path(resultsDir) / name / dataset /
                              ("test" + std::to_string(r) + ".csv"));
      ++written;
    }
  }
  std::cout << "composed " << written << " resamples into " << name << "\n";
  return 0;
}

int cmdSweepAlpha(const std::string& resultsDir, const std::string& componentsArg,
                  const std::string& alphasArg) {
  std::vector<double> alphas;
  for (const std::string& a : splitCommaList(alphasArg)) alphas.push_back(std::stod(a));
  if (alphas.empty()) throw hesca::Error("no alpha values given");
  const auto rows = hesca::report::sweepAlphaFromStore(resultsDir,
                                                       splitCommaList(componentsArg), alphas);
  std::cout << "alpha,meanAccuracy\n";
  for (const auto& row : rows)
    std::cout << row.alpha << "," << row.meanAccuracy << "\n";
  return 0;
}

int cmdGenSynth(const std::string& outDir, std::uint64_t seed, int single, int classes,
                int trainSize, int attributes, double separation) {
  namespace fs = std::filesystem;
  if (single) {
    hesca::SynthSpec spec;
    spec.name = "synth-custom";
    spec.classes = classes;
    spec.instances = trainSize * 2;
    spec.attributes = attributes;
    spec.separation = separation;
    spec.seed = seed;
    const hesca::Dataset d = hesca::genGaussianMixture(spec);
    hesca::writeDatasetCsv(d, fs::path(outDir) / (spec.name + ".csv"));
    std::cout << "wrote " << (fs::path(outDir) / (spec.name + ".csv")).string() << "\n";
    return 0;
  }
  for (const hesca::SynthSpec& spec : hesca::bundledSuite(seed)) {
    const hesca::Dataset d = hesca::genGaussianMixture(spec);
    hesca::writeDatasetCsv(d, fs::path(outDir) / (spec.name + ".csv"));
  }
  std::cout << "wrote 15 datasets to " << outDir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HESCA: heterogeneous ensembles of standard classification algorithms"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "train classifiers over stratified resamples");
  std::string configPath, rosterArg, outArg, classCol;
  std::vector<std::string> datasetArgs;
  int resamples = 0, folds = 0, threads = 0;
  double trainProportion = 0.0, alpha = -1.0;
  run->add_option("--config", configPath, "experiment config file (key = value)");
  run->add_option("--data", datasetArgs, "dataset files (.csv or .arff)");
  run->add_option("--roster", rosterArg,
                  "comma list: presets hesca, hesca-plus, pick-best, tuned-rbf, dnn or "
                  "kind[:key=value]... tokens");
  run->add_option("--resamples", resamples, "number of stratified resamples");
  run->add_option("--train-proportion", trainProportion, "train share of each resample");
  run->add_option("--alpha", alpha, "ensemble weighting exponent");
  run->add_option("--folds", folds, "cross-validation folds for weights");
  run->add_option("--out", outArg, "output directory (default $HESCA_RESULTS_DIR or ./results)");
  run->add_option("--threads", threads, "worker threads");
  run->add_option("--class-col", classCol, "CSV class column name");

  // compare
  auto* compare = app.add_subcommand("compare", "statistical comparison of stored results");
  std::string cmpDir, cmpClassifiers, cmpMetric = "error", cmpOut;
  double cmpAlpha = 0.05;
  compare->add_option("--results", cmpDir, "results directory")->required();
  compare->add_option("--classifiers", cmpClassifiers,
                      "comma list (default: every subdirectory)");
  compare->add_option("--metric", cmpMetric, "error|accuracy|balancedError|auroc|nllMean");
  compare->add_option("--alpha", cmpAlpha, "significance level");
  compare->add_option("--out", cmpOut, "report directory (default: results dir)");

  // ensemble
  auto* ensemble = app.add_subcommand("ensemble", "post-hoc ensemble from stored results");
  std::string ensDir, ensComponents, ensName = "HESCA_ks";
  double ensAlpha = 4.0;
  ensemble->add_option("--results", ensDir, "results directory")->required();
  ensemble->add_option("--components", ensComponents, "comma list of stored classifiers")
      ->required();
  ensemble->add_option("--name", ensName, "name of the composed classifier");
  ensemble->add_option("--alpha", ensAlpha, "weighting exponent");

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "accuracy vs alpha from stored results");
  std::string swpDir, swpComponents, swpAlphas = "0,1,2,3,4,5,6,7,8,9,10";
  sweep->add_option("--results", swpDir, "results directory")->required();
  sweep->add_option("--components", swpComponents, "comma list of stored classifiers")
      ->required();
  sweep->add_option("--alphas", swpAlphas, "comma list of alpha values");

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "generate Gaussian-mixture benchmark data");
  std::string genOut = "synth";
  std::uint64_t genSeed = 7;
  int genSingle = 0, genClasses = 3, genTrain = 150, genAttrs = 6;
  double genSep = 1.8;
  gen->add_option("--out", genOut, "output directory");
  gen->add_option("--seed", genSeed, "generator seed");
  gen->add_flag("--single", genSingle, "one custom dataset instead of the 15-dataset suite");
  gen->add_option("--classes", genClasses, "classes (with --single)");
  gen->add_option("--train-size", genTrain, "train cases at 50% resampling (with --single)");
  gen->add_option("--attributes", genAttrs, "attributes (with --single)");
  gen->add_option("--separation", genSep, "class mean separation (with --single)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmdRun(configPath, datasetArgs, rosterArg, resamples, trainProportion, alpha,
                    folds, outArg, threads, classCol);
    if (compare->parsed()) return cmdCompare(cmpDir, cmpClassifiers, cmpMetric, cmpAlpha, cmpOut);
    if (ensemble->parsed()) return cmdEnsemble(ensDir, ensComponents, ensName, ensAlpha);
    if (sweep->parsed()) return cmdSweepAlpha(swpDir, swpComponents, swpAlphas);
    if (gen->parsed())
      return cmdGenSynth(genOut, genSeed, genSingle, genClasses, genTrain, genAttrs, genSep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

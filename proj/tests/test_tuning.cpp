#include "doctest.h"

#include "hesca/synth.hpp"
#include "hesca/tuning.hpp"

using namespace hesca;

namespace {

Dataset twinData() {
  // identical same-class twins: knn with k=1 is perfect, larger k dilutes
  std::vector<double> xs;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    xs.push_back(0.0);
    labels.push_back(0);
    xs.push_back(10.0);
    labels.push_back(1);
  }
  return makeDataset("twins", xs, labels, {"A", "B"}, 1);
}

}  // namespace

TEST_CASE("grid of one point chooses that point") {
  tuning::ParamGrid grid;
  grid.axes.push_back({"k", {1.0}});
  const auto tuned = tuning::gridSearchCV(LearnerKind::Knn, grid, twinData(), 5, 3);
  CHECK(tuned.search.chosenIndex == 0);
  CHECK(tuned.search.chosenParams[0].second == 1.0);
  CHECK(tuned.search.trainEstimate == tuned.search.evaluations[0]);
}

TEST_CASE("a perfect grid point wins") {
  // 4 A twins vs 12 B twins: k=1 finds the identical twin, k=9 drowns the
  // minority class in majority votes
  std::vector<double> xs;
  std::vector<int> labels;
  for (int i = 0; i < 4; ++i) {
    xs.push_back(0.0);
    labels.push_back(0);
  }
  for (int i = 0; i < 12; ++i) {
    xs.push_back(10.0);
    labels.push_back(1);
  }
  const Dataset d = makeDataset("imbalanced-twins", xs, labels, {"A", "B"}, 1);

  tuning::ParamGrid grid;
  grid.axes.push_back({"k", {9.0, 1.0}});
  const auto tuned = tuning::gridSearchCV(LearnerKind::Knn, grid, d, 4, 3);
  CHECK(tuned.search.chosenParams[0].second == 1.0);
  CHECK(tuned.search.trainEstimate == 1.0);
  CHECK(tuned.search.evaluations[0] < 1.0);
}

TEST_CASE("ties go to the earliest iteration order") {
  tuning::ParamGrid grid;
  grid.axes.push_back({"k", {1.0, 1.0}});  // identical candidates
  const auto tuned = tuning::gridSearchCV(LearnerKind::Knn, grid, twinData(), 5, 3);
  CHECK(tuned.search.chosenIndex == 0);
  CHECK(tuned.search.evaluations[0] == tuned.search.evaluations[1]);
}

TEST_CASE("grid iteration order is lexicographic over the axes") {
  tuning::ParamGrid grid;
  grid.axes.push_back({"a", {1.0, 2.0}});
  grid.axes.push_back({"b", {10.0, 20.0, 30.0}});
  CHECK(grid.size() == 6);
  CHECK(grid.point(0)[0].second == 1.0);
  CHECK(grid.point(0)[1].second == 10.0);
  CHECK(grid.point(1)[1].second == 20.0);
  CHECK(grid.point(3)[0].second == 2.0);
  CHECK(grid.point(3)[1].second == 10.0);
}

TEST_CASE("reported estimate equals re-running cv at the chosen point") {
  SynthSpec synth;
  synth.name = "tunecv";
  synth.classes = 2;
  synth.instances = 60;
  synth.attributes = 3;
  synth.separation = 1.3;
  synth.seed = 51;
  const Dataset d = genGaussianMixture(synth);

  tuning::ParamGrid grid;
  grid.axes.push_back({"k", {1.0, 3.0, 5.0}});
  const auto tuned = tuning::gridSearchCV(LearnerKind::Knn, grid, d, 5, 99);

  // replay the documented recipe: shared fold partition + the chosen seed
  ClassifierSpec spec;
  spec.kind = LearnerKind::Knn;
  spec.seed = tuned.search.chosenSeed;
  for (const auto& [name, value] : tuned.search.chosenParams)
    tuning::applyParam(spec, name, value);
  const int k = effectiveFolds(d, 5);
  const auto folds = stratifiedFolds(d, k, hash64(d.name + "/tune", k));
  int correct = 0;
  for (const auto& holdOut : folds) {
    const Model model = train(spec, datasetWithout(d, holdOut));
    for (int i : holdOut)
      if (model.predictClass(d.row(i)) == d.labels[i]) ++correct;
  }
  CHECK(tuned.search.trainEstimate == static_cast<double>(correct) / d.n);
}

TEST_CASE("expanding a grid never lowers the maximum evaluation") {
  SynthSpec synth;
  synth.name = "grow";
  synth.classes = 2;
  synth.instances = 50;
  synth.attributes = 3;
  synth.separation = 1.2;
  synth.seed = 52;
  const Dataset d = genGaussianMixture(synth);

  tuning::ParamGrid small;
  small.axes.push_back({"k", {1.0, 3.0}});
  tuning::ParamGrid large;
  large.axes.push_back({"k", {1.0, 3.0, 5.0, 7.0}});
  const auto a = tuning::gridSearchCV(LearnerKind::Knn, small, d, 5, 7);
  const auto b = tuning::gridSearchCV(LearnerKind::Knn, large, d, 5, 7);
  CHECK(b.search.trainEstimate >= a.search.trainEstimate);
}

TEST_CASE("a failing candidate scores zero and is flagged") {
  tuning::ParamGrid grid;
  grid.axes.push_back({"k", {0.0, 1.0}});  // k = 0 throws at fit
  const auto tuned = tuning::gridSearchCV(LearnerKind::Knn, grid, twinData(), 5, 3);
  CHECK(tuned.search.failed[0]);
  CHECK(tuned.search.evaluations[0] == 0.0);
  CHECK(tuned.search.chosenIndex == 1);
}

TEST_CASE("random search is deterministic in its seed") {
  SynthSpec synth;
  synth.name = "rsdet";
  synth.classes = 2;
  synth.instances = 50;
  synth.attributes = 3;
  synth.separation = 1.4;
  synth.seed = 53;
  const Dataset d = genGaussianMixture(synth);

  tuning::SearchSpace space;
  space.dims.push_back({"k", tuning::SearchSpace::Dim::UniformInt, 1.0, 9.0, -1});
  const auto a = tuning::randomSearchCV(LearnerKind::Knn, space, 5, d, 3, 1234);
  const auto b = tuning::randomSearchCV(LearnerKind::Knn, space, 5, d, 3, 1234);
  CHECK(a.search.evaluations == b.search.evaluations);
  CHECK(a.search.chosenParams == b.search.chosenParams);

  const auto c = tuning::randomSearchCV(LearnerKind::Knn, space, 5, d, 3, 4321);
  CHECK(a.search.chosenParams.size() == c.search.chosenParams.size());

  // budget 1 uses the single sampled point
  const auto single = tuning::randomSearchCV(LearnerKind::Knn, space, 1, d, 3, 99);
  CHECK(single.search.evaluations.size() == 1);
  CHECK(single.search.chosenIndex == 0);
}

TEST_CASE("exhaustive random search equals grid search on a 2x2 space") {
  SynthSpec synth;
  synth.name = "rsgrid";
  synth.classes = 2;
  synth.instances = 44;
  synth.attributes = 3;
  synth.separation = 1.1;
  synth.seed = 54;
  const Dataset d = genGaussianMixture(synth);

  tuning::SearchSpace space;
  space.dims.push_back({"hidden1", tuning::SearchSpace::Dim::UniformInt, 2.0, 3.0, -1});
  space.dims.push_back({"epochs", tuning::SearchSpace::Dim::UniformInt, 5.0, 6.0, -1});
  LearnerParams base;
  base.learnRate = 0.1;

  tuning::ParamGrid grid;
  grid.axes.push_back({"hidden1", {2.0, 3.0}});
  grid.axes.push_back({"epochs", {5.0, 6.0}});

  const auto viaRandom =
      tuning::randomSearchCV(LearnerKind::Mlp, space, 4, d, 3, 77, base);
  const auto viaGrid = tuning::gridSearchCV(LearnerKind::Mlp, grid, d, 3, 77, base);
  CHECK(viaRandom.search.evaluations == viaGrid.search.evaluations);
  CHECK(viaRandom.search.chosenParams == viaGrid.search.chosenParams);
  CHECK(viaRandom.search.trainEstimate == viaGrid.search.trainEstimate);
}

TEST_CASE("the published rbf grid shapes") {
  const auto full = tuning::rbfFullGrid();
  CHECK(full.size() == 1089);  // 33 x 33
  CHECK(full.axes[0].values.front() == std::ldexp(1.0, -16));
  CHECK(full.axes[0].values.back() == std::ldexp(1.0, 16));

  const auto reduced = tuning::rbfReducedGrid();
  CHECK(reduced.size() == 25);
  for (const auto& axis : reduced.axes)
    for (double v : axis.values) {
      int exponent = 0;
      const double mantissa = std::frexp(v, &exponent);
      CHECK(mantissa == 0.5);  // still powers of two
    }
}

TEST_CASE("the network search space follows the stated ranges") {
  const auto space = tuning::mlpSearchSpace(10, 4);
  REQUIRE(space.dims.size() == 3);
  CHECK(space.dims[0].name == "learnRate");
  CHECK(space.dims[0].lo == 1e-5);
  CHECK(space.dims[0].hi == 0.1);
  CHECK(space.dims[1].lo == 15.0);  // 1.5 m
  CHECK(space.dims[1].hi == 50.0);  // 5 m
  CHECK(space.dims[2].lo == 4.0);   // class count
  CHECK(space.dims[2].capFromDim == 1);

  // sampled second layers never exceed the first
  Rng rng(1);
  tuning::SearchSpace s = space;
  for (int trial = 0; trial < 50; ++trial) {
    // sample by hand using the same scheme as randomSearchCV
    double h1 = 0.0;
    Rng local(trial);
    for (std::size_t i = 0; i < s.dims.size(); ++i) {
      const auto& dim = s.dims[i];
      double hi = dim.hi;
      if (dim.capFromDim >= 0) hi = std::min(hi, h1);
      if (dim.kind == tuning::SearchSpace::Dim::UniformInt) {
        const int lo = static_cast<int>(dim.lo);
        const double v = local.nextInt(lo, std::max(lo, static_cast<int>(hi)));
        if (i == 1) h1 = v;
        if (i == 2) CHECK(v <= std::max(h1, dim.lo));
      } else {
        local.uniform(std::log(dim.lo), std::log(hi));
      }
    }
  }
}

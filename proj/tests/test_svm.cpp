#include "doctest.h"

#include <cmath>

#include "hesca/learners.hpp"
#include "hesca/synth.hpp"

using namespace hesca;

TEST_CASE("platt calibration: separated scores give a monotone increasing map") {
  const std::vector<double> scores{-2.0, -1.5, -1.0, 1.0, 1.5, 2.0};
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const PlattCalibration cal = calibrateScores(scores, labels);
  double prev = -1.0;
  for (double s = -3.0; s <= 3.0; s += 0.25) {
    const double p = cal(s);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("platt calibration: probability one half at the fitted midpoint") {
  const std::vector<double> scores{-2.0, -0.5, 0.5, 2.0};
  const std::vector<int> labels{0, 0, 1, 1};
  const PlattCalibration cal = calibrateScores(scores, labels);
  const double midpoint = -cal.b / cal.a;
  CHECK(cal(midpoint) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("platt calibration: symmetric data gives a symmetric map") {
  const std::vector<double> scores{-1.0, -1.0, 1.0, 1.0};
  const std::vector<int> labels{0, 0, 1, 1};
  const PlattCalibration cal = calibrateScores(scores, labels);
  CHECK(cal(-1.0) + cal(1.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("platt calibration: single-label input is an error") {
  CHECK_THROWS_AS(calibrateScores(std::vector<double>{1.0, 2.0}, std::vector<int>{1, 1}),
                  Error);
}

TEST_CASE("pairwise coupling recovers consistent probabilities") {
  const std::vector<double> p{0.5, 0.3, 0.2};
  std::vector<std::vector<double>> r(3, std::vector<double>(3, 0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) r[i][j] = p[i] / (p[i] + p[j]);
  const ProbVector coupled = svm_detail::couplePairwise(r);
  for (int i = 0; i < 3; ++i) CHECK(coupled[i] == doctest::Approx(p[i]).epsilon(1e-3));
}

TEST_CASE("linear svm separates a linearly separable problem") {
  std::vector<double> values;
  std::vector<int> labels;
  Rng rng(55);
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    values.push_back(cls * 4.0 + rng.nextGaussian() * 0.4);
    values.push_back(cls * -2.0 + rng.nextGaussian() * 0.4);
    labels.push_back(cls);
  }
  const Dataset d = makeDataset("sep", values, labels, {"A", "B"}, 2);
  ClassifierSpec spec;
  spec.kind = LearnerKind::Svm;
  spec.seed = 77;
  const Model m = train(spec, d);
  int correct = 0;
  for (int i = 0; i < d.n; ++i)
    if (m.predictClass(d.row(i)) == d.labels[i]) ++correct;
  CHECK(correct == d.n);
}

TEST_CASE("rbf svm handles a ring problem a linear machine cannot") {
  std::vector<double> values;
  std::vector<int> labels;
  Rng rng(66);
  for (int i = 0; i < 120; ++i) {
    const int cls = i % 2;
    const double radius = cls == 0 ? 1.0 : 3.0;
    const double angle = rng.nextDouble() * 2.0 * M_PI;
    values.push_back(radius * std::cos(angle) + rng.nextGaussian() * 0.1);
    values.push_back(radius * std::sin(angle) + rng.nextGaussian() * 0.1);
    labels.push_back(cls);
  }
  const Dataset d = makeDataset("ring", values, labels, {"in", "out"}, 2);

  ClassifierSpec linear;
  linear.kind = LearnerKind::Svm;
  linear.seed = 3;
  ClassifierSpec rbf = linear;
  rbf.params.kernel = SvmKernelKind::Rbf;
  rbf.params.rbfGamma = 1.0;

  auto accuracy = [&](const Model& m) {
    int correct = 0;
    for (int i = 0; i < d.n; ++i)
      if (m.predictClass(d.row(i)) == d.labels[i]) ++correct;
    return static_cast<double>(correct) / d.n;
  };
  const double accLinear = accuracy(train(linear, d));
  const double accRbf = accuracy(train(rbf, d));
  CHECK(accRbf >= 0.97);
  CHECK(accRbf > accLinear + 0.2);
}

TEST_CASE("quadratic-kernel svm and multiclass coupling produce valid distributions") {
  SynthSpec synth;
  synth.name = "svm3";
  synth.classes = 4;
  synth.instances = 80;
  synth.attributes = 3;
  synth.separation = 2.5;
  synth.seed = 31;
  const Dataset d = genGaussianMixture(synth);

  ClassifierSpec spec;
  spec.kind = LearnerKind::Svm;
  spec.params.kernel = SvmKernelKind::Poly;
  spec.seed = 9;
  const Model m = train(spec, d);
  int correct = 0;
  for (int i = 0; i < d.n; ++i) {
    const ProbVector p = m.predictDistribution(d.row(i));
    CHECK(isValidDistribution(p));
    if (argmaxLowestTie(p) == d.labels[i]) ++correct;
  }
  CHECK(static_cast<double>(correct) / d.n >= 0.9);
}

TEST_CASE("svm training is deterministic") {
  SynthSpec synth;
  synth.name = "svmdet";
  synth.classes = 3;
  synth.instances = 60;
  synth.attributes = 4;
  synth.separation = 1.4;
  synth.seed = 32;
  const Dataset d = genGaussianMixture(synth);
  ClassifierSpec spec;
  spec.kind = LearnerKind::Svm;
  spec.params.kernel = SvmKernelKind::Rbf;
  spec.seed = 123;
  const Model a = train(spec, d);
  const Model b = train(spec, d);
  for (int i = 0; i < d.n; i += 5)
    CHECK(a.predictDistribution(d.row(i)) == b.predictDistribution(d.row(i)));
}

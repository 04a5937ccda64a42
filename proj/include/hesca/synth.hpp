#pragma once

#include <string>
#include <vector>

#include "hesca/dataset.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// Gaussian-mixture generator: one full-covariance Gaussian per class, means
// drawn on a sphere whose radius sets the class overlap. Deterministic in the
// seed, so a generated benchmark is reproducible byte for byte.
struct SynthSpec {
  std::string name;
  int classes = 2;
  int instances = 200;  // total; a 0.5 resample leaves half for training
  int attributes = 6;
  double separation = 2.0;  // mean radius relative to unit-ish class spread
  std::uint64_t seed = 0;
};

inline Dataset genGaussianMixture(const SynthSpec& spec) {
  if (spec.classes < 2 || spec.instances < 4 * spec.classes || spec.attributes < 1)
    throw Error("genGaussianMixture: degenerate spec");
  Rng rng(mixSeed(spec.seed, hash64(spec.name)));
  const int c = spec.classes;
  const int m = spec.attributes;

  // class means: random directions scaled to the separation radius
  std::vector<double> means(static_cast<std::size_t>(c) * m);
  for (int k = 0; k < c; ++k) {
    double norm = 0.0;
    for (int j = 0; j < m; ++j) {
      const double v = rng.nextGaussian();
      means[static_cast<std::size_t>(k) * m + j] = v;
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (int j = 0; j < m; ++j)
      means[static_cast<std::size_t>(k) * m + j] *= spec.separation / (norm > 0 ? norm : 1.0);
  }

  // per-class lower-triangular shaping matrix: x = mean + L z
  std::vector<double> shapes(static_cast<std::size_t>(c) * m * m, 0.0);
  for (int k = 0; k < c; ++k) {
    double* shape = shapes.data() + static_cast<std::size_t>(k) * m * m;
    for (int r = 0; r < m; ++r) {
      for (int q = 0; q < r; ++q) shape[r * m + q] = rng.uniform(-0.4, 0.4);
      shape[r * m + r] = rng.uniform(0.6, 1.4);
    }
  }

  // mildly imbalanced class sizes
  std::vector<double> weight(c);
  double weightSum = 0.0;
  for (int k = 0; k < c; ++k) {
    weight[k] = rng.uniform(0.7, 1.3);
    weightSum += weight[k];
  }
  std::vector<int> counts(c);
  int assigned = 0;
  for (int k = 0; k < c; ++k) {
    counts[k] = std::max(4, static_cast<int>(spec.instances * weight[k] / weightSum));
    assigned += counts[k];
  }
  counts[0] += spec.instances - assigned;

  Dataset d;
  d.name = spec.name;
  d.m = m;
  d.c = c;
  std::vector<double> z(m);
  for (int k = 0; k < c; ++k) {
    const double* mean = means.data() + static_cast<std::size_t>(k) * m;
    const double* shape = shapes.data() + static_cast<std::size_t>(k) * m * m;
    for (int i = 0; i < counts[k]; ++i) {
      for (int j = 0; j < m; ++j) z[j] = rng.nextGaussian();
      for (int r = 0; r < m; ++r) {
        double v = mean[r];
        for (int q = 0; q <= r; ++q) v += shape[r * m + q] * z[q];
        d.values.push_back(v);
      }
      d.labels.push_back(k);
    }
  }
  d.n = static_cast<int>(d.labels.size());
  for (int k = 0; k < c; ++k) d.classNames.push_back("c" + std::to_string(k));
  validateDataset(d);
  return d;
}

// The bundled desk-scale benchmark: 15 mixtures covering 2..8 classes and
// train sizes 100..500 at a 50% resample, with separations that leave the
// components imperfect but clearly better than chance.
inline std::vector<SynthSpec> bundledSuite(std::uint64_t seed = 7) {
  std::vector<SynthSpec> suite;
  const struct {
    int classes, train, attrs;
    double sep;
  } rows[15] = {
      {2, 100, 4, 1.6}, {2, 150, 8, 1.4},  {2, 400, 6, 1.2},  {3, 100, 5, 1.8},
      {3, 200, 10, 1.6}, {3, 500, 6, 1.4}, {4, 120, 6, 2.0},  {4, 300, 8, 1.7},
      {5, 150, 5, 2.2},  {5, 400, 12, 1.9}, {6, 180, 8, 2.3},  {6, 500, 6, 2.1},
      {7, 200, 10, 2.5}, {8, 250, 8, 2.7},  {8, 500, 14, 2.4},
  };
  for (int i = 0; i < 15; ++i) {
    SynthSpec spec;
    spec.name = "synth" + std::string(i < 9 ? "0" : "") + std::to_string(i + 1);
    spec.classes = rows[i].classes;
    spec.instances = rows[i].train * 2;
    spec.attributes = rows[i].attrs;
    spec.separation = rows[i].sep;
    spec.seed = mixSeed(seed, i);
    suite.push_back(spec);
  }
  return suite;
}

}  // namespace hesca

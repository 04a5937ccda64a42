#pragma once

#include <cmath>
#include <vector>

#include "hesca/classifier.hpp"
#include "hesca/resample.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// Multilayer perceptron: one sigmoid hidden layer (default size (m + c) / 2),
// an optional second hidden layer, softmax output and cross-entropy loss,
// trained by per-instance stochastic gradient descent with momentum.
//
// With holdoutStopping set, a stratified fifth of the train data is held out
// and training stops after `patience` epochs without a hold-out accuracy
// improvement; bestEpoch() then reports the epoch that peaked, which the
// tuner feeds back as the epoch budget for the final full-data build.
class MlpClassifier final : public Classifier {
 public:
  MlpClassifier(const LearnerParams& params, std::uint64_t seed) : p_(params), seed_(seed) {}

  void fit(const Dataset& data) override {
    bool holdOut = p_.holdoutStopping && data.n >= 10;
    if (holdOut)
      for (int count : classCounts(data))
        if (count < 5) holdOut = false;
    if (holdOut) {
      const auto folds = stratifiedFolds(data, 5, mixSeed(seed_, 0xd107));
      fitInternal(datasetWithout(data, folds[0]), &data, folds[0]);
    } else {
      fitInternal(data, nullptr, {});
    }
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    std::vector<double> z;
    std_.apply(x, z);
    return forward(z);
  }

  int bestEpoch() const { return bestEpoch_; }

 private:
  struct Layer {
    int in = 0, out = 0;
    std::vector<double> w;   // out * (in + 1), bias last
    std::vector<double> vw;  // momentum buffer

    void init(int inDim, int outDim, Rng& rng) {
      in = inDim;
      out = outDim;
      w.resize(static_cast<std::size_t>(out) * (in + 1));
      vw.assign(w.size(), 0.0);
      const double bound = 1.0 / std::sqrt(static_cast<double>(in));
      for (double& v : w) v = rng.uniform(-bound, bound);
    }
  };

  static double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

  void fitInternal(const Dataset& train, const Dataset* full,
                   const std::vector<int>& holdOut) {
    c_ = train.c;
    m_ = train.m;
    std_.fit(train);
    const std::vector<double> x = std_.transformAll(train);

    Rng rng(mixSeed(seed_, 0x3713));
    const int h1 = p_.hidden1 > 0 ? p_.hidden1 : std::max(1, (m_ + c_) / 2);
    layers_.clear();
    if (p_.hidden2 > 0) {
      layers_.resize(3);
      layers_[0].init(m_, h1, rng);
      layers_[1].init(h1, p_.hidden2, rng);
      layers_[2].init(p_.hidden2, c_, rng);
    } else {
      layers_.resize(2);
      layers_[0].init(m_, h1, rng);
      layers_[1].init(h1, c_, rng);
    }

    std::vector<int> order(train.n);
    for (int i = 0; i < train.n; ++i) order[i] = i;

    double bestAcc = -1.0;
    bestEpoch_ = p_.epochs;
    int sinceBest = 0;
    std::vector<Layer> bestLayers;

    for (int epoch = 1; epoch <= p_.epochs; ++epoch) {
      rng.shuffle(order);
      for (int i : order)
        step(std::span<const double>(x.data() + static_cast<std::size_t>(i) * m_, m_),
             train.labels[i]);
      if (full != nullptr) {
        const double acc = holdOutAccuracy(*full, holdOut);
        if (acc > bestAcc) {
          bestAcc = acc;
          bestEpoch_ = epoch;
          bestLayers = layers_;
          sinceBest = 0;
        } else if (++sinceBest >= p_.patience) {
          break;
        }
      }
    }
    if (full != nullptr && !bestLayers.empty()) layers_ = std::move(bestLayers);
  }

  double holdOutAccuracy(const Dataset& full, const std::vector<int>& holdOut) const {
    int correct = 0;
    std::vector<double> z;
    for (int i : holdOut) {
      std_.apply(full.row(i), z);
      if (argmaxLowestTie(forward(z)) == full.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / holdOut.size();
  }

  ProbVector forward(const std::vector<double>& z) const {
    std::vector<double> cur = z;
    std::vector<double> next;
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      const Layer& layer = layers_[li];
      next.assign(layer.out, 0.0);
      for (int o = 0; o < layer.out; ++o) {
        const double* wo = layer.w.data() + static_cast<std::size_t>(o) * (layer.in + 1);
        double s = wo[layer.in];
        for (int j = 0; j < layer.in; ++j) s += wo[j] * cur[j];
        next[o] = s;
      }
      if (li + 1 < layers_.size()) {
        for (double& v : next) v = sigmoid(v);
      } else {
        const double mx = *std::max_element(next.begin(), next.end());
        double sum = 0.0;
        for (double& v : next) {
          v = std::exp(v - mx);
          sum += v;
        }
        for (double& v : next) v /= sum;
      }
      cur.swap(next);
    }
    return cur;
  }

  void step(std::span<const double> xi, int label) {
    // forward with stored activations
    std::vector<std::vector<double>> acts(layers_.size() + 1);
    acts[0].assign(xi.begin(), xi.end());
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      const Layer& layer = layers_[li];
      acts[li + 1].assign(layer.out, 0.0);
      for (int o = 0; o < layer.out; ++o) {
        const double* wo = layer.w.data() + static_cast<std::size_t>(o) * (layer.in + 1);
        double s = wo[layer.in];
        for (int j = 0; j < layer.in; ++j) s += wo[j] * acts[li][j];
        acts[li + 1][o] = s;
      }
      if (li + 1 < layers_.size()) {
        for (double& v : acts[li + 1]) v = sigmoid(v);
      } else {
        const double mx = *std::max_element(acts[li + 1].begin(), acts[li + 1].end());
        double sum = 0.0;
        for (double& v : acts[li + 1]) {
          v = std::exp(v - mx);
          sum += v;
        }
        for (double& v : acts[li + 1]) v /= sum;
      }
    }

    // backward: softmax + cross-entropy delta, then sigmoid deltas
    std::vector<double> delta = acts.back();
    delta[label] -= 1.0;
    for (int li = static_cast<int>(layers_.size()) - 1; li >= 0; --li) {
      Layer& layer = layers_[li];
      std::vector<double> prevDelta;
      if (li > 0) {
        prevDelta.assign(layer.in, 0.0);
        for (int o = 0; o < layer.out; ++o) {
          const double* wo = layer.w.data() + static_cast<std::size_t>(o) * (layer.in + 1);
          for (int j = 0; j < layer.in; ++j) prevDelta[j] += wo[j] * delta[o];
        }
        for (int j = 0; j < layer.in; ++j) {
          const double a = acts[li][j];
          prevDelta[j] *= a * (1.0 - a);
        }
      }
      for (int o = 0; o < layer.out; ++o) {
        double* wo = layer.w.data() + static_cast<std::size_t>(o) * (layer.in + 1);
        double* vo = layer.vw.data() + static_cast<std::size_t>(o) * (layer.in + 1);
        for (int j = 0; j < layer.in; ++j) {
          vo[j] = p_.momentum * vo[j] - p_.learnRate * delta[o] * acts[li][j];
          wo[j] += vo[j];
        }
        vo[layer.in] = p_.momentum * vo[layer.in] - p_.learnRate * delta[o];
        wo[layer.in] += vo[layer.in];
      }
      delta.swap(prevDelta);
    }
  }

  LearnerParams p_;
  std::uint64_t seed_;
  Standardizer std_;
  std::vector<Layer> layers_;
  int c_ = 0, m_ = 0, bestEpoch_ = 0;
};

}  // namespace hesca

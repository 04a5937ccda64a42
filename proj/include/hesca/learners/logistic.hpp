#pragma once

#include <cmath>
#include <vector>

#include "hesca/classifier.hpp"

namespace hesca {

// Multinomial logistic regression fit by full-batch gradient descent with a
// ridge penalty. The step size adapts by halving on overshoot, so a singular
// or badly scaled system degrades into early stagnation instead of a crash;
// non-convergence returns the current iterate. Attributes are standardized
// internally, which changes only the optimization path, not the model family.
class LogisticClassifier final : public Classifier {
 public:
  LogisticClassifier(double ridge, int maxIter, double tol)
      : ridge_(ridge), maxIter_(maxIter), tol_(tol) {}

  void fit(const Dataset& data) override {
    std_.fit(data);
    const std::vector<double> x = std_.transformAll(data);
    n_ = data.n;
    m_ = data.m;
    c_ = data.c;
    w_.assign(static_cast<std::size_t>(c_) * (m_ + 1), 0.0);

    std::vector<double> grad(w_.size());
    std::vector<double> candidate(w_.size());
    std::vector<double> probs(static_cast<std::size_t>(n_) * c_);

    double loss = evaluate(x, data.labels, w_, probs, &grad);
    double step = 0.5;
    for (int iter = 0; iter < maxIter_; ++iter) {
      double newLoss = 0.0;
      bool accepted = false;
      for (int tries = 0; tries < 40; ++tries) {
        for (std::size_t i = 0; i < w_.size(); ++i) candidate[i] = w_[i] - step * grad[i];
        newLoss = evaluate(x, data.labels, candidate, probs, nullptr);
        if (std::isfinite(newLoss) && newLoss <= loss) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      w_.swap(candidate);
      const double drop = loss - newLoss;
      loss = newLoss;
      step *= 1.1;
      if (drop < tol_) break;
      evaluate(x, data.labels, w_, probs, &grad);
    }
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    std::vector<double> z;
    std_.apply(x, z);
    ProbVector p(c_);
    scores(z, p);
    softmaxInPlace(p);
    return p;
  }

 private:
  void scores(const std::vector<double>& z, std::vector<double>& out) const {
    for (int y = 0; y < c_; ++y) {
      const double* wy = w_.data() + static_cast<std::size_t>(y) * (m_ + 1);
      double s = wy[m_];
      for (int j = 0; j < m_; ++j) s += wy[j] * z[j];
      out[y] = s;
    }
  }

  static void softmaxInPlace(std::vector<double>& v) {
    const double mx = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (double& s : v) {
      s = std::exp(s - mx);
      sum += s;
    }
    for (double& s : v) s /= sum;
  }

  // Mean cross-entropy plus the ridge term; optionally fills the gradient.
  double evaluate(const std::vector<double>& x, const std::vector<int>& labels,
                  const std::vector<double>& w, std::vector<double>& probs,
                  std::vector<double>* grad) const {
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    double loss = 0.0;
    std::vector<double> row(c_);
    for (int i = 0; i < n_; ++i) {
      const double* xi = x.data() + static_cast<std::size_t>(i) * m_;
      for (int y = 0; y < c_; ++y) {
        const double* wy = w.data() + static_cast<std::size_t>(y) * (m_ + 1);
        double s = wy[m_];
        for (int j = 0; j < m_; ++j) s += wy[j] * xi[j];
        row[y] = s;
      }
      softmaxInPlace(row);
      for (int y = 0; y < c_; ++y) probs[static_cast<std::size_t>(i) * c_ + y] = row[y];
      loss -= std::log(std::max(row[labels[i]], 1e-300));
      if (grad) {
        for (int y = 0; y < c_; ++y) {
          const double delta = row[y] - (labels[i] == y ? 1.0 : 0.0);
          double* gy = grad->data() + static_cast<std::size_t>(y) * (m_ + 1);
          for (int j = 0; j < m_; ++j) gy[j] += delta * xi[j];
          gy[m_] += delta;
        }
      }
    }
    loss /= n_;
    double penalty = 0.0;
    for (int y = 0; y < c_; ++y) {
      const double* wy = w.data() + static_cast<std::size_t>(y) * (m_ + 1);
      for (int j = 0; j < m_; ++j) penalty += wy[j] * wy[j];  // intercept unpenalized
    }
    loss += 0.5 * ridge_ * penalty;
    if (grad) {
      for (double& g : *grad) g /= n_;
      for (int y = 0; y < c_; ++y) {
        double* gy = grad->data() + static_cast<std::size_t>(y) * (m_ + 1);
        const double* wy = w.data() + static_cast<std::size_t>(y) * (m_ + 1);
        for (int j = 0; j < m_; ++j) gy[j] += ridge_ * wy[j];
      }
    }
    return loss;
  }

  double ridge_;
  int maxIter_;
  double tol_;
  Standardizer std_;
  std::vector<double> w_;  // c * (m + 1), intercept last
  int n_ = 0, m_ = 0, c_ = 0;
};

}  // namespace hesca

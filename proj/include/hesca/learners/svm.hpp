#pragma once

#include <cmath>
#include <vector>

#include "hesca/classifier.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// One-dimensional logistic map from raw decision values to probabilities,
// fit by regularized maximum likelihood (Platt scaling with the usual
// smoothed targets). prob() is monotone in the score whenever the labels
// actually order the scores.
struct PlattCalibration {
  double a = 0.0;
  double b = 0.0;

  double operator()(double score) const {
    const double fApB = score * a + b;
    if (fApB >= 0.0) return std::exp(-fApB) / (1.0 + std::exp(-fApB));
    return 1.0 / (1.0 + std::exp(fApB));
  }
};

// Fits the sigmoid P(y=1|s) = 1 / (1 + exp(a*s + b)) by Newton iteration with
// backtracking. Targets are smoothed to (N+ + 1)/(N+ + 2) and 1/(N- + 2).
inline PlattCalibration calibrateScores(std::span<const double> scores,
                                        std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw Error("calibrateScores: scores/labels size mismatch");
  const int n = static_cast<int>(scores.size());
  double prior1 = 0.0, prior0 = 0.0;
  for (int y : labels) (y != 0 ? prior1 : prior0) += 1.0;
  if (prior1 == 0.0 || prior0 == 0.0)
    throw Error("calibrateScores: both labels must be present");

  const double hiTarget = (prior1 + 1.0) / (prior1 + 2.0);
  const double loTarget = 1.0 / (prior0 + 2.0);
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = labels[i] != 0 ? hiTarget : loTarget;

  double a = 0.0;
  double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
  const double sigma = 1e-12;

  auto objective = [&](double av, double bv) {
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double fApB = scores[i] * av + bv;
      if (fApB >= 0.0)
        err += t[i] * fApB + std::log(1.0 + std::exp(-fApB));
      else
        err += (t[i] - 1.0) * fApB + std::log(1.0 + std::exp(fApB));
    }
    return err;
  };

  double fval = objective(a, b);
  for (int iter = 0; iter < 100; ++iter) {
    double h11 = sigma, h22 = sigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double fApB = scores[i] * a + b;
      double p, q;
      if (fApB >= 0.0) {
        p = std::exp(-fApB) / (1.0 + std::exp(-fApB));
        q = 1.0 / (1.0 + std::exp(-fApB));
      } else {
        p = 1.0 / (1.0 + std::exp(fApB));
        q = std::exp(fApB) / (1.0 + std::exp(fApB));
      }
      const double d2 = p * q;
      h11 += scores[i] * scores[i] * d2;
      h22 += d2;
      h21 += scores[i] * d2;
      const double d1 = t[i] - p;
      g1 += scores[i] * d1;
      g2 += d1;
    }
    if (std::fabs(g1) < 1e-5 && std::fabs(g2) < 1e-5) break;

    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;

    double stepsize = 1.0;
    bool stepped = false;
    while (stepsize >= 1e-10) {
      const double newA = a + stepsize * dA;
      const double newB = b + stepsize * dB;
      const double newF = objective(newA, newB);
      if (newF < fval + 1e-4 * stepsize * gd) {
        a = newA;
        b = newB;
        fval = newF;
        stepped = true;
        break;
      }
      stepsize *= 0.5;
    }
    if (!stepped) break;
  }
  return PlattCalibration{a, b};
}

namespace svm_detail {

struct KernelFn {
  SvmKernelKind kind;
  double gamma;
  int degree;

  double operator()(const double* x, const double* z, int m) const {
    switch (kind) {
      case SvmKernelKind::Linear: {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += x[j] * z[j];
        return s;
      }
      case SvmKernelKind::Poly: {
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += x[j] * z[j];
        return std::pow(s + 1.0, degree);
      }
      case SvmKernelKind::Rbf: {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
          const double d = x[j] - z[j];
          s += d * d;
        }
        return std::exp(-gamma * s);
      }
    }
    return 0.0;
  }
};

// Sequential minimal optimization over the dual soft-margin problem, after
// Platt: pairwise analytic steps with an error cache, first-choice loop over
// KKT violators and a max-|E1 - E2| second choice. Fallback scans start at a
// seeded offset so training stays deterministic.
class Smo {
 public:
  Smo(const std::vector<double>& x, const std::vector<int>& y, int n, int m, double C,
      KernelFn kernel, std::uint64_t seed)
      : x_(x), y_(y), n_(n), m_(m), C_(C), kernel_(kernel), rng_(seed) {
    alpha_.assign(n_, 0.0);
    error_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) error_[i] = -y_[i];
    if (static_cast<std::size_t>(n_) * n_ <= 9'000'000) {
      gram_.resize(static_cast<std::size_t>(n_) * n_);
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          const double kij = kernel_(rowPtr(i), rowPtr(j), m_);
          gram_[static_cast<std::size_t>(i) * n_ + j] = kij;
          gram_[static_cast<std::size_t>(j) * n_ + i] = kij;
        }
    }
  }

  void solve() {
    int numChanged = 0;
    bool examineAll = true;
    int guard = 0;
    while ((numChanged > 0 || examineAll) && ++guard < 2000) {
      numChanged = 0;
      if (examineAll) {
        for (int i = 0; i < n_; ++i) numChanged += examine(i);
      } else {
        for (int i = 0; i < n_; ++i)
          if (alpha_[i] > 0.0 && alpha_[i] < C_) numChanged += examine(i);
      }
      if (examineAll)
        examineAll = false;
      else if (numChanged == 0)
        examineAll = true;
    }
  }

  double decision(const double* z) const {
    double s = -b_;
    for (int i = 0; i < n_; ++i)
      if (alpha_[i] > 0.0) s += alpha_[i] * y_[i] * kernel_(rowPtr(i), z, m_);
    return s;
  }

  double trainDecision(int i) const {
    double s = -b_;
    for (int j = 0; j < n_; ++j)
      if (alpha_[j] > 0.0) s += alpha_[j] * y_[j] * k(j, i);
    return s;
  }

  const std::vector<double>& alphas() const { return alpha_; }
  double bias() const { return b_; }

 private:
  const double* rowPtr(int i) const { return x_.data() + static_cast<std::size_t>(i) * m_; }

  double k(int i, int j) const {
    if (!gram_.empty()) return gram_[static_cast<std::size_t>(i) * n_ + j];
    return kernel_(rowPtr(i), rowPtr(j), m_);
  }

  double fwd(int i) const {
    double s = -b_;
    for (int j = 0; j < n_; ++j)
      if (alpha_[j] > 0.0) s += alpha_[j] * y_[j] * k(j, i);
    return s;
  }

  int examine(int i2) {
    const double y2 = y_[i2];
    const double alph2 = alpha_[i2];
    const double e2 = (alph2 > 0.0 && alph2 < C_) ? error_[i2] : fwd(i2) - y2;
    const double r2 = e2 * y2;
    if ((r2 < -tol_ && alph2 < C_) || (r2 > tol_ && alph2 > 0.0)) {
      // second choice: largest |E1 - E2| among non-bound points
      int best = -1;
      double bestGap = -1.0;
      for (int i = 0; i < n_; ++i) {
        if (alpha_[i] <= 0.0 || alpha_[i] >= C_) continue;
        const double gap = std::fabs(error_[i] - e2);
        if (gap > bestGap) {
          bestGap = gap;
          best = i;
        }
      }
      if (best >= 0 && takeStep(best, i2, e2)) return 1;
      const int offset = static_cast<int>(rng_.nextBelow(static_cast<std::uint64_t>(n_)));
      for (int t = 0; t < n_; ++t) {
        const int i1 = (t + offset) % n_;
        if (alpha_[i1] > 0.0 && alpha_[i1] < C_ && takeStep(i1, i2, e2)) return 1;
      }
      for (int t = 0; t < n_; ++t) {
        const int i1 = (t + offset) % n_;
        if (takeStep(i1, i2, e2)) return 1;
      }
    }
    return 0;
  }

  bool takeStep(int i1, int i2, double e2) {
    if (i1 == i2) return false;
    const double alph1 = alpha_[i1];
    const double alph2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = (alph1 > 0.0 && alph1 < C_) ? error_[i1] : fwd(i1) - y1;
    const double s = y1 * y2;

    double lo, hi;
    if (s < 0.0) {
      lo = std::max(0.0, alph2 - alph1);
      hi = std::min(C_, C_ + alph2 - alph1);
    } else {
      lo = std::max(0.0, alph1 + alph2 - C_);
      hi = std::min(C_, alph1 + alph2);
    }
    if (lo >= hi) return false;

    const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;
    double a2;
    if (eta > 0.0) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // objective at the segment ends
      const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
      const double f2 = y2 * (e2 + b_) - alph2 * k22 - s * alph1 * k12;
      const double l1 = alph1 + s * (alph2 - lo);
      const double h1 = alph1 + s * (alph2 - hi);
      const double lObj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 +
                          s * lo * l1 * k12;
      const double hObj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 +
                          s * hi * h1 * k12;
      if (lObj < hObj - eps_)
        a2 = lo;
      else if (lObj > hObj + eps_)
        a2 = hi;
      else
        a2 = alph2;
    }
    if (std::fabs(a2 - alph2) < eps_ * (a2 + alph2 + eps_)) return false;
    const double a1 = alph1 + s * (alph2 - a2);

    const double b1 = e1 + y1 * (a1 - alph1) * k11 + y2 * (a2 - alph2) * k12 + b_;
    const double b2 = e2 + y1 * (a1 - alph1) * k12 + y2 * (a2 - alph2) * k22 + b_;
    const double oldB = b_;
    if (a1 > 0.0 && a1 < C_)
      b_ = b1;
    else if (a2 > 0.0 && a2 < C_)
      b_ = b2;
    else
      b_ = 0.5 * (b1 + b2);

    const double d1 = y1 * (a1 - alph1);
    const double d2 = y2 * (a2 - alph2);
    for (int i = 0; i < n_; ++i) {
      if (alpha_[i] > 0.0 && alpha_[i] < C_)
        error_[i] += d1 * k(i1, i) + d2 * k(i2, i) - (b_ - oldB);
    }
    alpha_[i1] = a1;
    alpha_[i2] = a2;
    error_[i1] = fwd(i1) - y1;
    error_[i2] = fwd(i2) - y2;
    return true;
  }

  const std::vector<double>& x_;
  const std::vector<int>& y_;
  int n_, m_;
  double C_;
  KernelFn kernel_;
  Rng rng_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  std::vector<double> gram_;
  double b_ = 0.0;
  static constexpr double tol_ = 1e-3;
  static constexpr double eps_ = 1e-12;
};

// Couples pairwise probabilities r[i][j] = P(i | i or j) into a single
// distribution by minimizing the usual quadratic criterion (the iterative
// scheme of Wu, Lin & Weng, their second method).
inline ProbVector couplePairwise(const std::vector<std::vector<double>>& r) {
  const int k = static_cast<int>(r.size());
  ProbVector p(k, 1.0 / k);
  if (k == 1) return p;
  std::vector<std::vector<double>> q(k, std::vector<double>(k, 0.0));
  for (int t = 0; t < k; ++t) {
    for (int j = 0; j < k; ++j) {
      if (j == t) continue;
      q[t][t] += r[j][t] * r[j][t];
      q[t][j] = -r[j][t] * r[t][j];
    }
  }
  std::vector<double> qp(k);
  const double eps = 0.005 / k;
  for (int iter = 0; iter < std::max(100, k); ++iter) {
    double pQp = 0.0;
    for (int t = 0; t < k; ++t) {
      qp[t] = 0.0;
      for (int j = 0; j < k; ++j) qp[t] += q[t][j] * p[j];
      pQp += p[t] * qp[t];
    }
    double maxError = 0.0;
    for (int t = 0; t < k; ++t) maxError = std::max(maxError, std::fabs(qp[t] - pQp));
    if (maxError < eps) break;
    for (int t = 0; t < k; ++t) {
      const double diff = (-qp[t] + pQp) / q[t][t];
      p[t] += diff;
      pQp = (pQp + diff * (diff * q[t][t] + 2.0 * qp[t])) / (1.0 + diff) / (1.0 + diff);
      for (int j = 0; j < k; ++j) {
        qp[j] = (qp[j] + diff * q[t][j]) / (1.0 + diff);
        p[j] /= (1.0 + diff);
      }
    }
  }
  for (double& v : p) v = std::clamp(v, 0.0, 1.0);
  normalizeDistribution(p);
  return p;
}

}  // namespace svm_detail

// Kernel SVM trained by SMO on standardized attributes. Multiclass problems
// use one-vs-one machines with Platt-calibrated pairwise probabilities which
// are then coupled into a class distribution.
class SvmClassifier final : public Classifier {
 public:
  SvmClassifier(SvmKernelKind kernel, double C, double gamma, int degree, std::uint64_t seed)
      : kernelKind_(kernel), C_(C), gamma_(gamma), degree_(degree), seed_(seed) {}

  void fit(const Dataset& data) override {
    c_ = data.c;
    m_ = data.m;
    std_.fit(data);
    const std::vector<double> x = std_.transformAll(data);
    const double gamma = gamma_ > 0.0 ? gamma_ : 1.0 / m_;
    kernel_ = svm_detail::KernelFn{kernelKind_, gamma, degree_};

    machines_.clear();
    for (int a = 0; a < c_; ++a) {
      for (int b = a + 1; b < c_; ++b) {
        Machine machine;
        machine.classA = a;
        machine.classB = b;
        std::vector<int> y;
        for (int i = 0; i < data.n; ++i) {
          if (data.labels[i] != a && data.labels[i] != b) continue;
          for (int j = 0; j < m_; ++j)
            machine.x.push_back(x[static_cast<std::size_t>(i) * m_ + j]);
          y.push_back(data.labels[i] == a ? 1 : -1);
        }
        machine.y = std::move(y);
        const int n = static_cast<int>(machine.y.size());
        svm_detail::Smo smo(machine.x, machine.y, n, m_, C_, kernel_,
                            mixSeed(seed_, (static_cast<std::uint64_t>(a) << 16) | b));
        smo.solve();
        std::vector<double> decisions(n);
        std::vector<int> labels01(n);
        for (int i = 0; i < n; ++i) {
          decisions[i] = smo.trainDecision(i);
          labels01[i] = machine.y[i] > 0 ? 1 : 0;
        }
        machine.platt = calibrateScores(decisions, labels01);
        // keep only the support vectors for prediction
        auto frozen = std::make_shared<FrozenMachine>();
        frozen->bias = smo.bias();
        for (int i = 0; i < n; ++i) {
          if (smo.alphas()[i] <= 0.0) continue;
          frozen->svCoef.push_back(smo.alphas()[i] * machine.y[i]);
          const double* row = machine.x.data() + static_cast<std::size_t>(i) * m_;
          frozen->svX.insert(frozen->svX.end(), row, row + m_);
        }
        machine.smo = std::move(frozen);
        machine.x.clear();
        machine.y.clear();
        machines_.push_back(std::move(machine));
      }
    }
  }

  ProbVector predictDistribution(std::span<const double> xRaw) const override {
    std::vector<double> z;
    std_.apply(xRaw, z);
    if (c_ == 2) {
      const double f = machines_[0].smo->decision(z.data(), kernel_, m_);
      const double pa = machines_[0].platt(f);
      return ProbVector{pa, 1.0 - pa};
    }
    std::vector<std::vector<double>> r(c_, std::vector<double>(c_, 0.0));
    for (const Machine& machine : machines_) {
      const double f = machine.smo->decision(z.data(), kernel_, m_);
      double pa = machine.platt(f);
      pa = std::clamp(pa, 1e-7, 1.0 - 1e-7);
      r[machine.classA][machine.classB] = pa;
      r[machine.classB][machine.classA] = 1.0 - pa;
    }
    return svm_detail::couplePairwise(r);
  }

 private:
  struct FrozenMachine {
    std::vector<double> svX;      // support vectors, row-major
    std::vector<double> svCoef;   // alpha_i * y_i
    double bias = 0.0;

    double decision(const double* z, const svm_detail::KernelFn& kernel, int m) const {
      double s = -bias;
      const int count = static_cast<int>(svCoef.size());
      for (int i = 0; i < count; ++i)
        s += svCoef[i] * kernel(svX.data() + static_cast<std::size_t>(i) * m, z, m);
      return s;
    }
  };

  struct Machine {
    int classA = 0, classB = 0;
    std::vector<double> x;
    std::vector<int> y;
    PlattCalibration platt;
    std::shared_ptr<FrozenMachine> smo;
  };

  SvmKernelKind kernelKind_;
  double C_;
  double gamma_;
  int degree_;
  std::uint64_t seed_;
  Standardizer std_;
  svm_detail::KernelFn kernel_{SvmKernelKind::Linear, 1.0, 2};
  int c_ = 0, m_ = 0;
  std::vector<Machine> machines_;
};

}  // namespace hesca

#pragma once

#include <memory>
#include <vector>

#include "hesca/classifier.hpp"
#include "hesca/learners/c45_tree.hpp"
#include "hesca/linalg.hpp"
#include "hesca/rng.hpp"

namespace hesca {

// Rotation forest: per tree, attributes are partitioned into random groups;
// each group is rotated by the principal components of a per-group sample (a
// random non-empty class subset, then a 50% bootstrap of it) and a C4.5 tree
// is trained on the rotated data. All components are kept, so the rotation is
// invertible. Tree distributions are averaged.
//
// With sampleFraction >= 1 the per-group sample is the whole train set, which
// makes every tree's rotation (and hence every tree) identical; the unit
// tests use that degenerate mode.
class RotationForestClassifier final : public Classifier {
 public:
  RotationForestClassifier(int numTrees, int groupSize, double sampleFraction,
                           std::uint64_t seed)
      : numTrees_(numTrees > 0 ? numTrees : 50),
        groupSize_(groupSize),
        sampleFraction_(sampleFraction),
        seed_(seed) {}

  void fit(const Dataset& data) override {
    c_ = data.c;
    m_ = data.m;
    members_.clear();
    members_.reserve(numTrees_);
    for (int t = 0; t < numTrees_; ++t) {
      Rng rng(mixSeed(seed_, static_cast<std::uint64_t>(t) + 0x5151));
      Member member;
      buildRotation(data, rng, member);
      Dataset rotated = rotateDataset(data, member);
      member.tree = std::make_unique<C45TreeClassifier>(2, true, 0.25);
      member.tree->fit(rotated);
      members_.push_back(std::move(member));
    }
  }

  ProbVector predictDistribution(std::span<const double> x) const override {
    ProbVector acc(c_, 0.0);
    std::vector<double> rotated(m_);
    for (const auto& member : members_) {
      rotateInstance(x, member, rotated);
      const ProbVector p = member.tree->predictDistribution(rotated);
      for (int j = 0; j < c_; ++j) acc[j] += p[j];
    }
    normalizeDistribution(acc);
    return acc;
  }

 private:
  struct Group {
    std::vector<int> attrs;
    std::vector<double> mean;      // per group attribute, from the PCA sample
    std::vector<double> rotation;  // |attrs| x |attrs| column-major eigenvectors
  };
  struct Member {
    std::vector<Group> groups;
    std::unique_ptr<C45TreeClassifier> tree;
  };

  void buildRotation(const Dataset& d, Rng& rng, Member& member) const {
    std::vector<int> attrs(m_);
    for (int j = 0; j < m_; ++j) attrs[j] = j;
    rng.shuffle(attrs);

    for (int start = 0; start < m_; start += groupSize_) {
      Group group;
      const int end = std::min(start + groupSize_, m_);
      group.attrs.assign(attrs.begin() + start, attrs.begin() + end);
      std::sort(group.attrs.begin(), group.attrs.end());

      std::vector<int> sample = pcaSample(d, rng);
      fitGroupPca(d, sample, group);
      member.groups.push_back(std::move(group));
    }
  }

  std::vector<int> pcaSample(const Dataset& d, Rng& rng) const {
    std::vector<int> pool;
    if (sampleFraction_ >= 1.0) {
      pool.resize(d.n);
      for (int i = 0; i < d.n; ++i) pool[i] = i;
      return pool;
    }
    std::vector<char> useClass(c_, 0);
    int picked = 0;
    for (int j = 0; j < c_; ++j)
      if (rng.nextDouble() < 0.5) {
        useClass[j] = 1;
        ++picked;
      }
    if (picked == 0) useClass[rng.nextInt(0, c_ - 1)] = 1;
    for (int i = 0; i < d.n; ++i)
      if (useClass[d.labels[i]]) pool.push_back(i);

    const int draws = std::max(2, static_cast<int>(pool.size() * sampleFraction_));
    std::vector<int> sample(draws);
    for (int i = 0; i < draws; ++i)
      sample[i] = pool[rng.nextBelow(pool.size())];
    return sample;
  }

  void fitGroupPca(const Dataset& d, const std::vector<int>& sample, Group& group) const {
    const int k = static_cast<int>(group.attrs.size());
    const int n = static_cast<int>(sample.size());
    group.mean.assign(k, 0.0);
    for (int i : sample) {
      const auto r = d.row(i);
      for (int a = 0; a < k; ++a) group.mean[a] += r[group.attrs[a]];
    }
    for (double& v : group.mean) v /= n;

    std::vector<double> cov(static_cast<std::size_t>(k) * k, 0.0);
    for (int i : sample) {
      const auto r = d.row(i);
      for (int a = 0; a < k; ++a) {
        const double da = r[group.attrs[a]] - group.mean[a];
        for (int b = a; b < k; ++b) {
          const double db = r[group.attrs[b]] - group.mean[b];
          cov[a + static_cast<std::size_t>(k) * b] += da * db;
        }
      }
    }
    const double denom = n > 1 ? n - 1.0 : 1.0;
    for (int a = 0; a < k; ++a)
      for (int b = a; b < k; ++b) {
        cov[a + static_cast<std::size_t>(k) * b] /= denom;
        cov[b + static_cast<std::size_t>(k) * a] = cov[a + static_cast<std::size_t>(k) * b];
      }
    group.rotation = jacobiEigenSym(std::move(cov), k).vectors;
  }

  void rotateInstance(std::span<const double> x, const Member& member,
                      std::vector<double>& out) const {
    int pos = 0;
    for (const Group& group : member.groups) {
      const int k = static_cast<int>(group.attrs.size());
      for (int col = 0; col < k; ++col) {
        double s = 0.0;
        for (int a = 0; a < k; ++a)
          s += (x[group.attrs[a]] - group.mean[a]) *
               group.rotation[a + static_cast<std::size_t>(k) * col];
        out[pos++] = s;
      }
    }
  }

  Dataset rotateDataset(const Dataset& d, const Member& member) const {
    Dataset out;
    out.name = d.name;
    out.classNames = d.classNames;
    out.labels = d.labels;
    out.n = d.n;
    out.m = d.m;
    out.c = d.c;
    out.values.resize(d.values.size());
    std::vector<double> rotated(m_);
    for (int i = 0; i < d.n; ++i) {
      rotateInstance(d.row(i), member, rotated);
      std::copy(rotated.begin(), rotated.end(),
                out.values.begin() + static_cast<std::size_t>(i) * m_);
    }
    return out;
  }

  int numTrees_;
  int groupSize_;
  double sampleFraction_;
  std::uint64_t seed_;
  int c_ = 0, m_ = 0;
  std::vector<Member> members_;
};

}  // namespace hesca

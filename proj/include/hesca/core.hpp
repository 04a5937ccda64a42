#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hesca {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse failure with 1-based row/column location inside the offending file.
struct ParseError : Error {
  ParseError(const std::string& msg, int row, int col)
      : Error(msg + " (row " + std::to_string(row) + ", column " + std::to_string(col) + ")"),
        row(row),
        col(col) {}
  explicit ParseError(const std::string& msg, int row = 0)
      : Error(row > 0 ? msg + " (line " + std::to_string(row) + ")" : msg), row(row), col(0) {}
  int row;
  int col;
};

// A probability distribution over classes. Entries in [0,1], sum 1 within 1e-9.
using ProbVector = std::vector<double>;

inline bool isValidDistribution(std::span<const double> p) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    sum += v;
  }
  return !p.empty() && std::fabs(sum - 1.0) <= 1e-9;
}

// Normalizes in place by the accumulated sum; a zero-mass vector becomes uniform.
inline void normalizeDistribution(ProbVector& p) {
  double sum = 0.0;
  for (double v : p) sum += v;
  if (sum <= 0.0) {
    const double u = 1.0 / static_cast<double>(p.size());
    for (double& v : p) v = u;
    return;
  }
  for (double& v : p) v /= sum;
}

// Argmax with ties broken toward the lowest class index.
inline int argmaxLowestTie(std::span<const double> p) {
  if (p.empty()) throw Error("argmax of empty vector");
  int best = 0;
  for (int j = 1; j < static_cast<int>(p.size()); ++j)
    if (p[j] > p[best]) best = j;
  return best;
}

inline double entropyBits(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double k : counts) {
    if (k <= 0.0) continue;
    const double q = k / total;
    h -= q * std::log2(q);
  }
  return h;
}

}  // namespace hesca

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace hesca {

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
// Columns of `vectors` are eigenvectors; pairs are sorted by descending
// eigenvalue and each column's sign is fixed so its largest-magnitude entry
// is positive, which keeps rotations reproducible.
struct EigenSym {
  std::vector<double> values;   // k
  std::vector<double> vectors;  // k * k, column-major: vectors[i + k*col]
};

inline EigenSym jacobiEigenSym(std::vector<double> a, int k) {
  std::vector<double> v(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) v[i + static_cast<std::size_t>(k) * i] = 1.0;
  auto at = [&](std::vector<double>& mat, int r, int c) -> double& {
    return mat[r + static_cast<std::size_t>(k) * c];
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += a[p + static_cast<std::size_t>(k) * q] *
                                              a[p + static_cast<std::size_t>(k) * q];
    if (off < 1e-24) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const double apq = at(a, p, q);
        if (std::fabs(apq) < 1e-300) continue;
        const double app = at(a, p, p);
        const double aqq = at(a, q, q);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double cos = 1.0 / std::sqrt(t * t + 1.0);
        const double sin = t * cos;
        for (int i = 0; i < k; ++i) {
          const double aip = at(a, i, p);
          const double aiq = at(a, i, q);
          at(a, i, p) = cos * aip - sin * aiq;
          at(a, i, q) = sin * aip + cos * aiq;
        }
        for (int i = 0; i < k; ++i) {
          const double api = at(a, p, i);
          const double aqi = at(a, q, i);
          at(a, p, i) = cos * api - sin * aqi;
          at(a, q, i) = sin * api + cos * aqi;
        }
        for (int i = 0; i < k; ++i) {
          const double vip = at(v, i, p);
          const double viq = at(v, i, q);
          at(v, i, p) = cos * vip - sin * viq;
          at(v, i, q) = sin * vip + cos * viq;
        }
      }
    }
  }

  EigenSym out;
  out.values.resize(k);
  for (int i = 0; i < k; ++i) out.values[i] = a[i + static_cast<std::size_t>(k) * i];

  std::vector<int> order(k);
  for (int i = 0; i < k; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return out.values[x] > out.values[y]; });

  EigenSym sorted;
  sorted.values.resize(k);
  sorted.vectors.resize(static_cast<std::size_t>(k) * k);
  for (int col = 0; col < k; ++col) {
    sorted.values[col] = out.values[order[col]];
    int maxRow = 0;
    for (int i = 1; i < k; ++i)
      if (std::fabs(v[i + static_cast<std::size_t>(k) * order[col]]) >
          std::fabs(v[maxRow + static_cast<std::size_t>(k) * order[col]]))
        maxRow = i;
    const double sign = v[maxRow + static_cast<std::size_t>(k) * order[col]] < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < k; ++i)
      sorted.vectors[i + static_cast<std::size_t>(k) * col] =
          sign * v[i + static_cast<std::size_t>(k) * order[col]];
  }
  return sorted;
}

}  // namespace hesca

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hesca/prob.hpp"
#include "hesca/rng.hpp"

using namespace hesca;

namespace {

// Quadrature oracle: CDF of the t distribution by Simpson integration of the
// density from 0 to |t| plus the exact half at the median; symmetric in t, so
// no tail truncation is involved. Independent of the incomplete-beta route
// used by the library.
double tCdfQuadrature(double t, double df) {
  auto pdf = [df](double x) {
    const double logc = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                        0.5 * std::log(df * M_PI);
    return std::exp(logc - (df + 1.0) / 2.0 * std::log1p(x * x / df));
  };
  const double hi = std::fabs(t);
  const int steps = 40000;
  const double h = hi / steps;
  double sum = pdf(0.0) + pdf(hi);
  for (int i = 1; i < steps; ++i) sum += pdf(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  const double halfMass = sum * h / 3.0;
  return t >= 0.0 ? 0.5 + halfMass : 0.5 - halfMass;
}

}  // namespace

TEST_CASE("rng streams are deterministic and seed-sensitive") {
  Rng a(42), b(42), c(43);
  bool allEqual = true, anyDiffer = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.nextU64();
    if (va != b.nextU64()) allEqual = false;
    if (va != c.nextU64()) anyDiffer = true;
  }
  CHECK(allEqual);
  CHECK(anyDiffer);
}

TEST_CASE("rng bounded draws stay in range") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.nextBelow(13) < 13);
    const double u = rng.nextDouble();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(99);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("gaussian draws have roughly standard moments") {
  Rng rng(5);
  double sum = 0.0, sumSq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double g = rng.nextGaussian();
    sum += g;
    sumSq += g * g;
  }
  CHECK(std::fabs(sum / n) < 0.03);
  CHECK(std::fabs(sumSq / n - 1.0) < 0.05);
}

TEST_CASE("hash64 is stable and input-sensitive") {
  CHECK(hash64("iris", 3) == hash64("iris", 3));
  CHECK(hash64("iris", 3) != hash64("iris", 4));
  CHECK(hash64("iris", 3) != hash64("wine", 3));
}

TEST_CASE("normal cdf and quantile") {
  CHECK(prob::normalCdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(prob::normalCdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-10));
  CHECK(prob::normalCdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-10));
  CHECK(prob::normalQuantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(prob::normalQuantile(0.75) == doctest::Approx(0.6744897501960817).epsilon(1e-9));
  for (double p : {0.001, 0.2, 0.5, 0.77, 0.999})
    CHECK(prob::normalCdf(prob::normalQuantile(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("student t cdf matches Simpson quadrature oracle") {
  for (double df : {1.0, 4.0, 9.0, 24.0}) {
    for (double t : {-2.5, -0.3, 0.0, 1.0, 4.2426})
      CHECK(prob::studentTCdf(t, df) == doctest::Approx(tCdfQuadrature(t, df)).epsilon(1e-7));
  }
}

TEST_CASE("chi-squared cdf: closed form at df 2") {
  // P(chi2_2 <= x) = 1 - exp(-x/2)
  for (double x : {0.5, 2.0, 7.3})
    CHECK(prob::chiSquaredCdf(x, 2.0) ==
          doctest::Approx(1.0 - std::exp(-x / 2.0)).epsilon(1e-10));
}

TEST_CASE("f cdf: symmetric point of F(2,2) is one half") {
  CHECK(prob::fCdf(1.0, 2.0, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
}

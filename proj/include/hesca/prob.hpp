#pragma once

// Distribution functions needed by the statistical tests and by C4.5's
// pessimistic pruning: normal CDF/quantile, regularized incomplete gamma and
// beta, and the chi-square / Student t / F CDFs built on top of them.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hesca::prob {

inline double normalCdf(double x) { return 0.5 * std::erfc(-x / 1.4142135623730951); }

// Acklam's rational approximation, sharpened with one Halley step.
inline double normalQuantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normalQuantile: p outside (0,1)");
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normalCdf(x) - p;
  const double u = e * 2.5066282746310002 * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

// Regularized lower incomplete gamma P(a, x), series + continued fraction.
inline double gammaP(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gammaP: bad arguments");
  if (x == 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x)
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  const double q = std::exp(-x + a * std::log(x) - gln) * h;
  return 1.0 - q;
}

namespace detail {
inline double betacf(double a, double b, double x) {
  const double tiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h;
}
}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double betaInc(double a, double b, double x) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("betaInc: x outside [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
  return 1.0 - front * detail::betacf(b, a, 1.0 - x) / b;
}

inline double chiSquaredCdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return gammaP(0.5 * df, 0.5 * x);
}

inline double studentTCdf(double t, double df) {
  if (df <= 0.0) throw std::domain_error("studentTCdf: df must be positive");
  const double x = df / (df + t * t);
  const double p = 0.5 * betaInc(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - p : p;
}

inline double fCdf(double x, double d1, double d2) {
  if (x <= 0.0) return 0.0;
  return betaInc(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2));
}

}  // namespace hesca::prob

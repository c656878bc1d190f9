#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace hardy {

inline constexpr double kLn2 = 0.6931471805599453094172321;
inline constexpr double kLn10 = 2.3025850929940456840179915;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(sinh x) for x > 0 without overflow: sinh x = e^x (1 - e^{-2x}) / 2,
/// so for large x the result is x - log 2 + log1p(-e^{-2x}).
inline double log_sinh(double x) {
  if (x < 1.0) return std::log(std::sinh(x));
  return x - kLn2 + std::log1p(-std::exp(-2.0 * x));
}

/// log(e^a + e^b), safe for infinite operands.
inline double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a == kPosInf || b == kPosInf) return kPosInf;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

/// log|e^a - e^b|, safe for -inf operands; -inf when a == b.
inline double log_abs_sub_exp(double a, double b) {
  if (a == b) return kNegInf;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  if (lo == kNegInf) return hi;
  return hi + std::log(-std::expm1(lo - hi));
}

/// exp with silent underflow to zero; +inf maps to +inf.
inline double exp_or_zero(double x) {
  if (x == kNegInf) return 0.0;
  return std::exp(x);
}

/// Least-squares line through (x_i, y_i) plus the RMS residual,
/// used to read off local power exponents and exponential rates.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

inline LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LinearFit out;
  const std::size_t n = xs.size();
  out.points = n;
  if (n < 2) return out;
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) { sx += xs[i]; sy += ys[i]; }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ys[i] - (out.intercept + out.slope * xs[i]);
    ss += d * d;
  }
  out.rms_residual = std::sqrt(ss / static_cast<double>(n));
  return out;
}

} // namespace hardy

#pragma once

#include <cmath>
#include <string>

#include "hardy/errors.hpp"
#include "hardy/math.hpp"

namespace hardy {

/// Exponent bundle for one (p, q) pair with 0 < q < p and 1 < p < infinity.
/// r is defined through 1/r = 1/q - 1/p, so r/q = r/p + 1 always holds.
/// The conjugate of q is never stored: for q <= 1 it is meaningless or
/// infinite, and every consumer only ever needs r * (1 - 1/q), which stays
/// finite (zero at q == 1, negative below).
struct ExponentConfig {
  double p;
  double q;
  double r;
  double p_conj;     // p / (p - 1)
  double ratio_rp;   // r / p
  double ratio_rpc;  // r / p_conj
  double ratio_rq;   // r / q
  double ratio_rqc;  // r * (1 - 1/q)
};

/// Factors multiplying the characterizing integral in the two-sided bound
/// on the best constant of the inequality.
struct ConstantBracket {
  double lower_factor;
  double upper_factor;
};

inline ExponentConfig derive_exponents(double p, double q) {
  if (std::isnan(p)) throw domain_error("p finite violated (p is NaN)");
  if (std::isnan(q)) throw domain_error("q finite violated (q is NaN)");
  if (!(p > 1.0)) throw domain_error("p > 1 violated (p = " + std::to_string(p) + ")");
  if (!(p < kPosInf)) throw domain_error("p < infinity violated");
  if (!(q > 0.0)) throw domain_error("q > 0 violated (q = " + std::to_string(q) + ")");
  if (!(q < p)) throw domain_error("q < p violated (p = " + std::to_string(p) +
                                   ", q = " + std::to_string(q) + ")");
  ExponentConfig e;
  e.p = p;
  e.q = q;
  e.r = p * q / (p - q);
  e.p_conj = p / (p - 1.0);
  e.ratio_rp = e.r / p;
  e.ratio_rpc = e.r / e.p_conj;
  e.ratio_rq = e.r / q;
  e.ratio_rqc = e.r * (1.0 - 1.0 / q);
  return e;
}

inline ConstantBracket theorem_constants(const ExponentConfig& e) {
  ConstantBracket b;
  b.lower_factor = std::pow(e.p_conj, 1.0 / e.p_conj) * std::pow(e.q, 1.0 / e.p) *
                   (1.0 - e.q / e.p);
  b.upper_factor = std::pow(e.r / e.q, 1.0 / e.r) * std::pow(e.p, 1.0 / e.p) *
                   std::pow(e.p_conj, 1.0 / e.p_conj);
  return b;
}

} // namespace hardy

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/exponents.hpp"
#include "hardy/functionals.hpp"
#include "hardy/spaces.hpp"
#include "hardy/weights.hpp"

namespace hardy {

/// Exponents of the canonical power-scale weight pair: u behaves like
/// rho^alpha1 near the origin and rho^alpha2 far out (break at rho = 1),
/// v is the pure power rho^beta.
struct PowerWeightParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
};

/// One strict inequality of an admissibility test: `value relation 0`.
struct ConditionValue {
  std::string name;
  double value = 0.0;
  char relation = '<';
  bool satisfied = false;
};

struct AdmissibilityVerdict {
  bool admissible = false;
  bool boundary = false;  // some condition within eps of equality
  std::vector<ConditionValue> conditions;
  /// Set when the power-scale analysis does not decide for these parameters
  /// (logarithmic inner cumulative); admissible is false in that case.
  std::optional<std::string> unsupported;
  std::string branch;  // which condition family was applied
};

namespace detail {

inline ConditionValue strict_condition(std::string name, double value,
                                       bool want_negative, double eps) {
  ConditionValue c;
  c.name = std::move(name);
  c.value = value;
  c.relation = want_negative ? '<' : '>';
  c.satisfied = want_negative ? value < -eps : value > eps;
  return c;
}

inline AdmissibilityVerdict assemble_verdict(std::vector<ConditionValue> conds,
                                             std::optional<std::string> unsupported,
                                             std::string branch, double eps) {
  AdmissibilityVerdict v;
  v.conditions = std::move(conds);
  v.branch = std::move(branch);
  v.unsupported = std::move(unsupported);
  v.boundary = std::any_of(v.conditions.begin(), v.conditions.end(),
                           [eps](const ConditionValue& c) {
                             return std::abs(c.value) <= eps;
                           });
  const bool all_ok = std::all_of(v.conditions.begin(), v.conditions.end(),
                                  [](const ConditionValue& c) { return c.satisfied; });
  v.admissible = all_ok && !v.boundary && !v.unsupported.has_value();
  return v;
}

} // namespace detail

/// Power-scale admissibility on a volume-growth-Q homogeneous space: the
/// characterizing integral of the (alpha1, alpha2 | beta) weight pair is
/// finite iff all four strict inequalities hold.
inline AdmissibilityVerdict check_homogeneous(const PowerWeightParams& w, double Q,
                                              const ExponentConfig& e,
                                              double eps = 1e-9) {
  if (!(Q > 0.0) || !std::isfinite(Q))
    throw domain_error("volume growth exponent Q must be positive and finite");
  if (!(eps > 0.0)) throw domain_error("boundary eps must be positive");
  const double bw = w.beta * (1.0 - e.p_conj) + Q;  // conjugate v-exponent + Q
  std::vector<ConditionValue> c;
  c.push_back(detail::strict_condition("C1", w.alpha2 + Q, true, eps));
  c.push_back(detail::strict_condition("C2", bw, false, eps));
  c.push_back(detail::strict_condition(
      "C3", (w.alpha1 + Q) * e.ratio_rq + bw * e.ratio_rpc, false, eps));
  c.push_back(detail::strict_condition(
      "C4", (w.alpha2 + Q) * e.ratio_rq + bw * e.ratio_rpc, true, eps));
  std::optional<std::string> unsupported;
  if (std::abs(w.alpha1 + Q) < eps)
    unsupported = "alpha1 + Q = 0: the inner cumulative is logarithmic and the "
                  "power-scale conditions do not decide";
  return detail::assemble_verdict(std::move(c), std::move(unsupported),
                                  "homogeneous", eps);
}

/// Power-scale admissibility under exponential volume growth (dimension n),
/// for the geometry-adapted weight family sinh(rho)^alpha (plain powers are
/// never integrable against exponential volume). Near the origin the density
/// grows like rho^{n-1}, far out like e^{(n-1)rho}, which is why the tail
/// conditions shift the dimension by one.
inline AdmissibilityVerdict check_hyperbolic(const PowerWeightParams& w, double n,
                                             const ExponentConfig& e,
                                             double eps = 1e-9) {
  if (!(n > 1.0) || !std::isfinite(n))
    throw domain_error("dimension n must exceed 1");
  if (!(eps > 0.0)) throw domain_error("boundary eps must be positive");
  const double bw_head = w.beta * (1.0 - e.p_conj) + n;
  const double bw_tail = w.beta * (1.0 - e.p_conj) + n - 1.0;
  std::vector<ConditionValue> c;
  c.push_back(detail::strict_condition("H1", w.alpha2 + n - 1.0, true, eps));
  c.push_back(detail::strict_condition("H2", bw_head, false, eps));
  c.push_back(detail::strict_condition(
      "H3", (w.alpha1 + n) * e.ratio_rq + bw_head * e.ratio_rpc, false, eps));
  c.push_back(detail::strict_condition(
      "H4", (w.alpha2 + n - 1.0) * e.ratio_rq + bw_tail * e.ratio_rpc, true, eps));
  std::optional<std::string> unsupported;
  if (std::abs(w.alpha1 + n) < eps)
    unsupported = "alpha1 + n = 0: the inner cumulative is logarithmic and the "
                  "power-scale conditions do not decide";
  return detail::assemble_verdict(std::move(c), std::move(unsupported),
                                  "hyperbolic", eps);
}

/// Curvature-selected dispatch: b = 0 is the flat (polynomial-growth) branch
/// with Q = n, b > 0 the exponential-growth branch. The verdict records
/// which family was applied.
inline AdmissibilityVerdict check_cartan_hadamard(const PowerWeightParams& w,
                                                  double n, double b,
                                                  const ExponentConfig& e,
                                                  double eps = 1e-9) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw domain_error("curvature bound b must be nonnegative and finite");
  return b == 0.0 ? check_homogeneous(w, n, e, eps)
                  : check_hyperbolic(w, n, e, eps);
}

/// Model selector used by the scan and cross-validation entry points.
struct Geometry {
  enum class Kind { homogeneous, hyperbolic, cartan_hadamard };
  Kind kind = Kind::homogeneous;
  double dimension = 1.0;  // Q for homogeneous, n otherwise
  double curvature = 0.0;  // b, Cartan-Hadamard only

  static Geometry homogeneous(double Q) { return {Kind::homogeneous, Q, 0.0}; }
  static Geometry hyperbolic(double n) { return {Kind::hyperbolic, n, 0.0}; }
  static Geometry cartan_hadamard(double n, double b) {
    return {Kind::cartan_hadamard, n, b};
  }

  SpaceModel space() const {
    switch (kind) {
      case Kind::homogeneous: return SpaceModel::homogeneous(dimension);
      case Kind::hyperbolic: return SpaceModel::hyperbolic(dimension);
      case Kind::cartan_hadamard:
      default: return SpaceModel::cartan_hadamard(dimension, curvature);
    }
  }
};

inline AdmissibilityVerdict check_admissible(const Geometry& g,
                                             const PowerWeightParams& w,
                                             const ExponentConfig& e,
                                             double eps = 1e-9) {
  switch (g.kind) {
    case Geometry::Kind::homogeneous: return check_homogeneous(w, g.dimension, e, eps);
    case Geometry::Kind::hyperbolic: return check_hyperbolic(w, g.dimension, e, eps);
    case Geometry::Kind::cartan_hadamard:
    default: return check_cartan_hadamard(w, g.dimension, g.curvature, e, eps);
  }
}

/// One swept parameter of a region scan.
struct ScanAxis {
  std::string parameter;  // "alpha1", "alpha2" or "beta"
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
};

struct ScanRow {
  double param1 = std::numeric_limits<double>::quiet_NaN();
  double param2 = std::numeric_limits<double>::quiet_NaN();  // NaN: single-axis scan
  AdmissibilityVerdict verdict;
};

namespace detail {

inline void apply_scan_parameter(PowerWeightParams& w, const std::string& name,
                                 double value) {
  if (name == "alpha1") w.alpha1 = value;
  else if (name == "alpha2") w.alpha2 = value;
  else if (name == "beta") w.beta = value;
  else throw domain_error("unknown scan parameter '" + name +
                          "' (expected alpha1, alpha2 or beta)");
}

inline std::vector<double> axis_values(const ScanAxis& a) {
  if (!(a.step > 0.0)) throw domain_error("scan step must be positive");
  if (!(a.to >= a.from)) throw domain_error("scan range must satisfy to >= from");
  const auto count =
      static_cast<std::size_t>(std::floor((a.to - a.from) / a.step + 0.5)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = a.from + static_cast<double>(i) * a.step;
  return out;
}

} // namespace detail

/// Sweeps one or two weight parameters over regular grids and records the
/// verdict at every node. Rows come out in lexicographic sweep order
/// (axis1 major) regardless of the thread count.
inline std::vector<ScanRow> region_scan(const Geometry& g,
                                        const PowerWeightParams& base,
                                        const ScanAxis& axis1,
                                        const std::optional<ScanAxis>& axis2,
                                        const ExponentConfig& e, int threads = 1,
                                        double eps = 1e-9) {
  const std::vector<double> v1 = detail::axis_values(axis1);
  const std::vector<double> v2 =
      axis2 ? detail::axis_values(*axis2) : std::vector<double>{};
  {
    // reject unknown parameter names before any worker starts; a throw from
    // inside a thread would terminate instead of propagating
    PowerWeightParams probe = base;
    detail::apply_scan_parameter(probe, axis1.parameter, axis1.from);
    if (axis2) detail::apply_scan_parameter(probe, axis2->parameter, axis2->from);
  }
  const std::size_t inner = axis2 ? v2.size() : 1;
  std::vector<ScanRow> rows(v1.size() * inner);

  auto fill = [&](std::size_t idx) {
    PowerWeightParams w = base;
    const std::size_t i = idx / inner, j = idx % inner;
    ScanRow& row = rows[idx];
    row.param1 = v1[i];
    detail::apply_scan_parameter(w, axis1.parameter, v1[i]);
    if (axis2) {
      row.param2 = v2[j];
      detail::apply_scan_parameter(w, axis2->parameter, v2[j]);
    }
    row.verdict = check_admissible(g, w, e, eps);
  };

  const std::size_t total = rows.size();
  const auto workers = static_cast<std::size_t>(std::clamp<int>(threads, 1, 64));
  if (workers <= 1 || total <= 1) {
    for (std::size_t idx = 0; idx < total; ++idx) fill(idx);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t idx = t; idx < total; idx += workers) fill(idx);
      });
    for (auto& th : pool) th.join();
  }
  return rows;
}

struct CrossValidation {
  AdmissibilityVerdict symbolic;
  FinitenessVerdict numeric;
  /// Empty when either side abstains (unsupported parameters or an
  /// indeterminate numeric verdict); otherwise whether the strict-inequality
  /// test and the quadrature-based classification reach the same conclusion.
  std::optional<bool> agree;
};

/// Runs the symbolic admissibility test and the independent numeric
/// classification of the characterizing integral for the same parameters.
/// The weight pair is geometry-adapted: plain (piecewise) powers of rho on
/// the polynomial-growth branch, the same exponents on sinh(scale * rho)
/// under exponential growth — the family the strict-inequality conditions
/// describe.
inline CrossValidation cross_validate(const PowerWeightParams& w, const Geometry& g,
                                      const ExponentConfig& e,
                                      const FunctionalOptions& opt = {},
                                      double eps = 1e-9) {
  CrossValidation out;
  out.symbolic = check_admissible(g, w, e, eps);
  const bool flat = g.kind == Geometry::Kind::homogeneous ||
                    (g.kind == Geometry::Kind::cartan_hadamard && g.curvature == 0.0);
  const double s =
      g.kind == Geometry::Kind::hyperbolic ? 1.0 : std::sqrt(g.curvature);
  const RadialWeight u =
      flat ? RadialWeight::piecewise_power(w.alpha1, w.alpha2)
           : RadialWeight::sinh_piecewise_power(w.alpha1, w.alpha2, s);
  const RadialWeight v =
      flat ? RadialWeight::power(w.beta) : RadialWeight::sinh_power(w.beta, s);
  out.numeric = compute_A2(u, v, e, g.space(), opt);
  if (!out.symbolic.unsupported.has_value() &&
      out.numeric.kind != FinitenessClass::indeterminate)
    out.agree = out.symbolic.admissible == out.numeric.finite();
  return out;
}

} // namespace hardy

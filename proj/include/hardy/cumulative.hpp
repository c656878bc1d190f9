#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/math.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/spaces.hpp"

namespace hardy {

/// Running integral of a positive density, queryable at arbitrary points of
/// [t_min, t_max]. Panels live on a fixed log-spaced grid; a query combines
/// the precomputed prefix (or suffix) sum with a freshly integrated partial
/// panel, so no interpolation error enters — every value is a quadrature
/// result in its own right. All storage is logarithmic: suffix integrals on
/// sinh-type spaces underflow any linear representation long before the grid
/// ends.
///
/// from_zero:    log_at(t) = log of the integral over (0, t]
/// to_infinity:  log_at(t) = log of the integral over [t, inf)
///
/// The open end (0 or inf) is resolved by extending unit blocks in log rho
/// until negligible; if the density grows there instead, construction throws
/// precondition_error. Instances are not safe for concurrent use: queries
/// share one evaluation counter.
class CumulativeGrid {
public:
  enum class Direction { from_zero, to_infinity };

  CumulativeGrid(LogIntegrand density, Direction dir, double t_min, double t_max,
                 TailFamily family, double rate_scale, QuadOptions opts = {})
      : density_(std::move(density)), dir_(dir), t_min_(t_min), t_max_(t_max),
        engine_(density_, 4 * opts.max_evaluations) {
    if (!(t_min > 0.0) || !(t_max > t_min))
      throw domain_error("cumulative grid needs 0 < t_min < t_max");
    if (!(rate_scale > 0.0)) throw domain_error("rate scale must be positive");
    build_edges(family, rate_scale);
    integrate_panels();
    resolve_boundary();
    accumulate();
    if (engine_.evaluations() > opts.max_evaluations)
      throw evaluation_error("cumulative grid exceeded its evaluation budget",
                             t_max_);
  }

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  std::int64_t evaluations() const { return engine_.evaluations(); }

  /// Log of unresolved mass beyond the open end; folds into error budgets.
  double log_boundary_remainder() const { return log_boundary_rem_; }
  bool boundary_resolved() const { return boundary_resolved_; }

  /// Relative noise carried by query results, for integrands built on top of
  /// this grid: the per-panel resolve accuracy, floored at the accumulation
  /// noise of a clean build.
  double log_value_noise() const {
    return std::max(-25.33, density_.log_noise() + kLn10);  // -25.33 = log(1e-11)
  }

  double log_at(double t) const {
    if (t < t_min_ * (1.0 - 1e-9) || t > t_max_ * (1.0 + 1e-9))
      throw extrapolation_error("cumulative query outside the grid range");
    const double x = std::clamp(std::log(t), xedges_.front(), xedges_.back());
    const auto it = std::upper_bound(xedges_.begin(), xedges_.end(), x);
    std::size_t i = it == xedges_.begin()
                        ? 0
                        : static_cast<std::size_t>(it - xedges_.begin()) - 1;
    i = std::min(i, xedges_.size() - 2);
    if (dir_ == Direction::from_zero)
      return log_add_exp(cum_[i], partial(xedges_[i], x));
    return log_add_exp(cum_[i + 1], partial(x, xedges_[i + 1]));
  }

  double at(double t) const { return exp_or_zero(log_at(t)); }

private:
  void build_edges(TailFamily family, double rate_scale) {
    const double x0 = std::log(t_min_), x1 = std::log(t_max_);
    double x = x0;
    xedges_.push_back(x0);
    while (x < x1) {
      // Exponential-family panels are sized to ~1.5 units of scale*rho so a
      // decay rate of a few per unit never packs more e-folds into one panel
      // than a 15-point rule resolves cleanly.
      double h = 0.25;
      if (family == TailFamily::exponential)
        h = std::min(h, std::max(1.5 / (rate_scale * std::exp(x)), 5e-4));
      x += h;
      xedges_.push_back(std::min(x, x1));
    }
    for (double b : density_.breakpoints())
      if (b > t_min_ && b < t_max_) xedges_.push_back(std::log(b));
    std::sort(xedges_.begin(), xedges_.end());
    xedges_.erase(std::unique(xedges_.begin(), xedges_.end(),
                              [](double a, double b) { return b - a < 1e-12; }),
                  xedges_.end());
    if (xedges_.back() < x1) xedges_.push_back(x1);
  }

  void integrate_panels() {
    panel_log_.resize(xedges_.size() - 1, kNegInf);
    for (std::size_t i = 0; i + 1 < xedges_.size(); ++i)
      panel_log_[i] = resolve(xedges_[i], xedges_[i + 1]);
  }

  // refine a span until it is accurate to ~1e-13 of itself, or to ten times
  // the integrand's own noise floor when that is the binding constraint
  double resolve(double xa, double xb) const {
    if (xb - xa < 1e-13) return kNegInf;
    const auto coarse = engine_.gk15(xa, xb);
    if (coarse.log_value == kNegInf && coarse.log_err == kNegInf) return kNegInf;
    const double rel = std::max(std::log(5e-14), density_.log_noise() + kLn10);
    double v = kNegInf, e = kNegInf;
    engine_.refine(xa, xb, coarse.log_value + rel, 0, v, e);
    return v;
  }

  void resolve_boundary() {
    const bool head = dir_ == Direction::from_zero;
    const double start = head ? xedges_.front() : xedges_.back();
    const auto ext = detail::extend(engine_, start, head ? -1.0 : +1.0,
                                    head ? -700.0 : 700.0, kNegInf);
    if (ext.diverging)
      throw precondition_error(
          head ? "integrability near zero" : "integrability at infinity",
          "cumulative density has non-vanishing partial sums beyond the grid");
    double total = kNegInf;
    for (double b : ext.block_values) total = log_add_exp(total, b);
    log_boundary_ = total;
    log_boundary_rem_ = ext.log_remainder;
    boundary_resolved_ = !ext.truncated;
  }

  void accumulate() {
    const std::size_t n = panel_log_.size();
    cum_.resize(n + 1, kNegInf);
    if (dir_ == Direction::from_zero) {
      cum_[0] = log_boundary_;
      for (std::size_t i = 0; i < n; ++i)
        cum_[i + 1] = log_add_exp(cum_[i], panel_log_[i]);
    } else {
      cum_[n] = log_boundary_;
      for (std::size_t i = n; i-- > 0;)
        cum_[i] = log_add_exp(cum_[i + 1], panel_log_[i]);
    }
  }

  double partial(double xa, double xb) const { return resolve(xa, xb); }

  LogIntegrand density_;
  Direction dir_;
  double t_min_, t_max_;
  std::vector<double> xedges_;
  std::vector<double> panel_log_;
  std::vector<double> cum_;
  double log_boundary_ = kNegInf;
  double log_boundary_rem_ = kNegInf;
  bool boundary_resolved_ = true;
  mutable detail::PanelEngine engine_;
};

/// Grid reach on the open side: far enough that everything beyond is dwarfed
/// by double precision for any exponent at least the classification margin
/// away from critical.
inline double cumulative_reach(TailFamily family, double rate_scale) {
  return family == TailFamily::exponential ? 3200.0 / rate_scale : 1e12;
}

} // namespace hardy

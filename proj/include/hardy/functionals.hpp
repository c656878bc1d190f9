#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hardy/cumulative.hpp"
#include "hardy/errors.hpp"
#include "hardy/exponents.hpp"
#include "hardy/math.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/spaces.hpp"
#include "hardy/weights.hpp"

namespace hardy {

struct FunctionalOptions {
  QuadOptions quad{};
  ClassifyOptions classify{};
  /// Inner truncation radius of windowed outer integrals; the unresolved
  /// head below it is estimated from the fitted exponent and charged to
  /// abs_err, never silently dropped.
  double epsilon = 1e-10;
  /// Relative slack for the two-sided constant-bracket check.
  double sandwich_tol = 1e-3;
  /// Relative slack for one-sided inequality checks.
  double bound_tol = 1e-6;
};

namespace detail {
struct Pipeline;
}

/// Nonnegative radial test function, presented through its logarithm.
/// The nondecreasing flag is declarative: monotone checks require it and
/// reject functions without it rather than probing numerically.
class TestFunction {
public:
  /// rho^exponent on (0, cutoff], zero beyond.
  static TestFunction power_bump(double exponent, double cutoff) {
    if (!(cutoff > 0.0)) throw domain_error("power_bump cutoff must be positive");
    return TestFunction(
        "power_bump",
        [exponent, cutoff](double rho) {
          return rho <= cutoff ? exponent * std::log(rho) : kNegInf;
        },
        false, {cutoff});
  }

  static TestFunction constant(double value) {
    if (!(value > 0.0)) throw domain_error("constant test function must be positive");
    const double lv = std::log(value);
    return TestFunction("constant", [lv](double) { return lv; }, true, {});
  }

  static TestFunction exp_decay(double rate) {
    if (!(rate > 0.0)) throw domain_error("exp_decay rate must be positive");
    return TestFunction("exp_decay", [rate](double rho) { return -rate * rho; },
                        false, {});
  }

  /// min(rho, cap)^exponent; nondecreasing whenever exponent >= 0.
  static TestFunction capped_power(double exponent, double cap_radius) {
    if (!(cap_radius > 0.0)) throw domain_error("capped_power cap must be positive");
    return TestFunction(
        "capped_power",
        [exponent, cap_radius](double rho) {
          return exponent * std::log(std::min(rho, cap_radius));
        },
        exponent >= 0.0, {cap_radius});
  }

  static TestFunction custom(std::function<double(double)> log_value,
                             bool nondecreasing = false,
                             std::vector<double> breakpoints = {}) {
    if (!log_value) throw domain_error("custom test function needs a callable");
    return TestFunction("custom", std::move(log_value), nondecreasing,
                        std::move(breakpoints));
  }

  double log_at(double rho) const {
    const double v = log_scale_ + log_fn_(rho);
    if (std::isnan(v)) throw evaluation_error("test function returned NaN", rho);
    return v;
  }

  double at(double rho) const { return exp_or_zero(log_at(rho)); }
  bool nondecreasing() const { return nondecreasing_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& kind() const { return kind_; }

  /// Relative noise floor of the values (log scale); kNegInf for closed-form
  /// functions, finite for functions assembled from quadrature results.
  double log_noise() const { return log_noise_; }

  /// The same function multiplied by factor > 0 (a log-space shift).
  TestFunction scaled(double factor) const {
    if (!(factor > 0.0)) throw domain_error("scale factor must be positive");
    TestFunction out = *this;
    out.log_scale_ += std::log(factor);
    return out;
  }

private:
  TestFunction(std::string kind, std::function<double(double)> fn, bool mono,
               std::vector<double> breaks)
      : kind_(std::move(kind)), log_fn_(std::move(fn)), nondecreasing_(mono),
        breakpoints_(std::move(breaks)) {
    std::sort(breakpoints_.begin(), breakpoints_.end());
  }

  friend TestFunction detail_named_test_function(std::string,
                                                 std::function<double(double)>,
                                                 bool, std::vector<double>, double);

  std::string kind_;
  std::function<double(double)> log_fn_;
  bool nondecreasing_ = false;
  std::vector<double> breakpoints_;
  double log_scale_ = 0.0;
  double log_noise_ = kNegInf;
};

inline TestFunction detail_named_test_function(std::string kind,
                                               std::function<double(double)> fn,
                                               bool mono,
                                               std::vector<double> breaks,
                                               double log_noise = kNegInf) {
  TestFunction out(std::move(kind), std::move(fn), mono, std::move(breaks));
  out.log_noise_ = log_noise;
  return out;
}

namespace detail {

inline std::vector<double> merge_breaks(
    std::initializer_list<std::vector<double>> lists) {
  std::vector<double> out;
  for (const auto& l : lists) out.insert(out.end(), l.begin(), l.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return b - a < 1e-12 * std::max(1.0, a); }),
            out.end());
  return out;
}

/// c * lg with the 0 * (-inf) = 0 convention: a factor raised to the zeroth
/// power is identically one and contributes nothing.
inline double powterm(double c, double lg) { return c == 0.0 ? 0.0 : c * lg; }

inline LogIntegrand weight_density(const SpaceModel& space, const RadialWeight& w,
                                   double power) {
  auto breaks = merge_breaks({space.breakpoints(), w.breakpoints()});
  return LogIntegrand(
      [space, w, power](double rho) {
        return powterm(power, w.log_value(rho)) + space.log_radial_density(rho);
      },
      std::move(breaks));
}

/// Shared evaluation context: the two weight densities, their lazily built
/// cumulative grids, and the classification fits that gate them. One
/// pipeline serves A2, A1, the residual, and any number of Hardy ratios for
/// the same (space, u, v, exponents) so the grids are built once.
struct Pipeline {
  SpaceModel space;
  RadialWeight u, v;
  ExponentConfig expo;
  FunctionalOptions opt;
  TailFamily family;
  double scale;
  double t_lo = 1e-10;
  double reach;
  LogIntegrand density_u;  // u * lambda1
  LogIntegrand density_v;  // v^{1-p'} * lambda1
  std::shared_ptr<CumulativeGrid> grid_u, grid_v;
  SideFit tail_u_fit, head_v_fit;
  bool fits_ready = false;

  Pipeline(const SpaceModel& s, const RadialWeight& uu, const RadialWeight& vv,
           const ExponentConfig& ee, const FunctionalOptions& oo)
      : space(s), u(uu), v(vv), expo(ee), opt(oo), family(s.tail_family()),
        scale(s.rate_scale()), reach(cumulative_reach(family, scale)),
        density_u(weight_density(s, uu, 1.0)),
        density_v(weight_density(s, vv, 1.0 - ee.p_conj)) {}

  void run_fits() {
    if (fits_ready) return;
    tail_u_fit = assess_tail(density_u, family, scale, opt.classify);
    head_v_fit = assess_head(density_v, opt.classify);
    fits_ready = true;
  }

  // Builds both cumulative grids; throws when the weight hypotheses cannot
  // be certified (grids over a divergent side would be meaningless).
  void ensure_grids() {
    run_fits();
    using S = SideFit::State;
    if (tail_u_fit.state == S::divergent)
      throw precondition_error(
          "DivergentU", "the u-weight mass beyond a radius does not converge");
    if (tail_u_fit.state == S::indeterminate)
      throw precondition_error(
          "DivergentU",
          "the u-weight tail is numerically indistinguishable from critical");
    if (head_v_fit.state == S::divergent)
      throw precondition_error(
          "DivergentV",
          "the conjugate v-density is not locally integrable at the origin");
    if (head_v_fit.state == S::indeterminate)
      throw precondition_error(
          "DivergentV",
          "the conjugate v-density is numerically indistinguishable from critical near zero");
    if (!grid_u)
      grid_u = std::make_shared<CumulativeGrid>(
          density_u, CumulativeGrid::Direction::to_infinity, t_lo, reach, family,
          scale, opt.quad);
    if (!grid_v)
      grid_v = std::make_shared<CumulativeGrid>(
          density_v, CumulativeGrid::Direction::from_zero, t_lo, reach, family,
          scale, opt.quad);
  }

  double clamp_t(double t) const { return std::clamp(t, t_lo, reach); }
};

/// Windowed improper integral: integrate over [eps, reach] and charge the
/// analytic estimate of the mass outside the window to the error bar (the
/// value itself stays a pure quadrature result).
struct Windowed {
  QuadResult raw;
  double log_err = kNegInf;
};

inline Windowed integrate_windowed(const LogIntegrand& g, double eps, double reach,
                                   const QuadOptions& q, const SideFit& head,
                                   const SideFit& tail, TailFamily family,
                                   double scale) {
  Windowed w;
  w.raw = integrate(g, eps, reach, q);
  w.log_err = w.raw.abs_err > 0.0 ? std::log(w.raw.abs_err) : kNegInf;
  if (head.state == SideFit::State::fine)
    w.log_err = log_add_exp(
        w.log_err, g.log_at(eps) + std::log(eps) - std::log(head.fitted + 1.0));
  if (tail.state == SideFit::State::fine) {
    // The fit on a power-family space may itself be exponential (decay faster
    // than any power); the remainder must follow the fitted law, not the space.
    const double rem =
        tail.exponential
            ? g.log_at(reach) - std::log(scale * -tail.fitted)
            : g.log_at(reach) + std::log(reach) - std::log(-1.0 - tail.fitted);
    w.log_err = log_add_exp(w.log_err, rem);
  }
  return w;
}

inline bool meets_tolerance(const QuadOptions& q, double log_value, double log_err) {
  if (log_err == kNegInf) return true;
  const double la = q.abs_tol > 0.0 ? std::log(q.abs_tol) : kNegInf;
  const double lr =
      q.rel_tol > 0.0 && log_value != kNegInf ? std::log(q.rel_tol) + log_value : kNegInf;
  return log_err <= std::max(la, lr) + 1e-9;
}

/// I^{1/root} with first-order error propagation.
inline QuadResult take_root(const Windowed& w, double root, const QuadOptions& q,
                            bool extra_ok = true) {
  QuadResult res;
  res.log_value = w.raw.log_value == kNegInf ? kNegInf : w.raw.log_value / root;
  res.value = exp_or_zero(res.log_value);
  const double rel =
      w.raw.log_value == kNegInf || w.raw.log_value == kPosInf
          ? 0.0
          : exp_or_zero(w.log_err - w.raw.log_value);
  res.abs_err = res.value * rel / root;
  res.evaluations = w.raw.evaluations;
  res.converged =
      w.raw.converged && extra_ok && meets_tolerance(q, w.raw.log_value, w.log_err);
  return res;
}

enum class WhichFunctional { a2, a1 };

// Quadrature options whose relative target stays honestly achievable for an
// integrand carrying a declared noise floor: certification never asks the
// panels for more reproducibility than their inputs provide.
inline QuadOptions noise_aware(QuadOptions q, const LogIntegrand& g) {
  const double fl = g.log_noise() + kLn10 + 2.0 * kLn2;  // 4x the refine floor
  if (fl > std::log(q.rel_tol)) q.rel_tol = std::exp(fl);
  return q;
}

inline LogIntegrand outer_integrand(const std::shared_ptr<Pipeline>& pl,
                                    WhichFunctional which) {
  const auto gu = pl->grid_u;
  const auto gv = pl->grid_v;
  // A2: U~^{r/p} V~^{r/p'} u lambda1;  A1: U~^{r/q} V~^{r(1-1/q)} v^{1-p'} lambda1
  const double cu =
      which == WhichFunctional::a2 ? pl->expo.ratio_rp : pl->expo.ratio_rq;
  const double cv =
      which == WhichFunctional::a2 ? pl->expo.ratio_rpc : pl->expo.ratio_rqc;
  const LogIntegrand base =
      which == WhichFunctional::a2 ? pl->density_u : pl->density_v;
  auto breaks = merge_breaks({pl->density_u.breakpoints(), pl->density_v.breakpoints()});
  LogIntegrand out(
      [gu, gv, cu, cv, base](double t) {
        return powterm(cu, gu->log_at(t)) + powterm(cv, gv->log_at(t)) +
               base.log_at(t);
      },
      std::move(breaks));
  out.set_log_noise(std::max(gu->log_value_noise(), gv->log_value_noise()) + kLn10);
  return out;
}

inline FinitenessVerdict characterize(const std::shared_ptr<Pipeline>& pl,
                                      WhichFunctional which) {
  FinitenessVerdict out;
  pl->run_fits();
  using S = SideFit::State;
  if (pl->tail_u_fit.state == S::divergent || pl->tail_u_fit.state == S::indeterminate) {
    out.kind = pl->tail_u_fit.state == S::divergent
                   ? FinitenessClass::divergent_at_infinity
                   : FinitenessClass::indeterminate;
    out.origin = DivergenceOrigin::weight_u;
    out.fitted_rate = pl->tail_u_fit.fitted;
    out.detail = "the u-weight mass beyond a radius does not converge";
    return out;
  }
  if (pl->head_v_fit.state == S::divergent || pl->head_v_fit.state == S::indeterminate) {
    out.kind = pl->head_v_fit.state == S::divergent
                   ? FinitenessClass::divergent_near_zero
                   : FinitenessClass::indeterminate;
    out.origin = DivergenceOrigin::weight_v;
    out.fitted_exponent = pl->head_v_fit.fitted;
    out.detail = "the conjugate v-density is not locally integrable at the origin";
    return out;
  }
  pl->ensure_grids();
  const LogIntegrand g = outer_integrand(pl, which);
  const SideFit gh = assess_head(g, pl->opt.classify);
  if (gh.state == S::divergent || gh.state == S::indeterminate) {
    out.kind = gh.state == S::divergent ? FinitenessClass::divergent_near_zero
                                        : FinitenessClass::indeterminate;
    out.origin = DivergenceOrigin::outer;
    out.fitted_exponent = gh.fitted;
    out.detail = "characterizing integrand is critical near the origin";
    return out;
  }
  const SideFit gt = assess_tail(g, pl->family, pl->scale, pl->opt.classify);
  if (gt.state == S::divergent || gt.state == S::indeterminate) {
    out.kind = gt.state == S::divergent ? FinitenessClass::divergent_at_infinity
                                        : FinitenessClass::indeterminate;
    out.origin = DivergenceOrigin::outer;
    out.fitted_rate = gt.fitted;
    out.detail = "characterizing integrand is critical at infinity";
    return out;
  }
  out.fitted_exponent = gh.fitted;
  out.fitted_rate = gt.fitted;
  const double eps = std::clamp(pl->opt.epsilon, pl->t_lo, 1.0);
  const QuadOptions qn = noise_aware(pl->opt.quad, g);
  const Windowed w =
      integrate_windowed(g, eps, pl->reach, qn, gh, gt, pl->family, pl->scale);
  const bool grids_ok =
      pl->grid_u->boundary_resolved() && pl->grid_v->boundary_resolved();
  QuadResult res = take_root(w, pl->expo.r, qn, grids_ok);
  res.evaluations += pl->grid_u->evaluations() + pl->grid_v->evaluations();
  out.kind = FinitenessClass::finite;
  out.integral = res;
  return out;
}

inline double residual_between(const FinitenessVerdict& a2,
                               const FinitenessVerdict& a1,
                               const ExponentConfig& e) {
  const double l2 = e.r * a2.integral->log_value;
  const double l1 = std::log(e.q / e.p_conj) + e.r * a1.integral->log_value;
  return std::abs(std::expm1(l1 - l2));
}

inline TestFunction near_extremal_from(const std::shared_ptr<Pipeline>& pl) {
  pl->ensure_grids();
  const auto gu = pl->grid_u;
  const auto gv = pl->grid_v;
  const double eu = pl->expo.ratio_rp / pl->expo.q;   // r/(p q)
  const double ev = pl->expo.ratio_rqc / pl->expo.p;  // r (1 - 1/q) / p
  const double pw = 1.0 - pl->expo.p_conj;
  const RadialWeight vv = pl->v;
  const double t_lo = pl->t_lo, reach = pl->reach;
  auto breaks = merge_breaks(
      {pl->density_u.breakpoints(), pl->density_v.breakpoints(), {reach}});
  // Below the grid window the cumulative factors are frozen at the window
  // edge, and beyond it the witness is cut off entirely: a compactly
  // supported modification changes the two sides only by the negligible
  // window remainders and keeps every improper integral honest.
  return detail_named_test_function(
      "near_extremal",
      [gu, gv, eu, ev, pw, vv, t_lo, reach](double rho) {
        if (rho > reach) return kNegInf;
        const double t = std::max(rho, t_lo);
        return powterm(eu, gu->log_at(t)) + powterm(ev, gv->log_at(t)) +
               powterm(pw, vv.log_value(rho));
      },
      false, std::move(breaks),
      std::max(gu->log_value_noise(), gv->log_value_noise()) + kLn10);
}

struct RatioSides {
  double ratio = std::numeric_limits<double>::quiet_NaN();
  QuadResult lhs, rhs;
};

inline RatioSides hardy_ratio_sides(const std::shared_ptr<Pipeline>& pl,
                                    const TestFunction& f) {
  using S = SideFit::State;
  // pure relative tolerances: scaling f shifts every log uniformly, so the
  // panel decisions and hence the ratio are scale-invariant
  QuadOptions q = pl->opt.quad;
  q.abs_tol = 0.0;
  const SpaceModel space = pl->space;
  const RadialWeight vv = pl->v;
  const double p = pl->expo.p, qq = pl->expo.q;

  LogIntegrand rhs_f(
      [f, vv, space, p](double rho) {
        return p * f.log_at(rho) + vv.log_value(rho) + space.log_radial_density(rho);
      },
      merge_breaks({f.breakpoints(), vv.breakpoints(), space.breakpoints()}));
  rhs_f.set_log_noise(f.log_noise() + kLn10);
  const SideFit rh = assess_head(rhs_f, pl->opt.classify);
  if (rh.state == S::divergent || rh.state == S::indeterminate)
    throw precondition_error("finite p-energy",
                             "the p-energy of the test function is critical near the origin");
  const SideFit rt = assess_tail(rhs_f, pl->family, pl->scale, pl->opt.classify);
  if (rt.state == S::divergent || rt.state == S::indeterminate)
    throw precondition_error("finite p-energy",
                             "the p-energy of the test function is critical at infinity");
  const QuadOptions qr = noise_aware(q, rhs_f);
  Windowed wr{integrate(rhs_f, 0.0, kPosInf, qr), kNegInf};
  wr.log_err = wr.raw.abs_err > 0.0 ? std::log(wr.raw.abs_err) : kNegInf;

  if (wr.raw.log_value == kNegInf)
    throw precondition_error("nonzero p-energy",
                             "the test function vanishes almost everywhere");

  LogIntegrand f_density(
      [f, space](double rho) { return f.log_at(rho) + space.log_radial_density(rho); },
      merge_breaks({f.breakpoints(), space.breakpoints()}));
  f_density.set_log_noise(f.log_noise());
  const SideFit fh = assess_head(f_density, pl->opt.classify);
  if (fh.state == S::divergent || fh.state == S::indeterminate)
    throw precondition_error("locally integrable test function",
                             "the ball averages of the test function are critical near the origin");
  auto f_grid = std::make_shared<CumulativeGrid>(
      f_density, CumulativeGrid::Direction::from_zero, pl->t_lo, pl->reach,
      pl->family, pl->scale, q);

  const LogIntegrand du = pl->density_u;
  const double t_lo = pl->t_lo, reach = pl->reach;
  LogIntegrand lhs_f(
      [f_grid, du, qq, t_lo, reach](double t) {
        return qq * f_grid->log_at(std::clamp(t, t_lo, reach)) + du.log_at(t);
      },
      merge_breaks({du.breakpoints(), f_density.breakpoints()}));
  lhs_f.set_log_noise(f_grid->log_value_noise() + kLn10);
  const SideFit lh = assess_head(lhs_f, pl->opt.classify);
  if (lh.state == S::divergent || lh.state == S::indeterminate)
    throw precondition_error("finite averaged side",
                             "the averaged side is critical near the origin");
  const SideFit lt = assess_tail(lhs_f, pl->family, pl->scale, pl->opt.classify);
  if (lt.state == S::divergent || lt.state == S::indeterminate)
    throw precondition_error("finite averaged side",
                             "the averaged side is critical at infinity");
  const double eps = std::clamp(pl->opt.epsilon, pl->t_lo, 1.0);
  const QuadOptions ql = noise_aware(q, lhs_f);
  const Windowed wl =
      integrate_windowed(lhs_f, eps, reach, ql, lh, lt, pl->family, pl->scale);

  RatioSides out;
  out.lhs = take_root(wl, qq, ql, f_grid->boundary_resolved());
  out.rhs = take_root(wr, p, qr);
  out.ratio = std::exp(wl.raw.log_value / qq - wr.raw.log_value / p);
  return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

/// Integral of u * lambda1 over [t, inf): the mass of the u-weight beyond
/// radius t. Nonincreasing in t.
inline double cumulative_U(const RadialWeight& u_weight, const SpaceModel& space,
                           double t, const FunctionalOptions& opt = {}) {
  if (!(t > 0.0)) throw domain_error("cumulative_U needs t > 0");
  const LogIntegrand dens = detail::weight_density(space, u_weight, 1.0);
  const auto fit = detail::assess_tail(dens, space.tail_family(), space.rate_scale(),
                                       opt.classify);
  using S = detail::SideFit::State;
  if (fit.state == S::divergent)
    throw precondition_error("DivergentU",
                             "the u-weight is not integrable at infinity");
  if (fit.state == S::indeterminate)
    throw precondition_error(
        "DivergentU", "the u-weight tail is numerically indistinguishable from critical");
  const QuadResult res = integrate(dens, t, kPosInf, opt.quad);
  if (!res.converged)
    throw evaluation_error("cumulative u-integral did not converge", t);
  return res.value;
}

/// Integral of v^{1-p'} * lambda1 over (0, t]: the conjugate local mass of
/// the v-weight. Nondecreasing in t. The first parameter is accepted for
/// signature uniformity with the paired operation and is not used.
inline double cumulative_V(const RadialWeight& /*u_weight*/,
                           const RadialWeight& v_weight, const ExponentConfig& e,
                           const SpaceModel& space, double t,
                           const FunctionalOptions& opt = {}) {
  if (!(t > 0.0)) throw domain_error("cumulative_V needs t > 0");
  const LogIntegrand dens = detail::weight_density(space, v_weight, 1.0 - e.p_conj);
  const auto fit = detail::assess_head(dens, opt.classify);
  using S = detail::SideFit::State;
  if (fit.state == S::divergent)
    throw precondition_error("DivergentV",
                             "the conjugate v-density is not locally integrable at the origin");
  if (fit.state == S::indeterminate)
    throw precondition_error(
        "DivergentV",
        "the conjugate v-density is numerically indistinguishable from critical near zero");
  const QuadResult res = integrate(dens, 0.0, t, opt.quad);
  if (!res.converged)
    throw evaluation_error("cumulative v-integral did not converge", t);
  return res.value;
}

/// The mixed characterizing integral A2 = (int U~^{r/p} V~^{r/p'} u lambda1)^{1/r}.
/// Finite verdicts carry the value (already raised to 1/r); divergent ones
/// carry the side, the fitted exponent or rate, and whether the divergence
/// came from a weight hypothesis or from the outer integrand itself.
inline FinitenessVerdict compute_A2(const RadialWeight& u_weight,
                                    const RadialWeight& v_weight,
                                    const ExponentConfig& e, const SpaceModel& space,
                                    const FunctionalOptions& opt = {}) {
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  return detail::characterize(pl, detail::WhichFunctional::a2);
}

/// The companion integral A1 = (int U~^{r/q} V~^{r(1-1/q)} v^{1-p'} lambda1)^{1/r}.
inline FinitenessVerdict compute_A1(const RadialWeight& u_weight,
                                    const RadialWeight& v_weight,
                                    const ExponentConfig& e, const SpaceModel& space,
                                    const FunctionalOptions& opt = {}) {
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  return detail::characterize(pl, detail::WhichFunctional::a1);
}

/// |A2^r - (q/p') A1^r| / A2^r, computed in log space from one shared
/// pipeline. The two integrals are fully independent quadratures, so a small
/// residual is a genuine cross-check of the integration-by-parts identity.
inline double lemma1_residual(const RadialWeight& u_weight,
                              const RadialWeight& v_weight, const ExponentConfig& e,
                              const SpaceModel& space,
                              const FunctionalOptions& opt = {}) {
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  const FinitenessVerdict a2 = detail::characterize(pl, detail::WhichFunctional::a2);
  if (!a2.finite())
    throw precondition_error("finite A2", a2.detail);
  const FinitenessVerdict a1 = detail::characterize(pl, detail::WhichFunctional::a1);
  if (!a1.finite())
    throw precondition_error("finite A1", a1.detail);
  return detail::residual_between(a2, a1, e);
}

/// The witness from the lower-bound argument:
/// f = U~^{r/(pq)} V~^{r(1-1/q)/p} v^{1-p'}.
inline TestFunction build_near_extremal(const RadialWeight& u_weight,
                                        const RadialWeight& v_weight,
                                        const ExponentConfig& e,
                                        const SpaceModel& space,
                                        const FunctionalOptions& opt = {}) {
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  return detail::near_extremal_from(pl);
}

/// LHS/RHS of the inequality for one test function, in polar form:
/// LHS = (int (int_0^t lambda1 f)^q u lambda1 dt)^{1/q}, RHS = (int f^p v lambda1)^{1/p}.
inline double hardy_ratio(const TestFunction& f, const RadialWeight& u_weight,
                          const RadialWeight& v_weight, const ExponentConfig& e,
                          const SpaceModel& space, const FunctionalOptions& opt = {}) {
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  return detail::hardy_ratio_sides(pl, f).ratio;
}

/// Everything the two-sided constant check produces in one pass.
struct HardyReport {
  ExponentConfig exponents{};
  ConstantBracket bracket{};
  FinitenessVerdict a2{}, a1{};
  double lemma1_residual = std::numeric_limits<double>::quiet_NaN();
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double upper_bound = std::numeric_limits<double>::quiet_NaN();
  double c_near_extremal = std::numeric_limits<double>::quiet_NaN();
  bool applicable = false;  // A2 and A1 both finite
  bool sandwich_ok = false;
  double tol = 1e-3;
  double wall_seconds = 0.0;
};

/// Computes A2, A1, the identity residual, the constant bracket
/// [lower_factor*A2, upper_factor*A2], and the Hardy ratio of the built-in
/// witness; sandwich_ok iff that ratio lies inside the bracket within tol.
inline HardyReport verify_sandwich(const RadialWeight& u_weight,
                                   const RadialWeight& v_weight,
                                   const ExponentConfig& e, const SpaceModel& space,
                                   double tol = 1e-3,
                                   const FunctionalOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  HardyReport rep;
  rep.exponents = e;
  rep.bracket = theorem_constants(e);
  rep.tol = tol;
  auto pl = std::make_shared<detail::Pipeline>(space, u_weight, v_weight, e, opt);
  rep.a2 = detail::characterize(pl, detail::WhichFunctional::a2);
  rep.a1 = detail::characterize(pl, detail::WhichFunctional::a1);
  if (rep.a2.finite() && rep.a1.finite()) {
    rep.lemma1_residual = detail::residual_between(rep.a2, rep.a1, e);
    const double a2v = rep.a2.integral->value;
    rep.lower_bound = rep.bracket.lower_factor * a2v;
    rep.upper_bound = rep.bracket.upper_factor * a2v;
    const TestFunction witness = detail::near_extremal_from(pl);
    rep.c_near_extremal = detail::hardy_ratio_sides(pl, witness).ratio;
    rep.applicable = true;
    rep.sandwich_ok = rep.lower_bound * (1.0 - tol) <= rep.c_near_extremal &&
                      rep.c_near_extremal <= rep.upper_bound * (1.0 + tol);
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

/// Outcome of a one-sided inequality check. ok requires both sides finite
/// and the inequality to hold, or a finite left side against an infinite
/// right side (vacuous truth); an infinite left side is always flagged.
struct InequalityCheck {
  QuadResult lhs{}, rhs{};
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double bound = 1.0;  // ok tests lhs <= bound * rhs * (1 + tol)
  bool ok = false;
  bool vacuous = false;  // right side infinite
  FinitenessClass lhs_class = FinitenessClass::finite;
  FinitenessClass rhs_class = FinitenessClass::finite;
};

/// Maximal-function bound: for averages normalized by the w-mass,
/// lhs = (int (int_0^t lambda1 f / int_0^t lambda1 w)^p w lambda1 dt)^{1/p}
/// never exceeds p' times rhs = (int f^p w^{1-p} lambda1)^{1/p}, provided w
/// has finite local and infinite total mass.
inline InequalityCheck check_prop2(const TestFunction& f, const RadialWeight& w,
                                   double p, const SpaceModel& space,
                                   const FunctionalOptions& opt = {}) {
  using S = detail::SideFit::State;
  if (!(p > 1.0) || !std::isfinite(p))
    throw domain_error("exponent p must satisfy 1 < p < infinity");
  const double p_conj = p / (p - 1.0);
  const TailFamily family = space.tail_family();
  const double scale = space.rate_scale();
  const double t_lo = 1e-10, reach = cumulative_reach(family, scale);

  const LogIntegrand w_density = detail::weight_density(space, w, 1.0);
  const auto wh = detail::assess_head(w_density, opt.classify);
  if (wh.state == S::divergent || wh.state == S::indeterminate)
    throw precondition_error("finite local w-mass",
                             "the w-weight is not locally integrable at the origin");
  const auto wt = detail::assess_tail(w_density, family, scale, opt.classify);
  if (wt.state != S::divergent)
    throw precondition_error("infinite total w-mass",
                             "the w-weight is integrable at infinity, so its total mass is finite");

  const LogIntegrand f_density(
      [f, space](double rho) { return f.log_at(rho) + space.log_radial_density(rho); },
      detail::merge_breaks({f.breakpoints(), space.breakpoints()}));
  const auto fh = detail::assess_head(f_density, opt.classify);
  if (fh.state == S::divergent || fh.state == S::indeterminate)
    throw precondition_error("locally integrable test function",
                             "the ball averages of the test function are critical near the origin");

  QuadOptions q = opt.quad;
  auto w_grid = std::make_shared<CumulativeGrid>(
      w_density, CumulativeGrid::Direction::from_zero, t_lo, reach, family, scale, q);
  auto f_grid = std::make_shared<CumulativeGrid>(
      f_density, CumulativeGrid::Direction::from_zero, t_lo, reach, family, scale, q);

  InequalityCheck out;
  out.bound = p_conj;

  LogIntegrand lhs_f(
      [f_grid, w_grid, w_density, p, t_lo, reach](double t) {
        const double tc = std::clamp(t, t_lo, reach);
        return p * (f_grid->log_at(tc) - w_grid->log_at(tc)) + w_density.log_at(t);
      },
      detail::merge_breaks({w_density.breakpoints(), f_density.breakpoints()}));
  lhs_f.set_log_noise(
      std::max(f_grid->log_value_noise(), w_grid->log_value_noise()) + kLn10);
  const auto lh = detail::assess_head(lhs_f, opt.classify);
  const auto lt = detail::assess_tail(lhs_f, family, scale, opt.classify);
  if (lh.state == S::divergent)
    out.lhs_class = FinitenessClass::divergent_near_zero;
  else if (lt.state == S::divergent)
    out.lhs_class = FinitenessClass::divergent_at_infinity;
  else if (lh.state == S::indeterminate || lt.state == S::indeterminate)
    out.lhs_class = FinitenessClass::indeterminate;

  const RadialWeight ww = w;
  LogIntegrand rhs_f(
      [f, ww, space, p](double rho) {
        return p * f.log_at(rho) + (1.0 - p) * ww.log_value(rho) +
               space.log_radial_density(rho);
      },
      detail::merge_breaks({f.breakpoints(), ww.breakpoints(), space.breakpoints()}));
  const auto rh = detail::assess_head(rhs_f, opt.classify);
  const auto rt = detail::assess_tail(rhs_f, family, scale, opt.classify);
  if (rh.state == S::divergent)
    out.rhs_class = FinitenessClass::divergent_near_zero;
  else if (rt.state == S::divergent)
    out.rhs_class = FinitenessClass::divergent_at_infinity;
  else if (rh.state == S::indeterminate || rt.state == S::indeterminate)
    out.rhs_class = FinitenessClass::indeterminate;

  if (out.rhs_class == FinitenessClass::finite) {
    detail::Windowed wr{integrate(rhs_f, 0.0, kPosInf, q), kNegInf};
    if (wr.raw.log_value == kNegInf)
      throw precondition_error("nonzero p-energy",
                               "the test function vanishes almost everywhere");
    wr.log_err = wr.raw.abs_err > 0.0 ? std::log(wr.raw.abs_err) : kNegInf;
    out.rhs = detail::take_root(wr, p, q);
  } else {
    const bool div = out.rhs_class != FinitenessClass::indeterminate;
    out.rhs.value = div ? kPosInf : std::numeric_limits<double>::quiet_NaN();
    out.rhs.log_value = out.rhs.value;
    out.vacuous = div;
  }

  if (out.lhs_class == FinitenessClass::finite) {
    const double eps = std::clamp(opt.epsilon, t_lo, 1.0);
    const QuadOptions ql = detail::noise_aware(q, lhs_f);
    const detail::Windowed wl =
        detail::integrate_windowed(lhs_f, eps, reach, ql, lh, lt, family, scale);
    out.lhs = detail::take_root(
        wl, p, ql, w_grid->boundary_resolved() && f_grid->boundary_resolved());
  } else {
    const bool div = out.lhs_class != FinitenessClass::indeterminate;
    out.lhs.value = div ? kPosInf : std::numeric_limits<double>::quiet_NaN();
    out.lhs.log_value = out.lhs.value;
  }

  if (out.lhs_class == FinitenessClass::finite &&
      out.rhs_class == FinitenessClass::finite) {
    out.ratio = std::exp(out.lhs.log_value - out.rhs.log_value);
    out.ok = out.lhs.value <= out.bound * out.rhs.value * (1.0 + opt.bound_tol);
  } else if (out.lhs_class == FinitenessClass::finite && out.vacuous) {
    out.ok = true;
  }
  return out;
}

/// Monotone-test-function bound:
/// lhs = (int F^q u lambda1)^{1/q} against
/// rhs = (r/p)^{1/r} (int U~^{r/q} B~^{-r/q} b lambda1)^{1/r} (int F^p b lambda1)^{1/p},
/// for nondecreasing F, b integrable away from the origin with infinite
/// total mass, and u integrable at infinity.
inline InequalityCheck check_prop1(const TestFunction& F, const RadialWeight& u_weight,
                                   const RadialWeight& b_weight,
                                   const ExponentConfig& e, const SpaceModel& space,
                                   const FunctionalOptions& opt = {}) {
  using S = detail::SideFit::State;
  if (!F.nondecreasing())
    throw domain_error("the test function must carry the nondecreasing flag");
  const TailFamily family = space.tail_family();
  const double scale = space.rate_scale();
  const double t_lo = 1e-10, reach = cumulative_reach(family, scale);

  const LogIntegrand b_density = detail::weight_density(space, b_weight, 1.0);
  const auto bt = detail::assess_tail(b_density, family, scale, opt.classify);
  if (bt.state == S::divergent || bt.state == S::indeterminate)
    throw precondition_error("b integrable away from the origin",
                             "the b-weight mass beyond a radius does not converge");
  const auto bh = detail::assess_head(b_density, opt.classify);
  if (bh.state != S::divergent)
    throw precondition_error("infinite total b-mass",
                             "the local integral of b converges, so b is integrable on the whole space");

  const LogIntegrand u_density = detail::weight_density(space, u_weight, 1.0);
  const auto ut = detail::assess_tail(u_density, family, scale, opt.classify);
  if (ut.state == S::divergent || ut.state == S::indeterminate)
    throw precondition_error("DivergentU",
                             "the u-weight is not integrable at infinity");

  QuadOptions q = opt.quad;
  auto u_grid = std::make_shared<CumulativeGrid>(
      u_density, CumulativeGrid::Direction::to_infinity, t_lo, reach, family, scale, q);
  auto b_grid = std::make_shared<CumulativeGrid>(
      b_density, CumulativeGrid::Direction::to_infinity, t_lo, reach, family, scale, q);

  InequalityCheck out;
  out.bound = 1.0;

  LogIntegrand lhs_f(
      [F, u_density, qq = e.q](double rho) {
        return qq * F.log_at(rho) + u_density.log_at(rho);
      },
      detail::merge_breaks({F.breakpoints(), u_density.breakpoints()}));
  const auto lh = detail::assess_head(lhs_f, opt.classify);
  const auto lt = detail::assess_tail(lhs_f, family, scale, opt.classify);
  if (lh.state == S::divergent)
    out.lhs_class = FinitenessClass::divergent_near_zero;
  else if (lt.state == S::divergent)
    out.lhs_class = FinitenessClass::divergent_at_infinity;
  else if (lh.state == S::indeterminate || lt.state == S::indeterminate)
    out.lhs_class = FinitenessClass::indeterminate;

  LogIntegrand mid_f(
      [u_grid, b_grid, b_density, rq = e.ratio_rq, t_lo, reach](double t) {
        const double tc = std::clamp(t, t_lo, reach);
        return rq * (u_grid->log_at(tc) - b_grid->log_at(tc)) + b_density.log_at(t);
      },
      detail::merge_breaks({b_density.breakpoints(), u_density.breakpoints()}));
  mid_f.set_log_noise(
      std::max(u_grid->log_value_noise(), b_grid->log_value_noise()) + kLn10);
  const auto mh = detail::assess_head(mid_f, opt.classify);
  const auto mt = detail::assess_tail(mid_f, family, scale, opt.classify);

  LogIntegrand fac_f(
      [F, b_density, p = e.p](double rho) {
        return p * F.log_at(rho) + b_density.log_at(rho);
      },
      detail::merge_breaks({F.breakpoints(), b_density.breakpoints()}));
  const auto fch = detail::assess_head(fac_f, opt.classify);
  const auto fct = detail::assess_tail(fac_f, family, scale, opt.classify);

  const bool mid_div = mh.state == S::divergent || mt.state == S::divergent;
  const bool fac_div = fch.state == S::divergent || fct.state == S::divergent;
  const bool mid_ind = mh.state == S::indeterminate || mt.state == S::indeterminate;
  const bool fac_ind = fch.state == S::indeterminate || fct.state == S::indeterminate;
  if (mid_div || fac_div)
    out.rhs_class = mh.state == S::divergent || fch.state == S::divergent
                        ? FinitenessClass::divergent_near_zero
                        : FinitenessClass::divergent_at_infinity;
  else if (mid_ind || fac_ind)
    out.rhs_class = FinitenessClass::indeterminate;

  if (out.lhs_class == FinitenessClass::finite) {
    detail::Windowed wl{integrate(lhs_f, 0.0, kPosInf, q), kNegInf};
    wl.log_err = wl.raw.abs_err > 0.0 ? std::log(wl.raw.abs_err) : kNegInf;
    out.lhs = detail::take_root(wl, e.q, q, u_grid->boundary_resolved());
  } else {
    const bool div = out.lhs_class != FinitenessClass::indeterminate;
    out.lhs.value = div ? kPosInf : std::numeric_limits<double>::quiet_NaN();
    out.lhs.log_value = out.lhs.value;
  }

  if (out.rhs_class == FinitenessClass::finite) {
    const double eps = std::clamp(opt.epsilon, t_lo, 1.0);
    const QuadOptions qm = detail::noise_aware(q, mid_f);
    const detail::Windowed wm =
        detail::integrate_windowed(mid_f, eps, reach, qm, mh, mt, family, scale);
    detail::Windowed wf{integrate(fac_f, 0.0, kPosInf, q), kNegInf};
    wf.log_err = wf.raw.abs_err > 0.0 ? std::log(wf.raw.abs_err) : kNegInf;
    const QuadResult mid = detail::take_root(wm, e.r, qm, b_grid->boundary_resolved());
    const QuadResult fac = detail::take_root(wf, e.p, q);
    QuadResult rhs;
    rhs.log_value = std::log(e.r / e.p) / e.r + mid.log_value + fac.log_value;
    rhs.value = exp_or_zero(rhs.log_value);
    const double rel_mid = mid.value > 0.0 ? mid.abs_err / mid.value : 0.0;
    const double rel_fac = fac.value > 0.0 ? fac.abs_err / fac.value : 0.0;
    rhs.abs_err = rhs.value * (rel_mid + rel_fac);
    rhs.evaluations = mid.evaluations + fac.evaluations;
    rhs.converged = mid.converged && fac.converged;
    out.rhs = rhs;
  } else {
    const bool div = out.rhs_class != FinitenessClass::indeterminate;
    out.rhs.value = div ? kPosInf : std::numeric_limits<double>::quiet_NaN();
    out.rhs.log_value = out.rhs.value;
    out.vacuous = div;
  }

  if (out.lhs_class == FinitenessClass::finite &&
      out.rhs_class == FinitenessClass::finite) {
    out.ratio = std::exp(out.lhs.log_value - out.rhs.log_value);
    out.ok = out.lhs.value <= out.rhs.value * (1.0 + opt.bound_tol);
  } else if (out.lhs_class == FinitenessClass::finite && out.vacuous) {
    out.ok = true;
  }
  return out;
}

} // namespace hardy

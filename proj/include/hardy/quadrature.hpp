#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/math.hpp"
#include "hardy/spaces.hpp"

namespace hardy {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;
  std::int64_t max_evaluations = 2'000'000;
};

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
  double log_value = kNegInf;  // exact in log space even when value over/underflows
};

/// Positive integrand presented through its logarithm. All quadrature and
/// classification below consumes this form; values re-enter linear space
/// only at the very end.
///
/// log_noise declares the relative noise floor of the values (as a log):
/// integrands assembled from other quadrature results are reproducible only
/// to the accuracy those results carry, and the adaptive machinery must not
/// chase error estimates below that floor. kNegInf means clean to rounding.
class LogIntegrand {
public:
  explicit LogIntegrand(std::function<double(double)> log_fn,
                        std::vector<double> breakpoints = {})
      : log_fn_(std::move(log_fn)), breakpoints_(std::move(breakpoints)) {
    if (!log_fn_) throw domain_error("integrand needs a callable");
    std::sort(breakpoints_.begin(), breakpoints_.end());
  }

  static LogIntegrand from_values(std::function<double(double)> f,
                                  std::vector<double> breakpoints = {}) {
    return LogIntegrand(
        [f = std::move(f)](double rho) {
          const double v = f(rho);
          if (v < 0.0) throw evaluation_error("integrand is negative", rho);
          return v == 0.0 ? kNegInf : std::log(v);
        },
        std::move(breakpoints));
  }

  double log_at(double rho) const {
    const double v = log_fn_(rho);
    if (std::isnan(v)) throw evaluation_error("integrand returned NaN", rho);
    return v;
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }

  double log_noise() const { return log_noise_; }
  void set_log_noise(double log_rel_noise) { log_noise_ = log_rel_noise; }

private:
  std::function<double(double)> log_fn_;
  std::vector<double> breakpoints_;
  double log_noise_ = kNegInf;
};

namespace detail {

// 15-point Kronrod extension of 7-point Gauss, abscissae and weights on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639207, 0.949107912342758524526, 0.864864423359769072789,
    0.741531185599394439864, 0.586087235467691130294, 0.405845151377397166907,
    0.207784955007898467601, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529224964, 0.063092092629978553291, 0.104790010322250183840,
    0.140653259715525918745, 0.169004726639267902827, 0.190350578064785409913,
    0.204432940075298892414, 0.209482141084727828013};
inline constexpr double kWg[4] = {
    0.129484966168869693271, 0.279705391489276667901, 0.381830050505118944950,
    0.417959183673469387755};

struct PanelEval {
  double log_value = kNegInf;
  double log_err = kNegInf;
};

// Integrates f over one panel in x = log(rho): the substitution rho = e^x
// turns every integral on (0, inf) into one over the real line and absorbs
// endpoint power singularities into plain exponentials.
class PanelEngine {
public:
  PanelEngine(const LogIntegrand& f, std::int64_t max_evals)
      : f_(f), max_evals_(max_evals),
        log_floor_(std::max(kLogRoundingFloor, f.log_noise() + kLn10)) {}

  std::int64_t evaluations() const { return evals_; }
  bool budget_exhausted() const { return evals_ >= max_evals_; }

  PanelEval gk15(double x0, double x1) {
    const double c = 0.5 * (x0 + x1);
    const double h = 0.5 * (x1 - x0);
    double lg[15];
    for (int j = 0; j < 7; ++j) {
      lg[j] = sample(c - h * kXgk[j]);
      lg[14 - j] = sample(c + h * kXgk[j]);
    }
    lg[7] = sample(c);
    double m = kNegInf;
    for (double v : lg) m = std::max(m, v);
    if (m == kNegInf) return {};
    if (m == kPosInf) return {kPosInf, kPosInf};
    double sk = 0.0, sg = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double pair = std::exp(lg[j] - m) + std::exp(lg[14 - j] - m);
      sk += kWgk[j] * pair;
      if (j % 2 == 1) sg += kWg[j / 2] * pair;
    }
    sk += kWgk[7] * std::exp(lg[7] - m);
    sg += kWg[3] * std::exp(lg[7] - m);
    PanelEval out;
    out.log_value = std::log(h) + m + std::log(sk);
    out.log_err = sg == sk ? kNegInf : std::log(h) + m + std::log(std::abs(sk - sg));
    return out;
  }

  // Bisects until the panel error estimate meets log_tol. A node is also
  // accepted when its estimate sits at the noise floor of the integrand (or
  // the rounding floor of the log-space sums, ~1e2 ulps) -- bisection cannot
  // improve on the reproducibility of the samples -- or when it is negligible
  // against the mass already accumulated. The estimate always lands in
  // acc_err, so nothing is hidden. Descending into the heavier child first
  // keeps the tree linear on panels spanning many e-folds, where the rule
  // degenerates to a single dominant sample and the error estimate carries no
  // information until the dominant edge has been resolved.
  void refine(double x0, double x1, double log_tol, int depth, double& acc_value,
              double& acc_err) {
    refine_eval(gk15(x0, x1), x0, x1, log_tol, depth, acc_value, acc_err);
  }

  void refine_eval(const PanelEval& e, double x0, double x1, double log_tol,
                   int depth, double& acc_value, double& acc_err) {
    // Samples of log f carry absolute rounding ~ulp(|log f|), so a panel whose
    // value sits at log scale L cannot certify a relative error below ~eps*|L|.
    // Without this lift, far-tail panels (|L| ~ 1e9) subdivide to the width cap.
    const double self_floor = std::max(log_floor_, sample_noise(e.log_value));
    const double acc_floor = std::max(log_floor_, sample_noise(acc_value));
    const bool accept = e.log_err <= log_tol ||
                        e.log_err <= e.log_value + self_floor ||
                        e.log_err <= acc_value + acc_floor ||
                        e.log_value == kNegInf ||
                        depth >= kMaxDepth || (x1 - x0) < 1e-13 || budget_exhausted() ||
                        e.log_value == kPosInf;
    if (accept) {
      acc_value = log_add_exp(acc_value, e.log_value);
      acc_err = log_add_exp(acc_err, e.log_err);
      return;
    }
    const double mid = 0.5 * (x0 + x1);
    const PanelEval el = gk15(x0, mid);
    const PanelEval er = gk15(mid, x1);
    if (el.log_value >= er.log_value) {
      refine_eval(el, x0, mid, log_tol - kLn2, depth + 1, acc_value, acc_err);
      refine_eval(er, mid, x1, log_tol - kLn2, depth + 1, acc_value, acc_err);
    } else {
      refine_eval(er, mid, x1, log_tol - kLn2, depth + 1, acc_value, acc_err);
      refine_eval(el, x0, mid, log_tol - kLn2, depth + 1, acc_value, acc_err);
    }
  }

private:
  static constexpr int kMaxDepth = 52;
  static constexpr double kLogRoundingFloor = -29.24;  // log(2e-13)

  // log(8.8e-16): a few ulps of headroom over machine epsilon for the
  // rounding that log-space samples at scale |log_ref| accumulate.
  static double sample_noise(double log_ref) {
    return -34.6666 + std::log1p(std::abs(log_ref));
  }

  double sample(double x) {
    ++evals_;
    return f_.log_at(std::exp(x)) + x;
  }

  const LogIntegrand& f_;
  std::int64_t max_evals_;
  std::int64_t evals_ = 0;
  double log_floor_;
};

// Extends the panel chain one unit of x at a time until the new block is
// negligible against the running total. Returns the block list plus a
// geometric estimate of everything beyond the last block.
struct Extension {
  std::vector<std::pair<double, double>> blocks;  // x-intervals, inner to outer
  std::vector<double> block_values;               // coarse log integrals
  double log_remainder = kNegInf;
  bool diverging = false;
  bool truncated = false;  // hit the hard x cap while still significant
};

inline void estimate_remainder(Extension& ext);
inline void stop_at_cap(Extension& ext, double running);

inline Extension extend(PanelEngine& eng, double x_start, double direction,
                        double x_cap, double log_reference) {
  Extension out;
  double running = log_reference;
  int rising = 0;
  double x = x_start;
  for (int k = 0; k < 1500; ++k) {
    const double x_next = x + direction;
    const double a = std::min(x, x_next);
    const double b = std::max(x, x_next);
    const PanelEval e = eng.gk15(a, b);
    out.blocks.emplace_back(a, b);
    out.block_values.push_back(e.log_value);
    if (e.log_value == kPosInf) {
      out.diverging = true;
      return out;
    }
    running = log_add_exp(running, e.log_value);
    const std::size_t n = out.block_values.size();
    if (n >= 2 && e.log_value >= out.block_values[n - 2]) {
      if (++rising >= 40) {
        out.diverging = true;
        return out;
      }
    } else {
      rising = 0;
    }
    if (n >= 3 && e.log_value <= running + std::log(1e-18)) {
      estimate_remainder(out);
      return out;
    }
    x = x_next;
    if ((direction > 0 && x >= x_cap) || (direction < 0 && x <= x_cap)) {
      stop_at_cap(out, running);
      return out;
    }
    if (eng.budget_exhausted()) {
      estimate_remainder(out);
      out.truncated = true;
      return out;
    }
  }
  out.truncated = true;
  estimate_remainder(out);
  return out;
}

inline void estimate_remainder(Extension& ext) {
  const std::size_t n = ext.block_values.size();
  if (n < 2) return;
  const double last = ext.block_values[n - 1];
  if (last == kNegInf) {
    ext.log_remainder = kNegInf;
    return;
  }
  const double ratio = ext.block_values[n - 1] - ext.block_values[n - 2];
  if (ratio < std::log(0.95)) {
    // geometric tail: last * r / (1 - r)
    const double r = std::exp(ratio);
    ext.log_remainder = last + std::log(r / (1.0 - r));
  } else {
    ext.log_remainder = last + std::log(40.0);
  }
}

// The chain hit its hard abscissa cap. If the last blocks still decayed
// geometrically the remainder estimate is trustworthy and only counts as a
// truncation when it is large against the running sum; a near-flat chain has
// no reliable extrapolation, so any significant last block forces the flag.
inline void stop_at_cap(Extension& ext, double running) {
  estimate_remainder(ext);
  const std::size_t n = ext.block_values.size();
  const double last = n > 0 ? ext.block_values[n - 1] : kNegInf;
  if (last == kNegInf) {
    ext.truncated = false;
    return;
  }
  const bool geometric =
      n >= 2 && (ext.block_values[n - 1] - ext.block_values[n - 2]) < std::log(0.95);
  ext.truncated = geometric ? ext.log_remainder > running + std::log(1e-12)
                            : last > running + std::log(1e-18);
}

} // namespace detail

/// Adaptive quadrature of a positive integrand over [lo, hi], hi possibly
/// infinite, lo possibly zero. Work happens in x = log(rho): the head of a
/// zero endpoint and the tail of an infinite one become block chains that are
/// extended until negligible, with the leftover estimated geometrically and
/// charged to abs_err. converged certifies abs_err <= max(abs_tol, rel_tol*value).
inline QuadResult integrate(const LogIntegrand& f, double lo, double hi,
                            const QuadOptions& opts = {}) {
  if (!(lo >= 0.0)) throw domain_error("integration bound lo >= 0 violated");
  if (!(hi > lo)) throw domain_error("integration bounds need hi > lo");
  if (!(opts.abs_tol >= 0.0) || !(opts.rel_tol >= 0.0) ||
      (opts.abs_tol == 0.0 && opts.rel_tol == 0.0))
    throw domain_error("tolerances must be nonnegative and not both zero");

  detail::PanelEngine eng(f, opts.max_evaluations);

  std::vector<double> breaks;
  for (double b : f.breakpoints())
    if (b > lo && (hi == kPosInf || b < hi)) breaks.push_back(b);

  // central window; head/tail chains hang off its ends when needed
  double c0 = lo > 0.0 ? lo : std::min(1.0, hi);
  double c1 = hi < kPosInf ? hi : std::max({1.0, lo, c0});
  for (double b : breaks) {
    c0 = std::min(c0, b);
    c1 = std::max(c1, b);
  }

  std::vector<double> edges;
  const double x0 = std::log(c0), x1 = std::log(c1);
  const int nseg = std::max(1, static_cast<int>(std::ceil((x1 - x0) / 0.5)));
  for (int i = 0; i <= nseg; ++i)
    edges.push_back(x0 + (x1 - x0) * static_cast<double>(i) / nseg);
  for (double b : breaks) edges.push_back(std::log(b));
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              edges.end());

  struct Panel {
    double a, b;
    double coarse;
  };
  std::vector<Panel> panels;
  double log_est = kNegInf;

  bool diverging = false;
  double log_rem = kNegInf;
  bool truncated = false;

  if (lo == 0.0) {
    const auto head = detail::extend(eng, x0, -1.0, -700.0, kNegInf);
    diverging |= head.diverging;
    truncated |= head.truncated;
    log_rem = log_add_exp(log_rem, head.log_remainder);
    for (std::size_t i = head.blocks.size(); i-- > 0;) {
      panels.push_back({head.blocks[i].first, head.blocks[i].second, head.block_values[i]});
      log_est = log_add_exp(log_est, head.block_values[i]);
    }
  }
  if (x1 > x0) {
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      const auto e = eng.gk15(edges[i], edges[i + 1]);
      panels.push_back({edges[i], edges[i + 1], e.log_value});
      log_est = log_add_exp(log_est, e.log_value);
    }
  }
  if (hi == kPosInf) {
    const auto tail = detail::extend(eng, x1, +1.0, 700.0, log_est);
    diverging |= tail.diverging;
    truncated |= tail.truncated;
    log_rem = log_add_exp(log_rem, tail.log_remainder);
    for (std::size_t i = 0; i < tail.blocks.size(); ++i) {
      panels.push_back({tail.blocks[i].first, tail.blocks[i].second, tail.block_values[i]});
      log_est = log_add_exp(log_est, tail.block_values[i]);
    }
  }

  QuadResult out;
  if (diverging) {
    out.value = kPosInf;
    out.log_value = kPosInf;
    out.abs_err = kPosInf;
    out.evaluations = eng.evaluations();
    return out;
  }
  if (log_est == kNegInf) {
    out.converged = true;
    out.evaluations = eng.evaluations();
    out.log_value = kNegInf;
    return out;
  }

  const double log_abs = opts.abs_tol > 0.0 ? std::log(opts.abs_tol) : kNegInf;
  const double log_rel = opts.rel_tol > 0.0 ? std::log(opts.rel_tol) : kNegInf;
  const double log_target = std::max(log_abs, log_rel + log_est);
  const double n_panels = static_cast<double>(panels.size());

  // budget per panel proportional to its coarse share, floored so a panel
  // whose coarse pass underestimates still gets refined
  double acc_v = kNegInf, acc_e = kNegInf;
  std::sort(panels.begin(), panels.end(),
            [](const Panel& p, const Panel& q) { return p.a < q.a; });
  for (const auto& p : panels) {
    const double share = log_target + (p.coarse - log_est) - std::log(4.0);
    const double floor_tol = log_target - std::log(4.0 * n_panels);
    eng.refine(p.a, p.b, std::max(share, floor_tol), 0, acc_v, acc_e);
  }
  acc_e = log_add_exp(acc_e, log_rem);

  out.log_value = acc_v;
  out.value = exp_or_zero(acc_v);
  out.abs_err = exp_or_zero(acc_e);
  out.evaluations = eng.evaluations();
  const double certify = std::max(log_abs, log_rel + acc_v);
  out.converged = !eng.budget_exhausted() && !truncated &&
                  (acc_e <= certify + 1e-9 || acc_e == kNegInf);
  return out;
}

// ---------------------------------------------------------------------------
// finiteness classification
// ---------------------------------------------------------------------------

enum class FinitenessClass {
  finite,
  divergent_near_zero,
  divergent_at_infinity,
  indeterminate,
};

/// Where a divergence verdict originated; lets callers separate a violated
/// weight hypothesis from a diverging characterizing integral.
enum class DivergenceOrigin { none, weight_u, weight_v, outer };

struct FinitenessVerdict {
  FinitenessClass kind = FinitenessClass::indeterminate;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();  // near zero
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();      // at infinity
  std::optional<QuadResult> integral;
  DivergenceOrigin origin = DivergenceOrigin::none;
  std::string detail;

  bool finite() const { return kind == FinitenessClass::finite; }
};

/// Classification margins. A fitted exponent within `margin` of the
/// integrability threshold is never resolved: the verdict is indeterminate.
struct ClassifyOptions {
  double margin = 0.05;
  double residual_threshold = 0.05;
};

namespace detail {

struct SideFit {
  enum class State { fine, divergent, indeterminate, empty } state = State::empty;
  double fitted = std::numeric_limits<double>::quiet_NaN();
  double rms = 0.0;
  // true when `fitted` is an exponential rate rather than a power exponent;
  // tail remainder estimates must use the matching law.
  bool exponential = false;
};

inline constexpr double kHeadLo = 1e-8;
inline constexpr double kHeadHi = 1e-4;
inline constexpr double kPowerTailLo = 1e6;
inline constexpr double kExpTailLo = 200.0;  // in units of 1/rate_scale
inline constexpr int kFitPoints = 24;

// Local power exponent near zero: slope of log f against log rho.
inline SideFit assess_head(const LogIntegrand& f, const ClassifyOptions& c) {
  std::vector<double> xs, ys;
  for (int i = 0; i < kFitPoints; ++i) {
    const double t = static_cast<double>(i) / (kFitPoints - 1);
    const double rho = kHeadLo * std::pow(kHeadHi / kHeadLo, t);
    const double lg = f.log_at(rho);
    if (lg == kPosInf) return {SideFit::State::divergent, kNegInf, 0.0};
    if (lg == kNegInf) continue;
    xs.push_back(std::log(rho));
    ys.push_back(lg);
  }
  if (xs.size() < 5) return {};
  const LinearFit fit = fit_line(xs, ys);
  SideFit out;
  out.fitted = fit.slope;
  out.rms = fit.rms_residual;
  if (fit.rms_residual > c.residual_threshold) out.state = SideFit::State::indeterminate;
  else if (std::abs(fit.slope + 1.0) < c.margin) out.state = SideFit::State::indeterminate;
  else if (fit.slope < -1.0) out.state = SideFit::State::divergent;
  else out.state = SideFit::State::fine;
  return out;
}

inline SideFit assess_tail_exp(const LogIntegrand& f, double scale,
                               const ClassifyOptions& c);

// Tail exponent on power-type spaces: slope of log f against log rho far out.
// Integrands that decay (or grow) faster than any power leave the power model
// with a huge residual; those are retried against the exponential law, whose
// sign settles finiteness regardless of polynomial factors.
inline SideFit assess_tail_power(const LogIntegrand& f, double scale,
                                 const ClassifyOptions& c) {
  std::vector<double> xs, ys;
  for (int i = 0; i < kFitPoints; ++i) {
    const double t = static_cast<double>(i) / (kFitPoints - 1);
    const double rho = kPowerTailLo * std::pow(4.0, t);
    const double lg = f.log_at(rho);
    if (lg == kPosInf) return {SideFit::State::divergent, kPosInf, 0.0};
    if (lg == kNegInf) continue;
    xs.push_back(std::log(rho));
    ys.push_back(lg);
  }
  if (xs.size() < 5) return {};
  const LinearFit fit = fit_line(xs, ys);
  SideFit out;
  out.fitted = fit.slope;
  out.rms = fit.rms_residual;
  if (fit.rms_residual > c.residual_threshold) out.state = SideFit::State::indeterminate;
  else if (std::abs(fit.slope + 1.0) < c.margin) out.state = SideFit::State::indeterminate;
  else if (fit.slope > -1.0) out.state = SideFit::State::divergent;
  else out.state = SideFit::State::fine;
  if (out.state == SideFit::State::indeterminate &&
      fit.rms_residual > c.residual_threshold) {
    const SideFit ex = assess_tail_exp(f, scale, c);
    if (ex.state == SideFit::State::fine || ex.state == SideFit::State::divergent)
      return ex;
  }
  return out;
}

// Tail rate on sinh-type spaces. The model is
//   log f = k * (scale * rho) + m * log rho + const,
// fitted by sequential least squares (k after projecting out the power
// carrier), so a slowly varying power factor cannot bias the rate. The rate
// k is measured per unit of scale * rho; the verdict hinges on its sign.
inline SideFit assess_tail_exp(const LogIntegrand& f, double scale,
                               const ClassifyOptions& c) {
  std::vector<double> u, w, ys;
  for (int i = 0; i < kFitPoints; ++i) {
    const double t = static_cast<double>(i) / (kFitPoints - 1);
    const double rho = (kExpTailLo / scale) * (1.0 + 3.0 * t);
    const double lg = f.log_at(rho);
    if (lg == kPosInf) return {SideFit::State::divergent, kPosInf, 0.0, true};
    if (lg == kNegInf) continue;
    u.push_back(scale * rho);
    w.push_back(std::log(rho));
    ys.push_back(lg);
  }
  if (u.size() < 6) return {};
  const std::size_t n = u.size();
  double mu = 0, mw = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) { mu += u[i]; mw += w[i]; my += ys[i]; }
  mu /= n; mw /= n; my /= n;
  // project the power carrier w out of u, then regress y on both pieces
  double suw = 0, sww = 0;
  for (std::size_t i = 0; i < n; ++i) {
    suw += (u[i] - mu) * (w[i] - mw);
    sww += (w[i] - mw) * (w[i] - mw);
  }
  const double proj = suw / sww;
  double see = 0, sey = 0, swy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = (u[i] - mu) - proj * (w[i] - mw);
    see += e * e;
    sey += e * (ys[i] - my);
    swy += (w[i] - mw) * (ys[i] - my);
  }
  const double k = sey / see;
  const double m = (swy - k * suw) / sww;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = my + k * (u[i] - mu) + m * (w[i] - mw);
    ss += (ys[i] - pred) * (ys[i] - pred);
  }
  SideFit out;
  out.exponential = true;
  out.fitted = k;
  out.rms = std::sqrt(ss / n);
  if (out.rms > c.residual_threshold) out.state = SideFit::State::indeterminate;
  else if (std::abs(k) < c.margin) out.state = SideFit::State::indeterminate;
  else if (k > 0.0) out.state = SideFit::State::divergent;
  else out.state = SideFit::State::fine;
  return out;
}

inline SideFit assess_tail(const LogIntegrand& f, TailFamily family, double scale,
                           const ClassifyOptions& c) {
  return family == TailFamily::exponential ? assess_tail_exp(f, scale, c)
                                           : assess_tail_power(f, scale, c);
}

} // namespace detail

/// Decides whether the integral of f over (0, inf) is finite by fitting the
/// local exponent near zero and the decay law at infinity, then integrating
/// only when both sides are safely inside the integrable region. Exponents
/// within the margin band of criticality yield indeterminate, never a guess.
inline FinitenessVerdict classify_finiteness(const LogIntegrand& f,
                                             const QuadOptions& opts = {},
                                             TailFamily family = TailFamily::power,
                                             double rate_scale = 1.0,
                                             const ClassifyOptions& copts = {}) {
  using detail::SideFit;
  FinitenessVerdict v;
  const SideFit head = detail::assess_head(f, copts);
  if (head.state == SideFit::State::divergent) {
    v.kind = FinitenessClass::divergent_near_zero;
    v.fitted_exponent = head.fitted;
    return v;
  }
  if (head.state == SideFit::State::indeterminate) {
    v.kind = FinitenessClass::indeterminate;
    v.fitted_exponent = head.fitted;
    return v;
  }
  v.fitted_exponent = head.fitted;
  const SideFit tail = detail::assess_tail(f, family, rate_scale, copts);
  if (tail.state == SideFit::State::divergent) {
    v.kind = FinitenessClass::divergent_at_infinity;
    v.fitted_rate = tail.fitted;
    return v;
  }
  if (tail.state == SideFit::State::indeterminate) {
    v.kind = FinitenessClass::indeterminate;
    v.fitted_rate = tail.fitted;
    return v;
  }
  v.fitted_rate = tail.fitted;
  v.kind = FinitenessClass::finite;
  v.integral = integrate(f, 0.0, kPosInf, opts);
  return v;
}

} // namespace hardy

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/math.hpp"

namespace hardy {

// Radial weights are evaluated through their logarithm everywhere: products
// of large powers of sinh overflow double long before the integrals they
// enter do, while the logs stay small.

struct PowerWeight {
  double beta;
};

struct PiecewisePowerWeight {
  double alpha_inner;  // applies for rho < break_radius
  double alpha_outer;  // applies for rho >= break_radius
  double break_radius;
};

struct SinhPowerWeight {
  double beta;
  double scale;  // argument scaling: weight is sinh(scale * rho)^beta
};

struct SinhPiecewisePowerWeight {
  double alpha_inner;  // applies for rho < 1
  double alpha_outer;  // applies for rho >= 1
  double scale;
};

struct CustomWeight {
  std::function<double(double)> log_value;
  std::vector<double> breakpoints;
};

class RadialWeight {
public:
  static RadialWeight power(double beta) { return RadialWeight(PowerWeight{beta}); }

  static RadialWeight piecewise_power(double alpha_inner, double alpha_outer,
                                      double break_radius = 1.0) {
    if (!(break_radius > 0.0))
      throw domain_error("break_radius > 0 violated");
    return RadialWeight(PiecewisePowerWeight{alpha_inner, alpha_outer, break_radius});
  }

  static RadialWeight sinh_power(double beta, double scale = 1.0) {
    if (!(scale > 0.0)) throw domain_error("scale > 0 violated");
    return RadialWeight(SinhPowerWeight{beta, scale});
  }

  static RadialWeight sinh_piecewise_power(double alpha_inner, double alpha_outer,
                                           double scale = 1.0) {
    if (!(scale > 0.0)) throw domain_error("scale > 0 violated");
    return RadialWeight(SinhPiecewisePowerWeight{alpha_inner, alpha_outer, scale});
  }

  static RadialWeight custom(std::function<double(double)> log_value,
                             std::vector<double> breakpoints = {}) {
    if (!log_value) throw domain_error("custom weight needs a callable");
    return RadialWeight(CustomWeight{std::move(log_value), std::move(breakpoints)});
  }

  double log_value(double rho) const {
    if (!(rho > 0.0))
      throw domain_error("weight evaluated at rho <= 0");
    return std::visit(
        [rho](const auto& w) -> double {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PowerWeight>) {
            return w.beta * std::log(rho);
          } else if constexpr (std::is_same_v<T, PiecewisePowerWeight>) {
            const double a = rho < w.break_radius ? w.alpha_inner : w.alpha_outer;
            return a * std::log(rho);
          } else if constexpr (std::is_same_v<T, SinhPowerWeight>) {
            return w.beta * log_sinh(w.scale * rho);
          } else if constexpr (std::is_same_v<T, SinhPiecewisePowerWeight>) {
            const double a = rho < 1.0 ? w.alpha_inner : w.alpha_outer;
            return a * log_sinh(w.scale * rho);
          } else {
            const double v = w.log_value(rho);
            if (std::isnan(v)) throw evaluation_error("custom weight returned NaN", rho);
            return v;
          }
        },
        w_);
  }

  double value(double rho) const { return exp_or_zero(log_value(rho)); }

  /// Radii where the formula switches branch; integration places panel
  /// edges here so each panel sees a smooth integrand.
  std::vector<double> breakpoints() const {
    return std::visit(
        [](const auto& w) -> std::vector<double> {
          using T = std::decay_t<decltype(w)>;
          if constexpr (std::is_same_v<T, PiecewisePowerWeight>) {
            return {w.break_radius};
          } else if constexpr (std::is_same_v<T, SinhPiecewisePowerWeight>) {
            return {1.0};
          } else if constexpr (std::is_same_v<T, CustomWeight>) {
            return w.breakpoints;
          } else {
            return {};
          }
        },
        w_);
  }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&w_);
  }

private:
  using Variant = std::variant<PowerWeight, PiecewisePowerWeight, SinhPowerWeight,
                               SinhPiecewisePowerWeight, CustomWeight>;
  explicit RadialWeight(Variant w) : w_(std::move(w)) {}
  Variant w_;
};

} // namespace hardy

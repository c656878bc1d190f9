#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/interpolation.hpp"
#include "hardy/math.hpp"

namespace hardy {

/// How the radial density behaves for large rho. Finiteness classification
/// fits a power exponent on power-type spaces and an exponential rate on
/// sinh-type spaces, so every space declares which family it belongs to.
enum class TailFamily { power, exponential };

struct HomogeneousGroupModel {
  double Q;  // homogeneous dimension, real > 0; density is mass * rho^(Q-1)
  double angular_mass;
};

struct HyperbolicModel {
  int n;  // dimension >= 2; density is mass * sinh(rho)^(n-1)
  double angular_mass;
};

struct CartanHadamardModel {
  int n;
  double b;  // curvature parameter >= 0; b == 0 degenerates to the power case
  double angular_mass;
};

struct CustomRadialModel {
  std::function<double(double)> log_density;
  TailFamily family;
  double rate_scale;
  std::vector<double> breakpoints;
};

struct TabulatedModel {
  std::vector<double> r_grid;
  std::vector<std::string> omega_labels;
  std::vector<double> angular_weights;
  std::vector<std::vector<double>> lambda;  // lambda[i][j] at (r_i, omega_j)
  std::shared_ptr<MonotoneCubic> log_radial;  // log sum_j w_j lambda(., j) vs log r
};

class SpaceModel {
public:
  static SpaceModel homogeneous(double Q, double angular_mass = 1.0) {
    if (!(Q > 0.0)) throw domain_error("homogeneous dimension Q > 0 violated");
    require_mass(angular_mass);
    return SpaceModel(HomogeneousGroupModel{Q, angular_mass});
  }

  static SpaceModel hyperbolic(int n, double angular_mass = 1.0) {
    if (n < 2) throw domain_error("hyperbolic dimension n >= 2 violated");
    require_mass(angular_mass);
    return SpaceModel(HyperbolicModel{n, angular_mass});
  }

  static SpaceModel cartan_hadamard(int n, double b, double angular_mass = 1.0) {
    if (n < 2) throw domain_error("dimension n >= 2 violated");
    if (!(b >= 0.0)) throw domain_error("curvature parameter b >= 0 violated");
    require_mass(angular_mass);
    return SpaceModel(CartanHadamardModel{n, b, angular_mass});
  }

  static SpaceModel custom_radial(std::function<double(double)> log_density,
                                  TailFamily family, double rate_scale = 1.0,
                                  std::vector<double> breakpoints = {}) {
    if (!log_density) throw domain_error("custom space needs a density callable");
    if (!(rate_scale > 0.0)) throw domain_error("rate_scale > 0 violated");
    return SpaceModel(
        CustomRadialModel{std::move(log_density), family, rate_scale, std::move(breakpoints)});
  }

  static SpaceModel tabulated(std::vector<double> r_grid, std::vector<std::string> omega_labels,
                              std::vector<double> angular_weights,
                              std::vector<std::vector<double>> lambda) {
    TabulatedModel m{std::move(r_grid), std::move(omega_labels), std::move(angular_weights),
                     std::move(lambda), nullptr};
    validate_tabulated(m);
    m.log_radial = std::make_shared<MonotoneCubic>(tabulated_log_nodes(m),
                                                   tabulated_log_values(m, nullptr));
    return SpaceModel(std::move(m));
  }

  /// Layout: a header line "r,<label>:<angular weight>,..." followed by rows
  /// "r,lambda(r,omega_1),...", radii strictly increasing, all values positive.
  static SpaceModel tabulated_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open tabulated space file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw io_error(path + ": empty file");
    auto cells = split_csv(line);
    if (cells.size() < 2 || cells[0] != "r")
      throw io_error(path + ": header must be r,<label>:<weight>,...");
    std::vector<std::string> labels;
    std::vector<double> weights;
    for (std::size_t j = 1; j < cells.size(); ++j) {
      const auto pos = cells[j].find(':');
      if (pos == std::string::npos)
        throw io_error(path + ": header cell '" + cells[j] + "' lacks ':<weight>'");
      labels.push_back(cells[j].substr(0, pos));
      weights.push_back(parse_number(cells[j].substr(pos + 1), path, 1));
    }
    std::vector<double> r_grid;
    std::vector<std::vector<double>> lambda;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      cells = split_csv(line);
      if (cells.size() != labels.size() + 1)
        throw io_error(path + ": line " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(labels.size() + 1));
      r_grid.push_back(parse_number(cells[0], path, line_no));
      std::vector<double> row;
      for (std::size_t j = 1; j < cells.size(); ++j)
        row.push_back(parse_number(cells[j], path, line_no));
      lambda.push_back(std::move(row));
    }
    return tabulated(std::move(r_grid), std::move(labels), std::move(weights),
                     std::move(lambda));
  }

  double log_radial_density(double rho) const {
    if (!(rho > 0.0)) throw domain_error("density evaluated at rho <= 0");
    return std::visit(
        [rho](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, HomogeneousGroupModel>) {
            return std::log(m.angular_mass) + (m.Q - 1.0) * std::log(rho);
          } else if constexpr (std::is_same_v<T, HyperbolicModel>) {
            return std::log(m.angular_mass) + (m.n - 1) * log_sinh(rho);
          } else if constexpr (std::is_same_v<T, CartanHadamardModel>) {
            if (m.b == 0.0)
              return std::log(m.angular_mass) + (m.n - 1) * std::log(rho);
            const double s = std::sqrt(m.b);
            return std::log(m.angular_mass) +
                   (m.n - 1) * (log_sinh(s * rho) - std::log(s));
          } else if constexpr (std::is_same_v<T, CustomRadialModel>) {
            const double v = m.log_density(rho);
            if (std::isnan(v)) throw evaluation_error("custom density returned NaN", rho);
            return v;
          } else {
            if (rho < m.r_grid.front() || rho > m.r_grid.back())
              throw extrapolation_error(
                  "tabulated density queried at rho = " + std::to_string(rho) +
                  ", stored range is [" + std::to_string(m.r_grid.front()) + ", " +
                  std::to_string(m.r_grid.back()) + "]");
            return (*m.log_radial)(std::log(rho));
          }
        },
        m_);
  }

  double radial_density(double rho) const { return exp_or_zero(log_radial_density(rho)); }

  TailFamily tail_family() const {
    return std::visit(
        [](const auto& m) -> TailFamily {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, HyperbolicModel>) {
            return TailFamily::exponential;
          } else if constexpr (std::is_same_v<T, CartanHadamardModel>) {
            return m.b > 0.0 ? TailFamily::exponential : TailFamily::power;
          } else if constexpr (std::is_same_v<T, CustomRadialModel>) {
            return m.family;
          } else {
            return TailFamily::power;
          }
        },
        m_);
  }

  /// Exponential rates are measured per unit of (rate_scale * rho), so the
  /// classification margins stay meaningful for gently curved spaces.
  double rate_scale() const {
    return std::visit(
        [](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, CartanHadamardModel>) {
            return m.b > 0.0 ? std::sqrt(m.b) : 1.0;
          } else if constexpr (std::is_same_v<T, CustomRadialModel>) {
            return m.rate_scale;
          } else {
            return 1.0;
          }
        },
        m_);
  }

  std::vector<double> breakpoints() const {
    if (const auto* c = std::get_if<CustomRadialModel>(&m_)) return c->breakpoints;
    if (const auto* t = std::get_if<TabulatedModel>(&m_)) return t->r_grid;
    return {};
  }

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&m_);
  }

private:
  using Variant = std::variant<HomogeneousGroupModel, HyperbolicModel, CartanHadamardModel,
                               CustomRadialModel, TabulatedModel>;
  explicit SpaceModel(Variant m) : m_(std::move(m)) {}

  static void require_mass(double mass) {
    if (!(mass > 0.0)) throw domain_error("angular_mass > 0 violated");
  }

  static std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  }

  static double parse_number(const std::string& s, const std::string& path,
                             std::size_t line_no) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw io_error(path + ": line " + std::to_string(line_no) + ": '" + s +
                     "' is not a number");
    }
    if (used != s.size())
      throw io_error(path + ": line " + std::to_string(line_no) + ": '" + s +
                     "' is not a number");
    return v;
  }

  static void validate_tabulated(const TabulatedModel& m) {
    if (m.r_grid.size() < 2) throw domain_error("tabulated space needs >= 2 radii");
    if (m.omega_labels.empty()) throw domain_error("tabulated space needs >= 1 angular node");
    if (m.angular_weights.size() != m.omega_labels.size())
      throw domain_error("angular weights and labels differ in length");
    if (m.lambda.size() != m.r_grid.size())
      throw domain_error("density matrix rows do not match the radial grid");
    for (std::size_t i = 0; i < m.r_grid.size(); ++i) {
      if (!(m.r_grid[i] > 0.0)) throw domain_error("tabulated radii must be positive");
      if (i > 0 && !(m.r_grid[i] > m.r_grid[i - 1]))
        throw domain_error("tabulated radii must be strictly increasing");
      if (m.lambda[i].size() != m.omega_labels.size())
        throw domain_error("density matrix columns do not match the angular nodes");
      for (double v : m.lambda[i])
        if (!(v > 0.0)) throw domain_error("tabulated density values must be positive");
    }
    for (double w : m.angular_weights)
      if (!(w > 0.0)) throw domain_error("angular weights must be positive");
  }

  static std::vector<double> tabulated_log_nodes(const TabulatedModel& m) {
    std::vector<double> xs;
    xs.reserve(m.r_grid.size());
    for (double r : m.r_grid) xs.push_back(std::log(r));
    return xs;
  }

  /// log of the angular sum sum_j w_j lambda_ij (* weight_ij when given).
  static std::vector<double> tabulated_log_values(
      const TabulatedModel& m, const std::vector<std::vector<double>>* weight) {
    std::vector<double> ys;
    ys.reserve(m.r_grid.size());
    for (std::size_t i = 0; i < m.r_grid.size(); ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m.angular_weights.size(); ++j) {
        const double w = weight ? (*weight)[i][j] : 1.0;
        acc += m.angular_weights[j] * m.lambda[i][j] * w;
      }
      ys.push_back(std::log(acc));
    }
    return ys;
  }

  friend class RadializedWeight;
  Variant m_;
};

/// Angular average of a weight against a tabulated density: the radial map
/// rho -> sum_j w_j lambda(rho, omega_j) weight(rho, omega_j), interpolated
/// between stored radii in log-log coordinates.
class RadializedWeight {
public:
  RadializedWeight(const SpaceModel& space, const std::vector<std::vector<double>>& weight) {
    const auto* m = space.as<TabulatedModel>();
    if (!m) throw domain_error("radialize_weight needs a tabulated space");
    if (weight.size() != m->r_grid.size())
      throw domain_error("weight matrix rows do not match the radial grid");
    for (std::size_t i = 0; i < weight.size(); ++i) {
      if (weight[i].size() != m->omega_labels.size())
        throw domain_error("weight matrix columns do not match the angular nodes");
      for (double v : weight[i])
        if (!(v > 0.0)) throw domain_error("weight values must be positive");
    }
    min_r_ = m->r_grid.front();
    max_r_ = m->r_grid.back();
    interp_ = std::make_shared<MonotoneCubic>(SpaceModel::tabulated_log_nodes(*m),
                                              SpaceModel::tabulated_log_values(*m, &weight));
  }

  double min_radius() const { return min_r_; }
  double max_radius() const { return max_r_; }

  double log_value(double rho) const {
    if (!(rho > 0.0)) throw domain_error("radialized weight evaluated at rho <= 0");
    if (rho < min_r_ || rho > max_r_)
      throw extrapolation_error("radialized weight queried outside the stored range");
    return (*interp_)(std::log(rho));
  }

  double value(double rho) const { return std::exp(log_value(rho)); }

private:
  double min_r_;
  double max_r_;
  std::shared_ptr<MonotoneCubic> interp_;
};

inline RadializedWeight radialize_weight(const SpaceModel& space,
                                         const std::vector<std::vector<double>>& weight) {
  return RadializedWeight(space, weight);
}

} // namespace hardy

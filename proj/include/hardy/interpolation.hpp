#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "hardy/errors.hpp"

namespace hardy {

/// Shape-preserving cubic Hermite interpolant on strictly increasing nodes.
///
/// Tangents follow the Butland/Brodlie harmonic-mean rule, which keeps the
/// interpolant monotone wherever the data are and reproduces straight lines
/// exactly. The latter matters here: tabulated densities are interpolated in
/// log-log coordinates, where every pure power law is a straight line.
class MonotoneCubic {
public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size())
      throw domain_error("interpolation nodes and values differ in length");
    if (x_.size() < 2)
      throw domain_error("interpolation needs at least two nodes");
    for (std::size_t i = 1; i < x_.size(); ++i)
      if (!(x_[i] > x_[i - 1]))
        throw domain_error("interpolation nodes must be strictly increasing");
    build_tangents();
  }

  double min_x() const { return x_.front(); }
  double max_x() const { return x_.back(); }

  double operator()(double x) const {
    if (x < x_.front() || x > x_.back())
      throw extrapolation_error("query outside tabulated range");
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) i = 1;
    if (i == x_.size()) i = x_.size() - 1;
    --i;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

private:
  void build_tangents() {
    const std::size_t n = x_.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
    m_.assign(n, 0.0);
    m_[0] = d[0];
    m_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (d[i - 1] * d[i] <= 0.0) {
        m_[i] = 0.0;
      } else {
        // harmonic mean of neighboring secants, weighted by interval length
        const double h0 = x_[i] - x_[i - 1];
        const double h1 = x_[i + 1] - x_[i];
        const double w0 = 2 * h1 + h0;
        const double w1 = h1 + 2 * h0;
        m_[i] = (w0 + w1) / (w0 / d[i - 1] + w1 / d[i]);
      }
    }
  }

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

} // namespace hardy

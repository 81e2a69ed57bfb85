#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "graphkam/errors.hpp"

namespace graphkam::detail {

/// Shape-preserving cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Monotone data yields a monotone interpolant.  Evaluation outside the
/// sample range extrapolates linearly with the boundary derivative.
class Pchip {
 public:
  Pchip() = default;

  Pchip(std::vector<double> x, std::vector<double> y)
      : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 2 || y_.size() != n) fail(errc::bad_input, "pchip needs >= 2 samples");
    for (size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i])) fail(errc::bad_input, "pchip abscissae must increase");

    std::vector<double> h(n - 1), delta(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
    } else {
      for (size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
          d_[i] = 0.0;
        } else {
          double w1 = 2.0 * h[i] + h[i - 1];
          double w2 = h[i] + 2.0 * h[i - 1];
          d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
      }
      d_[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
      d_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front() + d_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + d_.back() * (x - x_.back());
    size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
  }

  double derivative(double x) const {
    if (x <= x_.front()) return d_.front();
    if (x >= x_.back()) return d_.back();
    size_t i = interval(x);
    double h = x_[i + 1] - x_[i];
    double t = (x - x_[i]) / h;
    double dh00 = 6 * t * t - 6 * t;
    double dh10 = 3 * t * t - 4 * t + 1;
    double dh01 = -dh00;
    double dh11 = 3 * t * t - 2 * t;
    return (dh00 * y_[i] + dh01 * y_[i + 1]) / h + dh10 * d_[i] + dh11 * d_[i + 1];
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  static double endpoint_slope(double h0, double h1, double d0, double d1) {
    // one-sided three-point estimate, clipped to preserve shape
    double d = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  }

  size_t interval(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = static_cast<size_t>(it - x_.begin());
    return std::min(std::max<size_t>(i, 1), x_.size() - 1) - 1;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace graphkam::detail

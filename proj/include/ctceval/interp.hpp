// Copyright 2026 The ctceval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTCEVAL_INTERP_HPP_
#define CTCEVAL_INTERP_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ctceval/core_model.hpp"
#include "ctceval/error.hpp"

namespace ctceval {

struct Knot {
  double x;
  double y;
};

/// Shape-preserving piecewise cubic Hermite interpolant.
///
/// Interior slopes use the Fritsch-Carlson weighted harmonic mean of the
/// adjacent secants (zero where the secants change sign or vanish). End
/// slopes use the one-sided three-point formula, clamped so that monotone
/// data stays monotone. Evaluation never extrapolates.
class PchipSpline {
 public:
  PchipSpline(std::vector<double> xs, std::vector<double> ys,
              std::vector<double> slopes)
      : xs_(std::move(xs)), ys_(std::move(ys)), slopes_(std::move(slopes)) {}

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& slopes() const { return slopes_; }
  double x_min() const { return xs_.front(); }
  double x_max() const { return xs_.back(); }

  double operator()(double x) const {
    check_domain(x, x);
    const std::size_t k = segment_of(x);
    return segment_value(k, x - xs_[k]);
  }

  // Exact integral of the piecewise cubic over [a, b].
  double integral(double a, double b) const {
    if (!(a < b)) {
      fail(ErrorKind::kDomain, "integration bounds must satisfy a < b");
    }
    check_domain(a, b);
    const std::size_t first = segment_of(a);
    const std::size_t last = segment_of(b);
    double total = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
      const double lo = (k == first ? a : xs_[k]) - xs_[k];
      const double hi = (k == last ? b : xs_[k + 1]) - xs_[k];
      total += segment_antiderivative(k, hi) - segment_antiderivative(k, lo);
    }
    return total;
  }

 private:
  void check_domain(double a, double b) const {
    if (!(a >= xs_.front()) || !(b <= xs_.back())) {
      fail(ErrorKind::kDomain,
           "query [" + std::to_string(a) + ", " + std::to_string(b) +
               "] outside spline domain [" + std::to_string(xs_.front()) +
               ", " + std::to_string(xs_.back()) + "]");
    }
  }

  std::size_t segment_of(double x) const {
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs_.begin());
    k = k == 0 ? 0 : k - 1;
    return std::min(k, xs_.size() - 2);
  }

  // Power-basis coefficients of segment k in the local variable u = x - x_k:
  // p(u) = y0 + d0 u + c2 u^2 + c3 u^3.
  void coefficients(std::size_t k, double& c2, double& c3) const {
    const double h = xs_[k + 1] - xs_[k];
    const double secant = (ys_[k + 1] - ys_[k]) / h;
    c2 = (3.0 * secant - 2.0 * slopes_[k] - slopes_[k + 1]) / h;
    c3 = (slopes_[k] + slopes_[k + 1] - 2.0 * secant) / (h * h);
  }

  double segment_value(std::size_t k, double u) const {
    double c2, c3;
    coefficients(k, c2, c3);
    if (u == xs_[k + 1] - xs_[k]) return ys_[k + 1];
    return ys_[k] + u * (slopes_[k] + u * (c2 + u * c3));
  }

  double segment_antiderivative(std::size_t k, double u) const {
    double c2, c3;
    coefficients(k, c2, c3);
    return u * (ys_[k] + u * (slopes_[k] / 2.0 + u * (c2 / 3.0 + u * c3 / 4.0)));
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

namespace internal {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

inline double pchip_end_slope(double h0, double h1, double m0, double m1) {
  double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
  if (sign_of(d) != sign_of(m0)) {
    d = 0.0;
  } else if (sign_of(m0) != sign_of(m1) && std::abs(d) > 3.0 * std::abs(m0)) {
    d = 3.0 * m0;
  }
  return d;
}

}  // namespace internal

inline PchipSpline pchip_fit(std::span<const Knot> knots) {
  const std::size_t n = knots.size();
  if (n < 2) {
    fail(ErrorKind::kFit, "pchip needs at least 2 points, got " +
                              std::to_string(n));
  }
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = knots[i].x;
    ys[i] = knots[i].y;
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      fail(ErrorKind::kFit, "pchip knots must be finite");
    }
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      fail(ErrorKind::kFit, "pchip abscissae must be strictly increasing");
    }
  }

  std::vector<double> h(n - 1), secant(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    secant[k] = (ys[k + 1] - ys[k]) / h[k];
  }

  std::vector<double> slopes(n, 0.0);
  if (n == 2) {
    slopes[0] = slopes[1] = secant[0];
    return PchipSpline(std::move(xs), std::move(ys), std::move(slopes));
  }

  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double left = secant[k - 1];
    const double right = secant[k];
    if (internal::sign_of(left) * internal::sign_of(right) <= 0) {
      slopes[k] = 0.0;
      continue;
    }
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes[k] = (w1 + w2) / (w1 / left + w2 / right);
  }
  slopes[0] = internal::pchip_end_slope(h[0], h[1], secant[0], secant[1]);
  slopes[n - 1] = internal::pchip_end_slope(h[n - 2], h[n - 3], secant[n - 2],
                                            secant[n - 3]);
  return PchipSpline(std::move(xs), std::move(ys), std::move(slopes));
}

inline double pchip_eval(const PchipSpline& spline, double x) {
  return spline(x);
}

inline double pchip_integral(const PchipSpline& spline, double a, double b) {
  return spline.integral(a, b);
}

/// Points strictly between two RD samples, evenly spaced in log-rate, with
/// quality linear in log-rate. Every returned point is marked interpolated
/// and carries the lower endpoint's qp.
inline std::vector<RDPoint> densify_log_rate(const RDPoint& low,
                                             const RDPoint& high,
                                             int n_intermediate) {
  if (n_intermediate < 0) {
    fail(ErrorKind::kArgument, "intermediate count must be non-negative");
  }
  if (!(low.bitrate_kbps > 0.0) || !(low.bitrate_kbps < high.bitrate_kbps)) {
    fail(ErrorKind::kArgument,
         "densification needs 0 < low rate < high rate");
  }
  const double log_low = std::log(low.bitrate_kbps);
  const double log_step =
      (std::log(high.bitrate_kbps) - log_low) / (n_intermediate + 1);
  const double quality_step =
      (high.quality - low.quality) / (n_intermediate + 1);

  std::vector<RDPoint> out;
  out.reserve(static_cast<std::size_t>(n_intermediate));
  for (int k = 1; k <= n_intermediate; ++k) {
    RDPoint p;
    p.qp = low.qp;
    p.bitrate_kbps = std::exp(log_low + k * log_step);
    p.quality = low.quality == high.quality ? low.quality
                                            : low.quality + k * quality_step;
    p.interpolated = true;
    out.push_back(p);
  }
  return out;
}

}  // namespace ctceval

#endif  // CTCEVAL_INTERP_HPP_

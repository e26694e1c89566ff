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

// Reference implementations used only by tests. They are written from the
// textbook definitions, deliberately without sharing code with the library.

#ifndef CTCEVAL_TESTS_ORACLE_HPP_
#define CTCEVAL_TESTS_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

// Monotone cubic Hermite slopes: weighted harmonic mean in the interior,
// three-point one-sided formula at the ends with the usual clamping.
inline std::vector<double> monotone_slopes(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), del(n - 1), d(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    del[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) return {del[0], del[0]};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (del[i - 1] * del[i] <= 0.0) continue;
    const double w1 = 2 * h[i] + h[i - 1];
    const double w2 = h[i] + 2 * h[i - 1];
    d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
  }
  auto sgn = [](double v) { return (v > 0) - (v < 0); };
  auto end = [&](double h0, double h1, double m0, double m1) {
    const double s = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (sgn(s) != sgn(m0)) return 0.0;
    if (sgn(m0) != sgn(m1) && std::abs(s) > std::abs(3 * m0)) return 3 * m0;
    return s;
  };
  d[0] = end(h[0], h[1], del[0], del[1]);
  d[n - 1] = end(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
  return d;
}

// Evaluates the Hermite interpolant through the standard basis functions.
struct Hermite {
  std::vector<double> x, y, d;

  Hermite(std::vector<double> xs, std::vector<double> ys)
      : x(std::move(xs)), y(std::move(ys)), d(monotone_slopes(x, y)) {}

  double operator()(double t) const {
    std::size_t k = std::upper_bound(x.begin(), x.end(), t) - x.begin();
    k = std::clamp<std::size_t>(k, 1, x.size() - 1) - 1;
    const double h = x[k + 1] - x[k];
    const double s = (t - x[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y[k] + h10 * h * d[k] + h01 * y[k + 1] + h11 * h * d[k + 1];
  }
};

// Composite Simpson rule on `n` (even) subintervals.
template <typename F>
double simpson(const F& f, double a, double b, int n = 100000) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

struct Curve {
  std::vector<double> rates;    // kbps, increasing
  std::vector<double> quality;  // increasing
};

// Bjontegaard rate delta from the textbook definition, via quadrature.
inline double bd_rate(const Curve& anchor, const Curve& test, int n = 100000) {
  auto logs = [](const std::vector<double>& r) {
    std::vector<double> out;
    for (double v : r) out.push_back(std::log(v));
    return out;
  };
  const Hermite fa(anchor.quality, logs(anchor.rates));
  const Hermite ft(test.quality, logs(test.rates));
  const double lo = std::max(anchor.quality.front(), test.quality.front());
  const double hi = std::min(anchor.quality.back(), test.quality.back());
  const double gap = simpson([&](double q) { return ft(q) - fa(q); }, lo, hi, n) / (hi - lo);
  return std::exp(gap) - 1.0;
}

// Random strictly increasing RD curve with `n` points.
inline Curve random_curve(std::mt19937_64& rng, int n = 6) {
  std::uniform_real_distribution<double> step_r(0.15, 0.9), step_q(0.3, 3.0), base(50, 5000),
      qbase(25, 40);
  Curve c;
  double lr = std::log(base(rng)), q = qbase(rng);
  for (int i = 0; i < n; ++i) {
    c.rates.push_back(std::exp(lr));
    c.quality.push_back(q);
    lr += step_r(rng);
    q += step_q(rng);
  }
  return c;
}

}  // namespace oracle

#endif  // CTCEVAL_TESTS_ORACLE_HPP_

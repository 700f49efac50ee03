// Copyright 2026 The diatom authors.
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

#include "diatom/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace diatom {

Scalar log_sum_exp(const Eigen::Ref<const Vector>& x) {
  const Scalar m = x.maxCoeff();
  return m + std::log((x.array() - m).exp().sum());
}

Vector softmax(const Eigen::Ref<const Vector>& x) {
  const Scalar m = x.maxCoeff();
  Vector e = (x.array() - m).exp();
  return e / e.sum();
}

Scalar js_divergence(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("js_divergence: size mismatch");
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    const double pi = p[i], qi = q[i];
    const double mi = 0.5 * (pi + qi);
    if (pi > 0.0) acc += 0.5 * pi * std::log2(pi / mi);
    if (qi > 0.0) acc += 0.5 * qi * std::log2(qi / mi);
  }
  return std::clamp(acc, 0.0, 1.0);
}

Scalar total_variation(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  return 0.5 * (p - q).lpNorm<1>();
}

Scalar kendall_tau_b(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau_b: size mismatch");
  const std::size_t n = x.size();
  long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Scalar dx = x[i] - x[j];
      const Scalar dy = y[i] - y[j];
      if (dx == 0.0 && dy == 0.0) {
        ++ties_x;
        ++ties_y;
      } else if (dx == 0.0) {
        ++ties_x;
      } else if (dy == 0.0) {
        ++ties_y;
      } else if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - ties_x)) *
                       std::sqrt(static_cast<double>(n0 - ties_y));
  if (denom == 0.0) return 0.0;
  return static_cast<double>(concordant - discordant) / denom;
}

Scalar pearson_correlation(const Eigen::Ref<const Vector>& x,
                           const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("pearson_correlation: need two same-length series");
  }
  const Vector xc = x.array() - x.mean();
  const Vector yc = y.array() - y.mean();
  const Scalar denom = std::sqrt(xc.squaredNorm() * yc.squaredNorm());
  if (denom == 0.0) return 0.0;
  return xc.dot(yc) / denom;
}

Scalar ols_slope(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("ols_slope: need two same-length series");
  }
  const Vector xc = x.array() - x.mean();
  const Scalar sxx = xc.squaredNorm();
  if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate x");
  return xc.dot(y) / sxx;
}

}  // namespace diatom

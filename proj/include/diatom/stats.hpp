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

#pragma once

#include <vector>

#include "diatom/types.hpp"

namespace diatom {

// log(sum(exp(x))) with max-subtraction.
Scalar log_sum_exp(const Eigen::Ref<const Vector>& x);

// Numerically stabilized softmax.
Vector softmax(const Eigen::Ref<const Vector>& x);

// Jensen-Shannon divergence, base 2, in [0, 1]. Inputs are probability
// vectors; zero entries are handled as 0 log 0 = 0.
Scalar js_divergence(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q);

// Total variation distance, 0.5 * l1.
Scalar total_variation(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q);

// Kendall tau-b between two rank assignments over the same item set; ties
// allowed in either ranking. Returns 0 when a ranking is all tied.
Scalar kendall_tau_b(const std::vector<Scalar>& x, const std::vector<Scalar>& y);

Scalar pearson_correlation(const Eigen::Ref<const Vector>& x,
                           const Eigen::Ref<const Vector>& y);

// Ordinary least-squares slope of y on x.
Scalar ols_slope(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

}  // namespace diatom

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

#include <string>
#include <vector>

#include "diatom/lda.hpp"
#include "diatom/types.hpp"

namespace diatom {

// Per-year topic shares: values.row(i) is the length-K simplex for years[i].
// Years without documents are absent, never zero-filled.
struct ProminenceSeries {
  std::vector<int> years;
  Matrix values;                        // |years| x K
  std::vector<std::int64_t> doc_counts; // |D_y| per year

  Index n_topics() const { return values.cols(); }
};

// A hand-curated group of topics treated as one discourse.
struct TopicCluster {
  std::string name;
  std::vector<Index> members;
};

// Yearly topic share: the per-topic theta mass of a year's documents divided
// by the total theta mass over all topics of that year. Because each theta
// sums to one the denominator equals the document count, so the result also
// equals the per-year mean theta; both routes are computed and must agree to
// 1e-9, which surfaces any upstream normalization bug here.
ProminenceSeries topic_prominence(const std::vector<Theta>& thetas);

// Per-year sum of the member topics' shares; in [0, 1].
Vector cluster_prominence(const ProminenceSeries& series, const TopicCluster& cluster);

enum class TrendDirection { declining, flat, rising };

std::string to_string(TrendDirection d);

struct TrendSummary {
  Scalar slope_per_year = 0.0;
  TrendDirection direction = TrendDirection::flat;
};

// OLS slope over (year, value); direction label uses a 1e-5/year tolerance.
// Needs at least three years.
TrendSummary trend_summary(const std::vector<int>& years, const Vector& values);

}  // namespace diatom

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

#include "diatom/prominence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "diatom/stats.hpp"

namespace diatom {

namespace {
constexpr Scalar kSimplexTol = 1e-6;
constexpr Scalar kAgreementTol = 1e-9;
constexpr Scalar kTrendTol = 1e-5;
}  // namespace

ProminenceSeries topic_prominence(const std::vector<Theta>& thetas) {
  if (thetas.empty()) throw std::invalid_argument("topic_prominence: no thetas");
  const Index n_topics = thetas.front().weights.size();

  std::map<int, std::vector<const Theta*>> by_year;
  for (const auto& th : thetas) {
    if (th.weights.size() != n_topics) {
      throw std::invalid_argument("topic_prominence: inconsistent topic counts");
    }
    if (std::abs(th.weights.sum() - 1.0) > kSimplexTol || th.weights.minCoeff() < 0.0) {
      throw std::runtime_error("topic_prominence: document " + th.doc_id +
                               " has a non-simplex theta");
    }
    by_year[th.year].push_back(&th);
  }

  ProminenceSeries series;
  series.years.reserve(by_year.size());
  series.doc_counts.reserve(by_year.size());
  series.values.resize(static_cast<Index>(by_year.size()), n_topics);

  Index row = 0;
  for (auto& [year, docs] : by_year) {
    // Fixed summation order for bit-reproducibility.
    std::sort(docs.begin(), docs.end(),
              [](const Theta* a, const Theta* b) { return a->doc_id < b->doc_id; });
    Vector numerator = Vector::Zero(n_topics);
    Scalar denominator = 0.0;
    for (const Theta* th : docs) {
      numerator += th->weights;
      denominator += th->weights.sum();
    }
    const Vector share = numerator / denominator;
    // The denominator is redundant for normalized thetas; check the
    // agreement with the plain per-year mean instead of assuming it.
    const Vector mean = numerator / static_cast<Scalar>(docs.size());
    if ((share - mean).cwiseAbs().maxCoeff() > kAgreementTol) {
      throw std::runtime_error(
          "topic_prominence: normalized share deviates from the yearly mean; "
          "upstream thetas are not normalized");
    }
    series.years.push_back(year);
    series.doc_counts.push_back(static_cast<std::int64_t>(docs.size()));
    series.values.row(row++) = share.transpose();
  }
  return series;
}

Vector cluster_prominence(const ProminenceSeries& series, const TopicCluster& cluster) {
  if (cluster.members.empty()) {
    throw std::invalid_argument("cluster_prominence: cluster " + cluster.name + " is empty");
  }
  Vector out = Vector::Zero(static_cast<Index>(series.years.size()));
  for (Index k : cluster.members) {
    if (k < 0 || k >= series.n_topics()) {
      throw std::out_of_range("cluster_prominence: topic index " + std::to_string(k) +
                              " out of range in cluster " + cluster.name);
    }
    out += series.values.col(k);
  }
  return out;
}

std::string to_string(TrendDirection d) {
  switch (d) {
    case TrendDirection::declining: return "declining";
    case TrendDirection::rising: return "rising";
    default: return "flat";
  }
}

TrendSummary trend_summary(const std::vector<int>& years, const Vector& values) {
  if (years.size() < 3) {
    throw std::invalid_argument("trend_summary: need at least three years");
  }
  if (static_cast<Index>(years.size()) != values.size()) {
    throw std::invalid_argument("trend_summary: years/values size mismatch");
  }
  Vector x(values.size());
  for (Index i = 0; i < x.size(); ++i) x[i] = static_cast<Scalar>(years[static_cast<std::size_t>(i)]);
  TrendSummary out;
  out.slope_per_year = ols_slope(x, values);
  if (out.slope_per_year > kTrendTol) {
    out.direction = TrendDirection::rising;
  } else if (out.slope_per_year < -kTrendTol) {
    out.direction = TrendDirection::declining;
  } else {
    out.direction = TrendDirection::flat;
  }
  return out;
}

}  // namespace diatom

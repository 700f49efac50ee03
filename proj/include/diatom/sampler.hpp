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

#include <cstdint>
#include <string>
#include <vector>

#include "diatom/corpus.hpp"

namespace diatom {

enum class SampleUnit { articles, tokens };

SampleUnit parse_sample_unit(const std::string& name);
std::string to_string(SampleUnit unit);

struct SamplePlan {
  SampleUnit unit = SampleUnit::tokens;
  std::int64_t per_year_budget = 0;
  std::uint64_t seed = 0;
};

// Draws a per-year budgeted subset. Years at or under budget are kept whole;
// over-budget years are drawn uniformly without replacement until the budget
// is reached. In token mode the final document may push the year past the
// budget, so per-year token mass lands in [budget, budget + max_doc_len).
// Each year uses its own stream derived from (seed, year), and the output is
// sorted by (year, doc_id).
std::vector<BowDocument> balanced_sample(const std::vector<BowDocument>& docs,
                                         const SamplePlan& plan);

struct YearSampleStats {
  int year = 0;
  std::int64_t kept_articles = 0;
  std::int64_t kept_tokens = 0;
  double kept_fraction = 0.0;  // kept token mass / original token mass
};

// Per-year retention accounting. Throws if the sampled set is not a subset
// of the original (by document id).
std::vector<YearSampleStats> sample_report(const std::vector<BowDocument>& original,
                                           const std::vector<BowDocument>& sampled);

}  // namespace diatom

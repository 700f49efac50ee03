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

#include "diatom/sampler.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "diatom/rng.hpp"

namespace diatom {

SampleUnit parse_sample_unit(const std::string& name) {
  if (name == "articles") return SampleUnit::articles;
  if (name == "tokens") return SampleUnit::tokens;
  throw std::invalid_argument("unknown sample unit: " + name);
}

std::string to_string(SampleUnit unit) {
  return unit == SampleUnit::articles ? "articles" : "tokens";
}

std::vector<BowDocument> balanced_sample(const std::vector<BowDocument>& docs,
                                         const SamplePlan& plan) {
  if (plan.per_year_budget <= 0) {
    throw std::invalid_argument("balanced_sample: budget must be positive");
  }

  std::map<int, std::vector<const BowDocument*>> by_year;
  for (const auto& d : docs) by_year[d.year].push_back(&d);

  std::vector<BowDocument> out;
  for (auto& [year, year_docs] : by_year) {
    // Canonical order before the shuffle so input permutations do not matter.
    std::sort(year_docs.begin(), year_docs.end(),
              [](const BowDocument* a, const BowDocument* b) { return a->doc_id < b->doc_id; });

    std::int64_t mass = 0;
    if (plan.unit == SampleUnit::articles) {
      mass = static_cast<std::int64_t>(year_docs.size());
    } else {
      for (const auto* d : year_docs) mass += d->token_total;
    }

    std::vector<const BowDocument*> kept;
    if (mass <= plan.per_year_budget) {
      kept = year_docs;
    } else {
      auto eng = rng::make_engine(
          rng::fold(plan.seed, static_cast<std::uint64_t>(static_cast<std::int64_t>(year))));
      rng::shuffle(eng, year_docs);
      std::int64_t taken = 0;
      for (const auto* d : year_docs) {
        kept.push_back(d);
        taken += plan.unit == SampleUnit::articles ? 1 : d->token_total;
        if (taken >= plan.per_year_budget) break;
      }
    }
    std::sort(kept.begin(), kept.end(),
              [](const BowDocument* a, const BowDocument* b) { return a->doc_id < b->doc_id; });
    for (const auto* d : kept) out.push_back(*d);
  }
  return out;
}

std::vector<YearSampleStats> sample_report(const std::vector<BowDocument>& original,
                                           const std::vector<BowDocument>& sampled) {
  std::unordered_set<std::string> original_ids;
  original_ids.reserve(original.size());
  for (const auto& d : original) original_ids.insert(d.doc_id);
  for (const auto& d : sampled) {
    if (!original_ids.count(d.doc_id)) {
      throw std::runtime_error("sample_report: sampled document " + d.doc_id +
                               " is not part of the original corpus");
    }
  }

  std::map<int, std::pair<std::int64_t, std::int64_t>> original_mass;  // year -> (articles, tokens)
  for (const auto& d : original) {
    auto& m = original_mass[d.year];
    m.first += 1;
    m.second += d.token_total;
  }

  std::map<int, YearSampleStats> by_year;
  for (const auto& [year, mass] : original_mass) {
    (void)mass;
    by_year[year].year = year;
  }
  for (const auto& d : sampled) {
    auto& st = by_year[d.year];
    st.kept_articles += 1;
    st.kept_tokens += d.token_total;
  }
  std::vector<YearSampleStats> out;
  out.reserve(by_year.size());
  for (auto& [year, st] : by_year) {
    const auto& m = original_mass[year];
    st.kept_fraction = m.second == 0 ? 0.0
                                     : static_cast<double>(st.kept_tokens) /
                                           static_cast<double>(m.second);
    out.push_back(st);
  }
  return out;
}

}  // namespace diatom

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

#include <doctest.h>

#include <map>
#include <set>

#include "diatom/rng.hpp"
#include "diatom/sampler.hpp"

using namespace diatom;

namespace {

BowDocument bow_of(std::string id, int year, std::int64_t tokens) {
  BowDocument b;
  b.doc_id = std::move(id);
  b.year = year;
  b.counts = {{0, tokens}};
  b.token_total = tokens;
  return b;
}

std::vector<BowDocument> year_docs(int year, int n, std::int64_t len, const char* prefix) {
  std::vector<BowDocument> docs;
  for (int i = 0; i < n; ++i) {
    char id[64];
    std::snprintf(id, sizeof(id), "%s%04d-%04d", prefix, year, i);
    docs.push_back(bow_of(id, year, len));
  }
  return docs;
}

std::vector<BowDocument> random_imbalanced_corpus(std::uint64_t seed) {
  auto eng = rng::make_engine(seed);
  std::vector<BowDocument> docs;
  for (int y = 1860; y < 1870; ++y) {
    const int n = 5 + static_cast<int>(rng::uniform_below(eng, 120));
    for (int i = 0; i < n; ++i) {
      char id[64];
      std::snprintf(id, sizeof(id), "r%04d-%04d", y, i);
      docs.push_back(bow_of(id, y, 1 + static_cast<std::int64_t>(rng::uniform_below(eng, 60))));
    }
  }
  return docs;
}

}  // namespace

TEST_CASE("under-budget years are kept whole") {
  const auto docs = year_docs(1860, 80, 10, "a");
  SamplePlan plan{SampleUnit::articles, 100, 1};
  const auto sampled = balanced_sample(docs, plan);
  CHECK(sampled.size() == 80);
}

TEST_CASE("article budget caps every over-budget year") {
  auto docs = year_docs(1860, 1000, 10, "a");
  const auto more = year_docs(1861, 100, 10, "b");
  docs.insert(docs.end(), more.begin(), more.end());
  SamplePlan plan{SampleUnit::articles, 100, 1};
  const auto sampled = balanced_sample(docs, plan);
  std::map<int, int> per_year;
  for (const auto& d : sampled) ++per_year[d.year];
  CHECK(per_year[1860] == 100);
  CHECK(per_year[1861] == 100);
}

TEST_CASE("token budget stops at the first document crossing it") {
  auto eng = rng::make_engine(3);
  std::vector<BowDocument> docs;
  std::int64_t max_len = 0;
  for (int i = 0; i < 200; ++i) {
    const auto len = 1 + static_cast<std::int64_t>(rng::uniform_below(eng, 30));
    max_len = std::max(max_len, len);
    char id[32];
    std::snprintf(id, sizeof(id), "t%04d", i);
    docs.push_back(bow_of(id, 1860, len));
  }
  SamplePlan plan{SampleUnit::tokens, 500, 99};
  const auto sampled = balanced_sample(docs, plan);
  std::int64_t mass = 0;
  for (const auto& d : sampled) mass += d.token_total;
  CHECK(mass >= 500);
  CHECK(mass < 500 + max_len);
}

TEST_CASE("token-mode draw replays against an independent shuffle oracle") {
  const auto docs = year_docs(1860, 50, 7, "x");
  SamplePlan plan{SampleUnit::tokens, 100, 424242};
  const auto sampled = balanced_sample(docs, plan);

  // Oracle: derive the same per-year stream, Fisher-Yates a copy of the
  // id-sorted pointers, take the prefix until the budget is reached.
  std::vector<const BowDocument*> pool;
  for (const auto& d : docs) pool.push_back(&d);
  std::sort(pool.begin(), pool.end(),
            [](const BowDocument* a, const BowDocument* b) { return a->doc_id < b->doc_id; });
  auto eng = rng::make_engine(rng::fold(plan.seed, static_cast<std::uint64_t>(1860)));
  for (std::size_t i = pool.size(); i > 1; --i) {
    const auto j = rng::uniform_below(eng, i);
    std::swap(pool[i - 1], pool[j]);
  }
  std::set<std::string> expected;
  std::int64_t mass = 0;
  for (const auto* d : pool) {
    expected.insert(d->doc_id);
    mass += d->token_total;
    if (mass >= plan.per_year_budget) break;
  }
  REQUIRE(sampled.size() == expected.size());
  for (const auto& d : sampled) CHECK(expected.count(d.doc_id) == 1);
}

TEST_CASE("sampling is deterministic and a subset, output ordered by year then id") {
  const auto docs = random_imbalanced_corpus(5);
  SamplePlan plan{SampleUnit::tokens, 700, 7};
  const auto a = balanced_sample(docs, plan);
  const auto b = balanced_sample(docs, plan);
  REQUIRE(a.size() == b.size());
  std::set<std::string> ids;
  for (const auto& d : docs) ids.insert(d.doc_id);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].doc_id == b[i].doc_id);
    CHECK(ids.count(a[i].doc_id) == 1);
    if (i > 0) {
      CHECK((a[i - 1].year < a[i].year ||
             (a[i - 1].year == a[i].year && a[i - 1].doc_id < a[i].doc_id)));
    }
  }
}

TEST_CASE("per-year streams make the draw independent of other years") {
  const auto docs = random_imbalanced_corpus(11);
  std::vector<BowDocument> only_1864;
  for (const auto& d : docs) {
    if (d.year == 1864) only_1864.push_back(d);
  }
  SamplePlan plan{SampleUnit::tokens, 300, 21};
  const auto full = balanced_sample(docs, plan);
  const auto alone = balanced_sample(only_1864, plan);
  std::set<std::string> full_1864;
  for (const auto& d : full) {
    if (d.year == 1864) full_1864.insert(d.doc_id);
  }
  REQUIRE(alone.size() == full_1864.size());
  for (const auto& d : alone) CHECK(full_1864.count(d.doc_id) == 1);
}

TEST_CASE("zero budget is rejected") {
  SamplePlan plan{SampleUnit::tokens, 0, 1};
  CHECK_THROWS_AS(balanced_sample({bow_of("a", 1860, 5)}, plan), std::invalid_argument);
}

TEST_CASE("sample_report on identical inputs reports full retention") {
  const auto docs = year_docs(1860, 10, 5, "a");
  const auto report = sample_report(docs, docs);
  REQUIRE(report.size() == 1);
  CHECK(report[0].kept_articles == 10);
  CHECK(report[0].kept_tokens == 50);
  CHECK(report[0].kept_fraction == doctest::Approx(1.0));
}

TEST_CASE("sample_report rejects a non-subset") {
  const auto original = year_docs(1860, 3, 5, "a");
  const auto foreign = year_docs(1860, 1, 5, "z");
  CHECK_THROWS_AS(sample_report(original, foreign), std::runtime_error);
}

TEST_CASE("balanced token masses stay within one document of each other") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto docs = random_imbalanced_corpus(100 + seed);
    std::int64_t max_len = 0;
    for (const auto& d : docs) max_len = std::max(max_len, d.token_total);
    const std::int64_t budget = 400;
    SamplePlan plan{SampleUnit::tokens, budget, seed};
    const auto sampled = balanced_sample(docs, plan);

    std::map<int, std::int64_t> original_mass, kept_mass;
    for (const auto& d : docs) original_mass[d.year] += d.token_total;
    for (const auto& d : sampled) kept_mass[d.year] += d.token_total;
    for (const auto& [year, mass] : original_mass) {
      if (mass <= budget) {
        CHECK(kept_mass[year] == mass);
      } else {
        CHECK(kept_mass[year] >= budget);
        CHECK(kept_mass[year] < budget + max_len);
      }
    }
  }
}

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

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "diatom/corpus.hpp"
#include "diatom/dtm.hpp"
#include "diatom/lda.hpp"
#include "diatom/types.hpp"

namespace diatom {

// Words x slices view of one evolving topic. Cell values are plain
// per-slice word probabilities; the relevance weighting only picks which
// words appear, so heatmaps stay comparable across topics.
struct HeatmapMatrix {
  Index topic = 0;
  std::vector<std::string> words;
  std::vector<std::string> slice_labels;
  Matrix values;  // |words| x T
};

// Word picking rule: per slice, the top_n words by
//   relevance(w, t) = lambda * log p(w|k,t) + (1 - lambda) * log(p(w|k,t) / p(w))
// with p(w) the corpus-wide empirical unigram; the heatmap word set is the
// union over slices, rows ordered by max-over-slices relevance. A zero
// unigram entry for an in-vocabulary word is an error.
HeatmapMatrix saliency_heatmap(const DtmModel& model, const Vocabulary& vocab,
                               const Vector& unigram, Index k, Index top_n, Scalar lambda);

struct OnsetSpec {
  std::vector<Index> words;
  Index slice = 0;  // first slice where the word set is really in use
};

// Quantifies how much a topic chain smears across slices.
struct StretchReport {
  Index topic = 0;
  Vector adjacent_js;         // T-1, base-2 JS between neighbours
  Scalar endpoint_js = 0.0;   // JS(first, last)
  Vector top_word_rank_corr;  // T-1, Kendall tau-b over adjacent top-N lists
  // Mean pre-onset probability mass on the onset word set. This is a
  // diatom-defined stretching measure, not a published statistic.
  std::optional<Scalar> onset_leakage;
};

StretchReport stretch_score(const DtmModel& model, Index k, Index top_n,
                            const std::optional<OnsetSpec>& onset = std::nullopt);

struct TopicMatch {
  // divergence(i, j) = JS(static topic i, time-averaged chain topic j).
  Matrix divergence;
  // All pairs sorted by ascending divergence.
  std::vector<std::tuple<Index, Index, Scalar>> ranked;
  // Greedy one-to-one suggestion; candidates only, the two model families
  // cannot be aligned in any other way than manual interpretation by domain
  // experts.
  std::vector<std::pair<Index, Index>> greedy;
};

TopicMatch match_topics(const LdaModel& lda, const DtmModel& dtm);

// Word indices by descending probability; ties break lexicographically on
// the word string.
std::vector<Index> top_words(const Eigen::Ref<const Vector>& dist, const Vocabulary& vocab,
                             Index n);

// Same ordering with index tie-break, for callers without a vocabulary.
std::vector<Index> top_word_indices(const Eigen::Ref<const Vector>& dist, Index n);

}  // namespace diatom

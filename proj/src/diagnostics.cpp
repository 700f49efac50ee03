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

#include "diatom/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "diatom/stats.hpp"

namespace diatom {

namespace {

std::vector<Index> ordered_indices(const Eigen::Ref<const Vector>& dist,
                                   const Vocabulary* vocab) {
  std::vector<Index> idx(static_cast<std::size_t>(dist.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Index>(i);
  std::sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    if (vocab) return vocab->word(a) < vocab->word(b);
    return a < b;
  });
  return idx;
}

}  // namespace

std::vector<Index> top_words(const Eigen::Ref<const Vector>& dist, const Vocabulary& vocab,
                             Index n) {
  if (n > dist.size()) throw std::invalid_argument("top_words: n exceeds vocabulary size");
  auto idx = ordered_indices(dist, &vocab);
  idx.resize(static_cast<std::size_t>(n));
  return idx;
}

std::vector<Index> top_word_indices(const Eigen::Ref<const Vector>& dist, Index n) {
  if (n > dist.size()) throw std::invalid_argument("top_word_indices: n exceeds size");
  auto idx = ordered_indices(dist, nullptr);
  idx.resize(static_cast<std::size_t>(n));
  return idx;
}

HeatmapMatrix saliency_heatmap(const DtmModel& model, const Vocabulary& vocab,
                               const Vector& unigram, Index k, Index top_n, Scalar lambda) {
  const Index t_slices = model.n_slices();
  const Index v_size = model.vocab_size();
  if (vocab.hash() != model.vocab_hash) {
    throw std::runtime_error("saliency_heatmap: vocabulary checksum does not match the model");
  }
  if (unigram.size() != v_size) {
    throw std::invalid_argument("saliency_heatmap: unigram length mismatch");
  }
  if (top_n < 1 || top_n > v_size) {
    throw std::invalid_argument("saliency_heatmap: top_n out of range");
  }
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("saliency_heatmap: lambda must be in [0, 1]");
  }

  Matrix prob(t_slices, v_size);       // p(w|k,t)
  Matrix relevance(t_slices, v_size);
  for (Index t = 0; t < t_slices; ++t) {
    prob.row(t) = topic_at_slice(model, k, t).transpose();
    for (Index v = 0; v < v_size; ++v) {
      const Scalar p = prob(t, v);
      if (!(unigram[v] > 0.0)) {
        throw std::runtime_error("saliency_heatmap: in-vocabulary word \"" + vocab.word(v) +
                                 "\" has zero corpus probability");
      }
      const Scalar logp = std::log(p);
      relevance(t, v) = lambda * logp + (1.0 - lambda) * (logp - std::log(unigram[v]));
    }
  }

  // Union of per-slice top lists; ranked by the best relevance any slice
  // gives the word.
  std::vector<char> selected(static_cast<std::size_t>(v_size), 0);
  for (Index t = 0; t < t_slices; ++t) {
    auto order = ordered_indices(relevance.row(t).transpose(), &vocab);
    for (Index i = 0; i < top_n; ++i) selected[static_cast<std::size_t>(order[i])] = 1;
  }
  Vector best = relevance.colwise().maxCoeff().transpose();
  std::vector<Index> rows;
  for (Index v = 0; v < v_size; ++v) {
    if (selected[static_cast<std::size_t>(v)]) rows.push_back(v);
  }
  std::sort(rows.begin(), rows.end(), [&](Index a, Index b) {
    if (best[a] != best[b]) return best[a] > best[b];
    return vocab.word(a) < vocab.word(b);
  });

  HeatmapMatrix out;
  out.topic = k;
  out.slice_labels = model.slice_labels;
  out.values.resize(static_cast<Index>(rows.size()), t_slices);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.words.push_back(vocab.word(rows[r]));
    out.values.row(static_cast<Index>(r)) = prob.col(rows[r]).transpose();
  }
  return out;
}

StretchReport stretch_score(const DtmModel& model, Index k, Index top_n,
                            const std::optional<OnsetSpec>& onset) {
  const Index t_slices = model.n_slices();
  if (t_slices < 2) throw std::invalid_argument("stretch_score: need at least two slices");
  if (top_n < 1 || top_n > model.vocab_size()) {
    throw std::invalid_argument("stretch_score: top_n out of range");
  }

  StretchReport report;
  report.topic = k;
  report.adjacent_js = chain_smoothness(model, k);
  report.endpoint_js =
      js_divergence(topic_at_slice(model, k, 0), topic_at_slice(model, k, t_slices - 1));

  report.top_word_rank_corr.resize(t_slices - 1);
  const Scalar absent_rank = static_cast<Scalar>(top_n);  // shared tie below the lists
  std::vector<Index> prev_top = top_word_indices(topic_at_slice(model, k, 0), top_n);
  for (Index t = 1; t < t_slices; ++t) {
    std::vector<Index> cur_top = top_word_indices(topic_at_slice(model, k, t), top_n);
    std::map<Index, std::pair<Scalar, Scalar>> ranks;  // word -> (rank prev, rank cur)
    for (Index i = 0; i < top_n; ++i) {
      ranks.emplace(prev_top[static_cast<std::size_t>(i)],
                    std::make_pair(absent_rank, absent_rank));
      ranks.emplace(cur_top[static_cast<std::size_t>(i)],
                    std::make_pair(absent_rank, absent_rank));
    }
    for (Index i = 0; i < top_n; ++i) {
      ranks[prev_top[static_cast<std::size_t>(i)]].first = static_cast<Scalar>(i);
      ranks[cur_top[static_cast<std::size_t>(i)]].second = static_cast<Scalar>(i);
    }
    std::vector<Scalar> xs, ys;
    xs.reserve(ranks.size());
    ys.reserve(ranks.size());
    for (const auto& [w, r] : ranks) {
      (void)w;
      xs.push_back(r.first);
      ys.push_back(r.second);
    }
    report.top_word_rank_corr[t - 1] = kendall_tau_b(xs, ys);
    prev_top = std::move(cur_top);
  }

  if (onset) {
    if (onset->slice <= 0 || onset->slice >= t_slices) {
      throw std::invalid_argument("stretch_score: onset slice must be in [1, T-1]");
    }
    Scalar mass = 0.0;
    for (Index t = 0; t < onset->slice; ++t) {
      const Vector topic = topic_at_slice(model, k, t);
      for (Index w : onset->words) {
        if (w < 0 || w >= model.vocab_size()) {
          throw std::out_of_range("stretch_score: onset word index out of range");
        }
        mass += topic[w];
      }
    }
    report.onset_leakage = mass / static_cast<Scalar>(onset->slice);
  }
  return report;
}

TopicMatch match_topics(const LdaModel& lda, const DtmModel& dtm) {
  if (lda.vocab_hash != dtm.vocab_hash) {
    throw std::runtime_error("match_topics: the two models were trained on different "
                             "vocabularies");
  }
  const Index k_lda = lda.n_topics();
  const Index k_dtm = dtm.n_topics();

  Matrix dtm_avg = Matrix::Zero(k_dtm, dtm.vocab_size());
  for (Index t = 0; t < dtm.n_slices(); ++t) {
    for (Index k = 0; k < k_dtm; ++k) {
      dtm_avg.row(k) += topic_at_slice(dtm, k, t).transpose();
    }
  }
  dtm_avg /= static_cast<Scalar>(dtm.n_slices());

  TopicMatch match;
  match.divergence.resize(k_lda, k_dtm);
  for (Index i = 0; i < k_lda; ++i) {
    for (Index j = 0; j < k_dtm; ++j) {
      match.divergence(i, j) =
          js_divergence(lda.phi.row(i).transpose(), dtm_avg.row(j).transpose());
      match.ranked.emplace_back(i, j, match.divergence(i, j));
    }
  }
  std::sort(match.ranked.begin(), match.ranked.end(), [](const auto& a, const auto& b) {
    if (std::get<2>(a) != std::get<2>(b)) return std::get<2>(a) < std::get<2>(b);
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) < std::get<1>(b);
  });

  std::vector<char> used_lda(static_cast<std::size_t>(k_lda), 0);
  std::vector<char> used_dtm(static_cast<std::size_t>(k_dtm), 0);
  for (const auto& [i, j, d] : match.ranked) {
    (void)d;
    if (used_lda[static_cast<std::size_t>(i)] || used_dtm[static_cast<std::size_t>(j)]) continue;
    used_lda[static_cast<std::size_t>(i)] = 1;
    used_dtm[static_cast<std::size_t>(j)] = 1;
    match.greedy.emplace_back(i, j);
  }
  std::sort(match.greedy.begin(), match.greedy.end());
  return match;
}

}  // namespace diatom

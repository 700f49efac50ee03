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

#include <algorithm>
#include <set>

#include "diatom/diagnostics.hpp"
#include "diatom/rng.hpp"
#include "diatom/stats.hpp"
#include "oracles.hpp"

using namespace diatom;

namespace {

Vocabulary vocab_from_words(std::vector<std::string> words) {
  std::vector<std::int64_t> freqs(words.size(), 1);
  return Vocabulary(std::move(words), std::move(freqs), static_cast<std::int64_t>(words.size()));
}

DtmModel hand_model(std::vector<Matrix> beta, std::uint64_t vocab_hash) {
  DtmModel model;
  model.beta_nat = std::move(beta);
  model.sigma2 = 0.01;
  model.alpha = 0.1;
  model.vocab_hash = vocab_hash;
  for (Index t = 0; t < model.n_slices(); ++t) {
    model.slice_labels.push_back(std::to_string(1860 + t));
    model.slice_first_year.push_back(1860 + static_cast<int>(t));
    model.slice_last_year.push_back(1860 + static_cast<int>(t));
  }
  return model;
}

}  // namespace

TEST_CASE("top_words breaks ties lexicographically") {
  // Index order differs from lexicographic order on purpose.
  const auto vocab = vocab_from_words({"pp", "aa", "mm"});
  const Vector uniform = Vector::Constant(3, 1.0 / 3.0);
  const auto top = top_words(uniform, vocab, 3);
  CHECK(vocab.word(top[0]) == "aa");
  CHECK(vocab.word(top[1]) == "mm");
  CHECK(vocab.word(top[2]) == "pp");
}

TEST_CASE("top_words puts the peak first") {
  const auto vocab = vocab_from_words({"aa", "bb", "cc"});
  Vector dist(3);
  dist << 0.2, 0.7, 0.1;
  const auto top = top_words(dist, vocab, 2);
  CHECK(vocab.word(top[0]) == "bb");
  CHECK(vocab.word(top[1]) == "aa");
  CHECK_THROWS_AS(top_words(dist, vocab, 4), std::invalid_argument);
}

TEST_CASE("top_words agrees with a plain sort oracle") {
  auto eng = rng::make_engine(31);
  std::vector<std::string> words;
  for (int i = 0; i < 30; ++i) words.push_back("w" + std::to_string(i));
  const auto vocab = vocab_from_words(words);
  const Vector dist = rng::dirichlet(eng, Vector::Constant(30, 0.5));
  const auto top = top_words(dist, vocab, 30);

  std::vector<Index> expected(30);
  std::iota(expected.begin(), expected.end(), 0);
  std::sort(expected.begin(), expected.end(), [&](Index a, Index b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return vocab.word(a) < vocab.word(b);
  });
  CHECK(top == expected);
}

TEST_CASE("heatmap with lambda=1 degenerates to raw-probability top lists") {
  auto eng = rng::make_engine(37);
  const Index v_size = 20, t_slices = 3, top_n = 4;
  std::vector<std::string> words;
  for (Index i = 0; i < v_size; ++i) words.push_back("w" + std::to_string(i));
  const auto vocab = vocab_from_words(words);
  std::vector<Matrix> beta;
  for (Index t = 0; t < t_slices; ++t) {
    Matrix m(1, v_size);
    for (Index v = 0; v < v_size; ++v) m(0, v) = 3.0 * rng::uniform01(eng);
    beta.push_back(std::move(m));
  }
  const auto model = hand_model(std::move(beta), vocab.hash());
  Vector unigram = rng::dirichlet(eng, Vector::Constant(v_size, 2.0));

  const auto heatmap = saliency_heatmap(model, vocab, unigram, 0, top_n, 1.0);
  std::set<std::string> expected;
  for (Index t = 0; t < t_slices; ++t) {
    const Vector p = topic_at_slice(model, 0, t);
    for (Index idx : top_words(p, vocab, top_n)) expected.insert(vocab.word(idx));
  }
  const std::set<std::string> got(heatmap.words.begin(), heatmap.words.end());
  CHECK(got == expected);
}

TEST_CASE("heatmap cells are the plain slice probabilities") {
  const auto vocab = vocab_from_words({"aa", "bb", "cc", "dd"});
  Matrix b0(1, 4), b1(1, 4);
  b0 << 2.0, 1.0, 0.0, -1.0;
  b1 << 1.0, 2.0, 0.5, -2.0;
  const auto model = hand_model({b0, b1}, vocab.hash());
  const Vector unigram = Vector::Constant(4, 0.25);
  const auto heatmap = saliency_heatmap(model, vocab, unigram, 0, 4, 0.6);
  REQUIRE(heatmap.words.size() == 4);
  for (std::size_t r = 0; r < heatmap.words.size(); ++r) {
    const Index w = *vocab.index_of(heatmap.words[r]);
    CHECK(heatmap.values(static_cast<Index>(r), 0) ==
          doctest::Approx(topic_at_slice(model, 0, 0)[w]).epsilon(1e-15));
    CHECK(heatmap.values(static_cast<Index>(r), 1) ==
          doctest::Approx(topic_at_slice(model, 0, 1)[w]).epsilon(1e-15));
  }
}

TEST_CASE("a word entering the topic shows its largest jump at the onset") {
  const Index v_size = 10, t_slices = 6, t0 = 3;
  std::vector<std::string> words;
  for (Index i = 0; i < v_size; ++i) words.push_back("w" + std::to_string(i));
  const auto vocab = vocab_from_words(words);
  std::vector<Matrix> beta;
  for (Index t = 0; t < t_slices; ++t) {
    Matrix m = Matrix::Zero(1, v_size);
    m(0, 0) = t >= t0 ? 4.0 : -6.0;  // word m = w0 enters at t0
    beta.push_back(std::move(m));
  }
  const auto model = hand_model(std::move(beta), vocab.hash());
  const Vector unigram = Vector::Constant(v_size, 1.0 / static_cast<Scalar>(v_size));
  const auto heatmap = saliency_heatmap(model, vocab, unigram, 0, 3, 0.6);

  const auto row_it = std::find(heatmap.words.begin(), heatmap.words.end(), "w0");
  REQUIRE(row_it != heatmap.words.end());
  const Index row = static_cast<Index>(row_it - heatmap.words.begin());
  Index argmax = 0;
  Scalar best = -1.0;
  for (Index t = 0; t + 1 < t_slices; ++t) {
    const Scalar diff = heatmap.values(row, t + 1) - heatmap.values(row, t);
    if (diff > best) {
      best = diff;
      argmax = t + 1;  // the slice the jump lands on
    }
  }
  CHECK(argmax == t0);
}

TEST_CASE("a constant word gives a constant heatmap row") {
  const auto vocab = vocab_from_words({"aa", "bb"});
  Matrix b(1, 2);
  b << 1.0, 0.0;
  const auto model = hand_model({b, b, b}, vocab.hash());
  const Vector unigram = Vector::Constant(2, 0.5);
  const auto heatmap = saliency_heatmap(model, vocab, unigram, 0, 2, 0.5);
  for (std::size_t r = 0; r < heatmap.words.size(); ++r) {
    CHECK(heatmap.values(static_cast<Index>(r), 0) == heatmap.values(static_cast<Index>(r), 1));
    CHECK(heatmap.values(static_cast<Index>(r), 1) == heatmap.values(static_cast<Index>(r), 2));
  }
}

TEST_CASE("heatmap rejects a zero unigram entry") {
  const auto vocab = vocab_from_words({"aa", "bb"});
  const auto model = hand_model({Matrix::Zero(1, 2)}, vocab.hash());
  Vector unigram(2);
  unigram << 1.0, 0.0;
  CHECK_THROWS_AS(saliency_heatmap(model, vocab, unigram, 0, 1, 0.6), std::runtime_error);
}

TEST_CASE("stretch of a constant chain is all zeros and perfect rank agreement") {
  auto eng = rng::make_engine(41);
  Matrix b(2, 15);
  for (Index k = 0; k < 2; ++k) {
    for (Index v = 0; v < 15; ++v) b(k, v) = 2.0 * rng::uniform01(eng);
  }
  const auto model = hand_model({b, b, b, b}, 0);
  const auto report = stretch_score(model, 1, 5);
  for (Index t = 0; t < report.adjacent_js.size(); ++t) {
    CHECK(report.adjacent_js[t] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(report.top_word_rank_corr[t] == doctest::Approx(1.0));
  }
  CHECK(report.endpoint_js == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_FALSE(report.onset_leakage.has_value());
}

TEST_CASE("stretch onset bounds are enforced") {
  const auto model = hand_model({Matrix::Zero(1, 4), Matrix::Zero(1, 4)}, 0);
  OnsetSpec at_zero{{0, 1}, 0};
  CHECK_THROWS_AS(stretch_score(model, 0, 2, at_zero), std::invalid_argument);
  OnsetSpec beyond{{0, 1}, 2};
  CHECK_THROWS_AS(stretch_score(model, 0, 2, beyond), std::invalid_argument);
  OnsetSpec bad_word{{9}, 1};
  CHECK_THROWS_AS(stretch_score(model, 0, 2, bad_word), std::out_of_range);
}

TEST_CASE("stretch onset leakage averages pre-onset mass") {
  Matrix lo = Matrix::Zero(1, 4), hi = Matrix::Zero(1, 4);
  hi(0, 0) = 3.0;
  const auto model = hand_model({lo, lo, hi, hi}, 0);
  OnsetSpec onset{{0}, 2};
  const auto report = stretch_score(model, 0, 2, onset);
  REQUIRE(report.onset_leakage.has_value());
  CHECK(*report.onset_leakage == doctest::Approx(0.25).epsilon(1e-12));  // uniform rows
}

TEST_CASE("a chain initialized from a static model matches it identically") {
  auto eng = rng::make_engine(43);
  const Index k_topics = 4, v_size = 30;
  LdaModel lda;
  lda.phi.resize(k_topics, v_size);
  for (Index k = 0; k < k_topics; ++k) {
    lda.phi.row(k) = rng::dirichlet(eng, Vector::Constant(v_size, 0.3)).transpose();
  }
  lda.alpha = 0.1;
  lda.beta = 0.01;
  lda.vocab_hash = 777;

  const Matrix beta_init = (lda.phi.array() + 1e-10).log();
  const auto dtm = hand_model({beta_init, beta_init, beta_init}, 777);
  const auto match = match_topics(lda, dtm);
  REQUIRE(match.greedy.size() == static_cast<std::size_t>(k_topics));
  for (Index k = 0; k < k_topics; ++k) {
    CHECK(match.greedy[static_cast<std::size_t>(k)].first == k);
    CHECK(match.greedy[static_cast<std::size_t>(k)].second == k);
    CHECK(match.divergence(k, k) <= 1e-6);
  }
}

TEST_CASE("swapped topics match as a transposition") {
  LdaModel lda;
  lda.phi.resize(2, 4);
  lda.phi << 0.7, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.7;
  lda.vocab_hash = 5;
  Matrix swapped(2, 4);
  swapped.row(0) = ((lda.phi.row(1).array() + 1e-10).log());
  swapped.row(1) = ((lda.phi.row(0).array() + 1e-10).log());
  const auto dtm = hand_model({swapped, swapped}, 5);
  const auto match = match_topics(lda, dtm);
  CHECK(match.greedy[0] == std::make_pair<Index, Index>(0, 1));
  CHECK(match.greedy[1] == std::make_pair<Index, Index>(1, 0));
}

TEST_CASE("divergence table matches the brute-force oracle and is role-symmetric") {
  auto eng = rng::make_engine(47);
  const Index k_topics = 3, v_size = 20;
  LdaModel lda;
  lda.phi.resize(k_topics, v_size);
  for (Index k = 0; k < k_topics; ++k) {
    lda.phi.row(k) = rng::dirichlet(eng, Vector::Constant(v_size, 0.4)).transpose();
  }
  lda.vocab_hash = 9;
  std::vector<Matrix> beta;
  for (int t = 0; t < 3; ++t) {
    Matrix m(k_topics, v_size);
    for (Index k = 0; k < k_topics; ++k) {
      for (Index v = 0; v < v_size; ++v) m(k, v) = 2.0 * (rng::uniform01(eng) - 0.5);
    }
    beta.push_back(std::move(m));
  }
  const auto dtm = hand_model(std::move(beta), 9);
  const auto match = match_topics(lda, dtm);

  Matrix dtm_avg = Matrix::Zero(k_topics, v_size);
  for (Index t = 0; t < 3; ++t) {
    for (Index k = 0; k < k_topics; ++k) dtm_avg.row(k) += topic_at_slice(dtm, k, t).transpose();
  }
  dtm_avg /= 3.0;
  for (Index i = 0; i < k_topics; ++i) {
    for (Index j = 0; j < k_topics; ++j) {
      const Scalar expected =
          oracle::js_longdouble(lda.phi.row(i).transpose(), dtm_avg.row(j).transpose());
      CHECK(std::abs(match.divergence(i, j) - expected) <= 1e-12);
      // Role symmetry of the divergence itself.
      CHECK(js_divergence(lda.phi.row(i).transpose(), dtm_avg.row(j).transpose()) ==
            doctest::Approx(js_divergence(dtm_avg.row(j).transpose(),
                                          lda.phi.row(i).transpose()))
                .epsilon(1e-15));
    }
  }
  // Ranked list is ascending.
  for (std::size_t i = 1; i < match.ranked.size(); ++i) {
    CHECK(std::get<2>(match.ranked[i - 1]) <= std::get<2>(match.ranked[i]));
  }
}

TEST_CASE("match_topics rejects models with different vocabularies") {
  LdaModel lda;
  lda.phi = Matrix::Constant(1, 2, 0.5);
  lda.vocab_hash = 1;
  const auto dtm = hand_model({Matrix::Zero(1, 2)}, 2);
  CHECK_THROWS_AS(match_topics(lda, dtm), std::runtime_error);
}

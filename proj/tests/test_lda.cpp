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

#include "diatom/lda.hpp"
#include "diatom/rng.hpp"
#include "diatom/synthgen.hpp"
#include "oracles.hpp"

using namespace diatom;

namespace {

BowDocument bow_from_counts(std::string id, int year,
                            std::vector<std::pair<Index, std::int64_t>> counts) {
  BowDocument b;
  b.doc_id = std::move(id);
  b.year = year;
  b.counts = std::move(counts);
  for (const auto& [w, c] : b.counts) {
    (void)w;
    b.token_total += c;
  }
  return b;
}

Vocabulary toy_vocab(Index v_size) {
  std::vector<std::string> words;
  std::vector<std::int64_t> freqs;
  for (Index i = 0; i < v_size; ++i) {
    words.push_back("w" + std::to_string(i));
    freqs.push_back(1);
  }
  return Vocabulary(std::move(words), std::move(freqs), v_size);
}

}  // namespace

TEST_CASE("gibbs_conditional with one topic is certain") {
  LdaConfig cfg;
  cfg.n_topics = 1;
  cfg.alpha = 0.5;
  cfg.beta = 0.1;
  Matrix nkw = Matrix::Zero(1, 3);
  Vector nk = Vector::Zero(1), ndk = Vector::Zero(1);
  const Vector p = gibbs_conditional(nkw, nk, ndk, 0, cfg);
  REQUIRE(p.size() == 1);
  CHECK(p[0] == doctest::Approx(1.0));
}

TEST_CASE("gibbs_conditional is symmetric on empty counts") {
  LdaConfig cfg;
  cfg.n_topics = 2;
  cfg.alpha = 0.3;
  cfg.beta = 0.05;
  Matrix nkw = Matrix::Zero(2, 4);
  Vector nk = Vector::Zero(2), ndk = Vector::Zero(2);
  const Vector p = gibbs_conditional(nkw, nk, ndk, 2, cfg);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("gibbs_conditional matches the hand-evaluated formula") {
  LdaConfig cfg;
  cfg.n_topics = 2;
  cfg.alpha = 0.1;
  cfg.beta = 0.1;
  // V = 3, word w = 1, ndk = [1,0], nkw[.][w] = [2,0], nk = [4,1].
  Matrix nkw = Matrix::Zero(2, 3);
  nkw(0, 1) = 2.0;
  Vector nk(2), ndk(2);
  nk << 4.0, 1.0;
  ndk << 1.0, 0.0;
  const Vector p = gibbs_conditional(nkw, nk, ndk, 1, cfg);

  const double u0 = (1.0 + 0.1) * (2.0 + 0.1) / (4.0 + 3 * 0.1);
  const double u1 = (0.0 + 0.1) * (0.0 + 0.1) / (1.0 + 3 * 0.1);
  CHECK(p[0] == doctest::Approx(u0 / (u0 + u1)).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(u1 / (u0 + u1)).epsilon(1e-14));
  CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gibbs_conditional is a simplex for random valid counts") {
  auto eng = rng::make_engine(17);
  LdaConfig cfg;
  cfg.n_topics = 6;
  cfg.alpha = 0.2;
  cfg.beta = 0.05;
  for (int rep = 0; rep < 50; ++rep) {
    Matrix nkw(6, 9);
    Vector nk = Vector::Zero(6), ndk(6);
    for (Index k = 0; k < 6; ++k) {
      for (Index v = 0; v < 9; ++v) {
        nkw(k, v) = static_cast<Scalar>(rng::uniform_below(eng, 5));
        nk[k] += nkw(k, v);
      }
      ndk[k] = static_cast<Scalar>(rng::uniform_below(eng, 4));
    }
    const Vector p = gibbs_conditional(nkw, nk, ndk,
                                       static_cast<Index>(rng::uniform_below(eng, 9)), cfg);
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.minCoeff() >= 0.0);
  }
}

TEST_CASE("gibbs_conditional rejects negative excluded counts") {
  LdaConfig cfg;
  cfg.n_topics = 2;
  Matrix nkw = Matrix::Zero(2, 3);
  Vector nk = Vector::Zero(2), ndk = Vector::Zero(2);
  ndk[0] = -1.0;
  CHECK_THROWS_AS(gibbs_conditional(nkw, nk, ndk, 0, cfg), std::runtime_error);
}

TEST_CASE("train_lda with one topic reproduces the closed form") {
  const auto vocab = toy_vocab(2);
  const std::vector<BowDocument> corpus{bow_from_counts("a", 1860, {{0, 2}, {1, 1}}),
                                        bow_from_counts("b", 1860, {{1, 3}})};
  LdaConfig cfg;
  cfg.n_topics = 1;
  cfg.alpha = 0.5;
  cfg.beta = 0.1;
  cfg.burn_in = 3;
  cfg.samples = 2;
  cfg.thin = 1;
  const auto model = train_lda(corpus, vocab, cfg);
  // n = [2, 4], N = 6, V = 2.
  CHECK(model.phi(0, 0) == doctest::Approx((2.0 + 0.1) / (6.0 + 0.2)).epsilon(1e-15));
  CHECK(model.phi(0, 1) == doctest::Approx((4.0 + 0.1) / (6.0 + 0.2)).epsilon(1e-15));
  CHECK(model.nk[0] == doctest::Approx(6.0));
}

TEST_CASE("train_lda separates two disjoint documents") {
  const auto vocab = toy_vocab(2);
  const std::vector<BowDocument> corpus{bow_from_counts("a", 1860, {{0, 3}}),
                                        bow_from_counts("b", 1860, {{1, 3}})};
  LdaConfig cfg;
  cfg.n_topics = 2;
  cfg.alpha = 0.01;
  cfg.beta = 0.01;
  cfg.burn_in = 200;
  cfg.samples = 100;
  cfg.thin = 1;
  cfg.seed = 3;
  const auto model = train_lda(corpus, vocab, cfg);
  const Index ka = model.phi(0, 0) > model.phi(1, 0) ? 0 : 1;
  CHECK(model.phi(ka, 0) >= 0.95);
  CHECK(model.phi(1 - ka, 1) >= 0.95);
}

TEST_CASE("train_lda keeps count invariants and is seed-deterministic") {
  ScenarioSpec spec;
  spec.n_slices = 1;
  spec.n_topics = 3;
  spec.vocab_size = 30;
  spec.docs_per_slice = 60;
  spec.tokens_per_doc = 25;
  spec.dynamics.assign(3, TopicDynamics{});
  spec.doc_alpha = 0.3;
  spec.seed = 5;
  const auto synth = generate(spec);
  const auto& docs = synth.corpus.slices[0].docs;

  LdaConfig cfg;
  cfg.n_topics = 3;
  cfg.alpha = 0.2;
  cfg.beta = 0.01;
  cfg.burn_in = 30;
  cfg.samples = 10;
  cfg.thin = 2;
  cfg.seed = 11;
  const auto m1 = train_lda(docs, synth.vocab, cfg);
  const auto m2 = train_lda(docs, synth.vocab, cfg);
  CHECK(m1.phi == m2.phi);  // bit-identical

  std::int64_t total_tokens = 0;
  for (const auto& d : docs) total_tokens += d.token_total;
  CHECK(m1.nk.sum() == doctest::Approx(static_cast<double>(total_tokens)));
  for (Index k = 0; k < 3; ++k) {
    CHECK(m1.nkw.row(k).sum() == doctest::Approx(m1.nk[k]));
    CHECK(m1.phi.row(k).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Input permutation does not change the fit: scan order is canonical.
  auto shuffled = docs;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto m3 = train_lda(shuffled, synth.vocab, cfg);
  CHECK(m1.phi == m3.phi);
}

TEST_CASE("train_lda recovers planted topics on a small corpus") {
  ScenarioSpec spec;
  spec.n_slices = 1;
  spec.n_topics = 3;
  spec.vocab_size = 40;
  spec.docs_per_slice = 400;
  spec.tokens_per_doc = 40;
  spec.dynamics.assign(3, TopicDynamics{});
  spec.doc_alpha = 0.2;
  spec.seed = 21;
  const auto synth = generate(spec);

  LdaConfig cfg;
  cfg.n_topics = 3;
  cfg.alpha = 0.2;
  cfg.beta = 0.01;
  cfg.burn_in = 120;
  cfg.samples = 40;
  cfg.thin = 4;
  cfg.seed = 1;
  const auto model = train_lda(synth.corpus.slices[0].docs, synth.vocab, cfg);
  const Scalar tv = oracle::best_permutation_mean_tv(model.phi, synth.phi_star[0]);
  CHECK(tv <= 0.15);
}

TEST_CASE("train_lda rejects empty documents and duplicate ids") {
  const auto vocab = toy_vocab(2);
  LdaConfig cfg;
  cfg.n_topics = 1;
  BowDocument empty;
  empty.doc_id = "e";
  empty.year = 1860;
  CHECK_THROWS_AS(train_lda({empty}, vocab, cfg), std::runtime_error);
  const auto a = bow_from_counts("a", 1860, {{0, 1}});
  CHECK_THROWS_AS(train_lda({a, a}, vocab, cfg), std::runtime_error);
}

TEST_CASE("infer_theta peaks on the only plausible topic") {
  const auto vocab = toy_vocab(2);
  LdaModel model;
  model.phi.resize(2, 2);
  model.phi << 0.9, 0.1, 1e-6, 1.0 - 1e-6;
  model.alpha = 0.01;
  model.beta = 0.01;
  model.vocab_hash = vocab.hash();
  const auto doc = bow_from_counts("d", 1860, {{0, 1}});
  const auto theta = infer_theta(model, vocab, doc, 20, 50, 4);
  CHECK(theta.weights[0] >= 0.9);
  CHECK(theta.weights[1] <= 0.1);
  CHECK_FALSE(theta.uninformed);
}

TEST_CASE("infer_theta returns a flagged uniform for an empty document") {
  const auto vocab = toy_vocab(3);
  LdaModel model;
  model.phi = Matrix::Constant(4, 3, 1.0 / 3.0);
  model.alpha = 0.1;
  model.vocab_hash = vocab.hash();
  BowDocument empty;
  empty.doc_id = "e";
  empty.year = 1860;
  const auto theta = infer_theta(model, vocab, empty, 10, 10, 4);
  CHECK(theta.uninformed);
  for (Index k = 0; k < 4; ++k) CHECK(theta.weights[k] == doctest::Approx(0.25));
}

TEST_CASE("infer_theta weights always form a simplex") {
  auto eng = rng::make_engine(8);
  const auto vocab = toy_vocab(12);
  LdaModel model;
  model.phi.resize(4, 12);
  for (Index k = 0; k < 4; ++k) {
    model.phi.row(k) = rng::dirichlet(eng, Vector::Constant(12, 0.4)).transpose();
  }
  model.alpha = 0.3;
  model.vocab_hash = vocab.hash();
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::pair<Index, std::int64_t>> counts;
    for (Index w = 0; w < 12; ++w) {
      const auto c = rng::uniform_below(eng, 4);
      if (c > 0) counts.emplace_back(w, static_cast<std::int64_t>(c));
    }
    if (counts.empty()) counts.emplace_back(0, 1);
    const auto doc = bow_from_counts("d" + std::to_string(rep), 1860, std::move(counts));
    const auto theta = infer_theta(model, vocab, doc, 15, 20, 99);
    CHECK(theta.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(theta.weights.minCoeff() >= 0.0);
  }
}

TEST_CASE("infer_theta rejects a vocabulary mismatch") {
  const auto vocab = toy_vocab(2);
  const auto other = toy_vocab(3);
  LdaModel model;
  model.phi = Matrix::Constant(2, 2, 0.5);
  model.alpha = 0.1;
  model.vocab_hash = vocab.hash();
  const auto doc = bow_from_counts("d", 1860, {{0, 1}});
  CHECK_THROWS_AS(infer_theta(model, other, doc, 5, 5, 1), std::runtime_error);
}

TEST_CASE("infer result does not depend on document order or threads") {
  ScenarioSpec spec;
  spec.n_slices = 1;
  spec.n_topics = 3;
  spec.vocab_size = 25;
  spec.docs_per_slice = 40;
  spec.tokens_per_doc = 20;
  spec.dynamics.assign(3, TopicDynamics{});
  spec.seed = 6;
  const auto synth = generate(spec);
  const auto& docs = synth.corpus.slices[0].docs;
  LdaConfig cfg;
  cfg.n_topics = 3;
  cfg.alpha = 0.2;
  cfg.burn_in = 20;
  cfg.samples = 10;
  cfg.thin = 1;
  cfg.seed = 2;
  const auto model = train_lda(docs, synth.vocab, cfg);

  const auto serial = infer_thetas(model, synth.vocab, docs, 10, 10, 7, 1);
  const auto parallel = infer_thetas(model, synth.vocab, docs, 10, 10, 7, 4);
  auto reversed_docs = docs;
  std::reverse(reversed_docs.begin(), reversed_docs.end());
  const auto reversed = infer_thetas(model, synth.vocab, reversed_docs, 10, 10, 7, 1);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    CHECK(serial[i].weights == parallel[i].weights);
    CHECK(serial[i].weights == reversed[docs.size() - 1 - i].weights);
  }
}

TEST_CASE("perplexity of the uniform model is the vocabulary size") {
  const Index v_size = 7;
  LdaModel model;
  model.phi = Matrix::Constant(3, v_size, 1.0 / static_cast<Scalar>(v_size));
  model.alpha = 0.1;
  std::vector<BowDocument> docs{bow_from_counts("a", 1860, {{0, 2}, {3, 1}}),
                                bow_from_counts("b", 1860, {{5, 4}})};
  std::vector<Theta> thetas(2);
  for (auto& th : thetas) th.weights = Vector::Constant(3, 1.0 / 3.0);
  CHECK(perplexity(model, docs, thetas) ==
        doctest::Approx(static_cast<double>(v_size)).epsilon(1e-12));
}

TEST_CASE("perplexity of a deterministic corpus approaches 1/phi_max") {
  LdaModel model;
  model.phi.resize(1, 2);
  model.phi << 0.97, 0.03;
  model.alpha = 0.1;
  std::vector<BowDocument> docs{bow_from_counts("a", 1860, {{0, 10}})};
  std::vector<Theta> thetas(1);
  thetas[0].weights = Vector::Constant(1, 1.0);
  CHECK(perplexity(model, docs, thetas) == doctest::Approx(1.0 / 0.97).epsilon(1e-12));
}

TEST_CASE("perplexity decreases across training checkpoints") {
  ScenarioSpec spec;
  spec.n_slices = 1;
  spec.n_topics = 3;
  spec.vocab_size = 30;
  spec.docs_per_slice = 150;
  spec.tokens_per_doc = 30;
  spec.dynamics.assign(3, TopicDynamics{});
  spec.doc_alpha = 0.2;
  spec.seed = 31;
  const auto synth = generate(spec);
  const auto& docs = synth.corpus.slices[0].docs;
  const std::vector<BowDocument> train_docs(docs.begin(), docs.end() - 30);
  const std::vector<BowDocument> held_out(docs.end() - 30, docs.end());

  // Same seed and per-(doc, sweep) streams: a shorter run is a prefix of a
  // longer one, so separate runs give true checkpoints of one trajectory.
  std::vector<Scalar> checkpoints;
  for (Index sweeps : {1, 5, 25, 100}) {
    LdaConfig cfg;
    cfg.n_topics = 3;
    cfg.alpha = 0.2;
    cfg.beta = 0.01;
    cfg.burn_in = sweeps - 1;
    cfg.samples = 1;
    cfg.thin = 1;
    cfg.seed = 13;
    const auto model = train_lda(train_docs, synth.vocab, cfg);
    const auto thetas = infer_thetas(model, synth.vocab, held_out, 20, 20, 3, 1);
    checkpoints.push_back(perplexity(model, held_out, thetas));
  }
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    CHECK(checkpoints[i] <= checkpoints[i - 1] + 1e-9);
  }
}

TEST_CASE("perplexity rejects misaligned inputs") {
  LdaModel model;
  model.phi = Matrix::Constant(1, 2, 0.5);
  CHECK_THROWS_AS(perplexity(model, {bow_from_counts("a", 1860, {{0, 1}})}, {}),
                  std::invalid_argument);
}

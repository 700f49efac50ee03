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

#include "diatom/lda.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <unordered_set>

#include "diatom/rng.hpp"

namespace diatom {

namespace {

// Unnormalized conditional into a preallocated buffer; returns the total.
// Shared by the public gibbs_conditional and the training sweep.
template <typename NkwExpr, typename NkExpr, typename NdkExpr>
Scalar conditional_into(const NkwExpr& nkw, const NkExpr& nk, const NdkExpr& ndk,
                        Index word, Scalar alpha, Scalar beta, Scalar v_beta,
                        Vector& out) {
  const Index k_topics = nk.size();
  Scalar total = 0.0;
  for (Index k = 0; k < k_topics; ++k) {
    const Scalar p = (ndk(k) + alpha) * (nkw(k, word) + beta) / (nk(k) + v_beta);
    out[k] = p;
    total += p;
  }
  return total;
}

std::vector<Index> expand_tokens(const BowDocument& doc) {
  std::vector<Index> tokens;
  tokens.reserve(static_cast<std::size_t>(doc.token_total));
  for (const auto& [word, count] : doc.counts) {
    for (std::int64_t c = 0; c < count; ++c) tokens.push_back(word);
  }
  return tokens;
}

}  // namespace

LdaConfig LdaConfig::defaults(Index k) {
  LdaConfig cfg;
  cfg.n_topics = k;
  cfg.alpha = 50.0 / static_cast<Scalar>(k);
  return cfg;
}

void LdaConfig::validate() const {
  if (n_topics < 1) throw std::invalid_argument("lda: K must be >= 1");
  if (!(alpha > 0.0)) throw std::invalid_argument("lda: alpha must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("lda: beta must be > 0");
  if (burn_in < 0) throw std::invalid_argument("lda: burn_in must be >= 0");
  if (samples < 1) throw std::invalid_argument("lda: samples must be >= 1");
  if (thin < 1) throw std::invalid_argument("lda: thin must be >= 1");
}

Vector gibbs_conditional(const Eigen::Ref<const Matrix>& nkw_excl,
                         const Eigen::Ref<const Vector>& nk_excl,
                         const Eigen::Ref<const Vector>& ndk_excl, Index word,
                         const LdaConfig& cfg) {
  cfg.validate();
  const Index k_topics = nk_excl.size();
  if (nkw_excl.rows() != k_topics || ndk_excl.size() != k_topics) {
    throw std::invalid_argument("gibbs_conditional: count shape mismatch");
  }
  if (word < 0 || word >= nkw_excl.cols()) {
    throw std::invalid_argument("gibbs_conditional: word index out of range");
  }
  for (Index k = 0; k < k_topics; ++k) {
    if (ndk_excl[k] < 0.0 || nk_excl[k] < 0.0 || nkw_excl(k, word) < 0.0) {
      throw std::runtime_error("gibbs_conditional: negative excluded count");
    }
  }
  Vector out(k_topics);
  const Scalar v_beta = static_cast<Scalar>(nkw_excl.cols()) * cfg.beta;
  const Scalar total =
      conditional_into(nkw_excl, nk_excl, ndk_excl, word, cfg.alpha, cfg.beta, v_beta, out);
  out /= total;
  return out;
}

LdaModel train_lda(const std::vector<BowDocument>& corpus, const Vocabulary& vocab,
                   const LdaConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw std::invalid_argument("train_lda: empty corpus");

  const Index n_topics = cfg.n_topics;
  const Index v_size = vocab.size();

  // Canonical scan order; per-(doc, sweep) streams make the fitted model
  // independent of the input permutation.
  std::vector<const BowDocument*> docs(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) docs[i] = &corpus[i];
  std::sort(docs.begin(), docs.end(),
            [](const BowDocument* a, const BowDocument* b) { return a->doc_id < b->doc_id; });
  {
    std::unordered_set<std::string> ids;
    for (const auto* d : docs) {
      if (d->empty()) {
        throw std::runtime_error("train_lda: document " + d->doc_id +
                                 " is empty; filter empty documents upstream");
      }
      if (!ids.insert(d->doc_id).second) {
        throw std::runtime_error("train_lda: duplicate document id " + d->doc_id);
      }
    }
  }

  const std::size_t n_docs = docs.size();
  std::vector<std::vector<Index>> tokens(n_docs);
  std::vector<std::vector<Index>> assignment(n_docs);
  std::vector<std::uint64_t> id_hash(n_docs);
  Matrix nkw = Matrix::Zero(n_topics, v_size);
  Vector nk = Vector::Zero(n_topics);
  Matrix ndk = Matrix::Zero(n_topics, static_cast<Index>(n_docs));
  std::int64_t total_tokens = 0;

  for (std::size_t d = 0; d < n_docs; ++d) {
    tokens[d] = expand_tokens(*docs[d]);
    assignment[d].resize(tokens[d].size());
    id_hash[d] = rng::hash_bytes(docs[d]->doc_id);
    auto eng = rng::derive_engine(cfg.seed, "lda-init", id_hash[d]);
    for (std::size_t i = 0; i < tokens[d].size(); ++i) {
      const Index w = tokens[d][i];
      if (w < 0 || w >= v_size) {
        throw std::runtime_error("train_lda: word index out of vocabulary range in " +
                                 docs[d]->doc_id);
      }
      const Index z = static_cast<Index>(
          rng::uniform_below(eng, static_cast<std::uint64_t>(n_topics)));
      assignment[d][i] = z;
      nkw(z, w) += 1.0;
      nk[z] += 1.0;
      ndk(z, static_cast<Index>(d)) += 1.0;
      ++total_tokens;
    }
  }

  const Scalar v_beta = static_cast<Scalar>(v_size) * cfg.beta;
  Matrix phi_acc = Matrix::Zero(n_topics, v_size);
  Index n_snapshots = 0;
  Vector cond(n_topics);

  const Index total_sweeps = cfg.burn_in + cfg.samples;
  for (Index sweep = 0; sweep < total_sweeps; ++sweep) {
    for (std::size_t d = 0; d < n_docs; ++d) {
      auto eng = rng::derive_engine(
          cfg.seed, "lda-sweep",
          rng::fold(id_hash[d], static_cast<std::uint64_t>(sweep)));
      auto nd = ndk.col(static_cast<Index>(d));
      for (std::size_t i = 0; i < tokens[d].size(); ++i) {
        const Index w = tokens[d][i];
        const Index old_z = assignment[d][i];
        nkw(old_z, w) -= 1.0;
        nk[old_z] -= 1.0;
        nd[old_z] -= 1.0;
        if (nkw(old_z, w) < 0.0 || nk[old_z] < 0.0 || nd[old_z] < 0.0) {
          throw std::runtime_error("train_lda: negative count after removal");
        }
        const Scalar total =
            conditional_into(nkw, nk, nd, w, cfg.alpha, cfg.beta, v_beta, cond);
        const double u = rng::uniform01(eng) * total;
        double cum = 0.0;
        Index new_z = n_topics - 1;
        for (Index k = 0; k < n_topics; ++k) {
          cum += cond[k];
          if (u < cum) {
            new_z = k;
            break;
          }
        }
        assignment[d][i] = new_z;
        nkw(new_z, w) += 1.0;
        nk[new_z] += 1.0;
        nd[new_z] += 1.0;
      }
    }
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      phi_acc.array() +=
          (nkw.array() + cfg.beta).colwise() / (nk.array() + v_beta);
      ++n_snapshots;
    }
  }

  // Count conservation after the final sweep.
  for (Index k = 0; k < n_topics; ++k) {
    if (std::llround(nkw.row(k).sum()) != std::llround(nk[k])) {
      throw std::runtime_error("train_lda: topic-word counts out of sync with topic totals");
    }
  }
  if (std::llround(nk.sum()) != total_tokens) {
    throw std::runtime_error("train_lda: topic totals out of sync with corpus size");
  }

  LdaModel model;
  model.phi = phi_acc / static_cast<Scalar>(n_snapshots);
  model.alpha = cfg.alpha;
  model.beta = cfg.beta;
  model.nkw = std::move(nkw);
  model.nk = std::move(nk);
  model.vocab_hash = vocab.hash();
  return model;
}

Theta fold_in_theta(const Eigen::Ref<const Matrix>& phi, Scalar alpha,
                    const BowDocument& doc, Index burn_in, Index samples,
                    std::uint64_t seed) {
  if (!(alpha > 0.0)) throw std::invalid_argument("fold_in_theta: alpha must be > 0");
  if (burn_in < 0 || samples < 1) {
    throw std::invalid_argument("fold_in_theta: need burn_in >= 0 and samples >= 1");
  }
  const Index n_topics = phi.rows();

  Theta theta;
  theta.doc_id = doc.doc_id;
  theta.year = doc.year;
  if (doc.empty()) {
    theta.weights = Vector::Constant(n_topics, 1.0 / static_cast<Scalar>(n_topics));
    theta.uninformed = true;
    return theta;
  }

  const auto tokens = expand_tokens(doc);
  const Scalar n_d = static_cast<Scalar>(tokens.size());
  const Scalar k_alpha = static_cast<Scalar>(n_topics) * alpha;
  auto eng = rng::make_engine(seed);

  Vector ndk = Vector::Zero(n_topics);
  std::vector<Index> assignment(tokens.size());
  Vector cond(n_topics);

  auto draw = [&](Index w, bool exclude, Index old_z) {
    Scalar total = 0.0;
    for (Index k = 0; k < n_topics; ++k) {
      Scalar nd = ndk[k];
      if (exclude && k == old_z) nd -= 1.0;
      cond[k] = (nd + alpha) * phi(k, w);
      total += cond[k];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
      throw std::runtime_error("fold_in_theta: token " + std::to_string(w) +
                               " has zero probability under every topic");
    }
    const double u = rng::uniform01(eng) * total;
    double cum = 0.0;
    for (Index k = 0; k < n_topics; ++k) {
      cum += cond[k];
      if (u < cum) return k;
    }
    return n_topics - 1;
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Index z = draw(tokens[i], false, 0);
    assignment[i] = z;
    ndk[z] += 1.0;
  }

  Vector acc = Vector::Zero(n_topics);
  for (Index sweep = 0; sweep < burn_in + samples; ++sweep) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const Index old_z = assignment[i];
      const Index new_z = draw(tokens[i], true, old_z);
      if (new_z != old_z) {
        ndk[old_z] -= 1.0;
        ndk[new_z] += 1.0;
        assignment[i] = new_z;
      }
    }
    if (sweep >= burn_in) {
      acc.array() += (ndk.array() + alpha) / (n_d + k_alpha);
    }
  }
  theta.weights = acc / static_cast<Scalar>(samples);
  return theta;
}

Theta infer_theta(const LdaModel& model, const Vocabulary& vocab, const BowDocument& doc,
                  Index burn_in, Index samples, std::uint64_t seed) {
  if (model.vocab_hash != vocab.hash()) {
    throw std::runtime_error("infer_theta: vocabulary checksum does not match the model");
  }
  return fold_in_theta(model.phi, model.alpha, doc, burn_in, samples,
                       rng::fold(seed, rng::hash_bytes(doc.doc_id)));
}

std::vector<Theta> infer_thetas(const LdaModel& model, const Vocabulary& vocab,
                                const std::vector<BowDocument>& docs, Index burn_in,
                                Index samples, std::uint64_t seed, int threads) {
  if (model.vocab_hash != vocab.hash()) {
    throw std::runtime_error("infer_thetas: vocabulary checksum does not match the model");
  }
  std::vector<Theta> out(docs.size());
  auto run = [&](std::size_t i) {
    out[i] = fold_in_theta(model.phi, model.alpha, docs[i], burn_in, samples,
                           rng::fold(seed, rng::hash_bytes(docs[i].doc_id)));
  };
  if (threads <= 1 || docs.size() < 2) {
    for (std::size_t i = 0; i < docs.size(); ++i) run(i);
  } else {
    std::vector<std::future<void>> futures;
    const std::size_t n_chunks = static_cast<std::size_t>(threads);
    for (std::size_t c = 0; c < n_chunks; ++c) {
      futures.push_back(std::async(std::launch::async, [&, c] {
        for (std::size_t i = c; i < docs.size(); i += n_chunks) run(i);
      }));
    }
    for (auto& f : futures) f.get();
  }
  return out;
}

Scalar perplexity(const LdaModel& model, const std::vector<BowDocument>& docs,
                  const std::vector<Theta>& thetas) {
  if (docs.size() != thetas.size()) {
    throw std::invalid_argument("perplexity: docs/thetas size mismatch");
  }
  double log_lik = 0.0;
  std::int64_t n_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& [w, c] : docs[d].counts) {
      const Scalar p = thetas[d].weights.dot(model.phi.col(w));
      if (!(p > 0.0)) {
        throw std::runtime_error("perplexity: zero-probability token under a smoothed model");
      }
      log_lik += static_cast<double>(c) * std::log(p);
      n_tokens += c;
    }
  }
  if (n_tokens == 0) throw std::invalid_argument("perplexity: no tokens");
  return std::exp(-log_lik / static_cast<double>(n_tokens));
}

}  // namespace diatom

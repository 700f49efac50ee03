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
#include "diatom/types.hpp"

namespace diatom {

struct LdaConfig {
  Index n_topics = 50;
  Scalar alpha = 1.0;  // symmetric document-topic prior
  Scalar beta = 0.01;  // symmetric topic-word prior
  Index burn_in = 800;
  Index samples = 200;  // post-burn-in sweeps entering the phi average
  Index thin = 10;      // snapshot every thin-th sweep within the sample window
  std::uint64_t seed = 0;

  // Conventional defaults for a given topic count (alpha = 50/K).
  static LdaConfig defaults(Index k);

  void validate() const;
};

struct LdaModel {
  Matrix phi;  // K x V, rows sum to 1
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Matrix nkw;  // K x V topic-word counts after the final sweep
  Vector nk;   // per-topic token totals
  std::uint64_t vocab_hash = 0;

  Index n_topics() const { return phi.rows(); }
  Index vocab_size() const { return phi.cols(); }
};

// Per-document topic proportions.
struct Theta {
  std::string doc_id;
  int year = 0;
  Vector weights;  // length K, sums to 1
  bool uninformed = false;  // true when the document had no in-vocabulary token
};

// Collapsed Gibbs conditional for one token of word `word`, all counts given
// with that token removed:
//   p(k) proportional to (ndk[k] + alpha) * (nkw[k][word] + beta) / (nk[k] + V*beta)
// Throws if any involved excluded count is negative (bookkeeping bug).
Vector gibbs_conditional(const Eigen::Ref<const Matrix>& nkw_excl,
                         const Eigen::Ref<const Vector>& nk_excl,
                         const Eigen::Ref<const Vector>& ndk_excl, Index word,
                         const LdaConfig& cfg);

// Trains by collapsed Gibbs on burn_in + samples full sweeps; phi is the
// average of smoothed count snapshots over the sample window. Documents are
// scanned in ascending doc_id order with per-(document, sweep) derived
// streams, so the result is independent of input order. Empty documents are
// an error; filter them upstream.
LdaModel train_lda(const std::vector<BowDocument>& corpus, const Vocabulary& vocab,
                   const LdaConfig& cfg);

// Fold-in Gibbs against fixed topics: p(k) proportional to
// (ndk_excl[k] + alpha) * phi[k][w]; theta is the average over sample sweeps
// of (ndk + alpha) / (N_d + K*alpha). Documents with no in-vocabulary tokens
// return uniform weights flagged uninformed. Exposed so the slice-topic
// model can share the exact same contract.
Theta fold_in_theta(const Eigen::Ref<const Matrix>& phi, Scalar alpha,
                    const BowDocument& doc, Index burn_in, Index samples,
                    std::uint64_t seed);

// Checks the vocabulary checksum, then folds the document in. The stream is
// derived from (seed, doc_id), so results do not depend on document order.
Theta infer_theta(const LdaModel& model, const Vocabulary& vocab, const BowDocument& doc,
                  Index burn_in, Index samples, std::uint64_t seed);

// Order-preserving parallel inference over documents.
std::vector<Theta> infer_thetas(const LdaModel& model, const Vocabulary& vocab,
                                const std::vector<BowDocument>& docs, Index burn_in,
                                Index samples, std::uint64_t seed, int threads = 1);

// exp(-sum_d sum_w c_dw log sum_k theta_dk phi_kw / sum_d N_d); thetas must
// be aligned with docs. A zero-probability token is an error.
Scalar perplexity(const LdaModel& model, const std::vector<BowDocument>& docs,
                  const std::vector<Theta>& thetas);

}  // namespace diatom

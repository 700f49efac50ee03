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
#include <optional>
#include <string>
#include <vector>

#include "diatom/corpus.hpp"
#include "diatom/lda.hpp"
#include "diatom/types.hpp"

namespace diatom {

// Slice-chained topic model: per-slice natural parameters beta_{t,k,v} follow
// a Gaussian random walk beta_t ~ N(beta_{t-1}, sigma2 I) and slice-t tokens
// are drawn from softmax(beta_{t,k,.}). sigma2 is the evolution-speed knob:
// small values couple slices tightly, large values let topics move fast.
struct DtmConfig {
  Index n_topics = 50;
  Scalar sigma2 = 0.005;  // chain variance
  Scalar alpha = 0.1;     // document-topic prior
  Index iters = 30;       // outer variational iterations
  std::uint64_t seed = 0;

  // Diffuse anchor tying slice 0 to the initializer; keeps the level of the
  // otherwise shift-free chains identified.
  Scalar sigma0_sq = 10.0;

  // Pooled static initialization run (topic count and seed are overridden).
  Index init_burn_in = 200;
  Index init_samples = 50;
  Index init_thin = 5;
  Scalar init_beta = 0.01;

  void validate() const;
};

struct DtmModel {
  std::vector<Matrix> beta_nat;  // T matrices, each K x V
  Scalar sigma2 = 0.0;
  Scalar alpha = 0.0;
  std::vector<std::string> slice_labels;
  std::vector<int> slice_first_year;
  std::vector<int> slice_last_year;
  std::uint64_t vocab_hash = 0;

  Index n_slices() const { return static_cast<Index>(beta_nat.size()); }
  Index n_topics() const { return beta_nat.empty() ? 0 : beta_nat.front().rows(); }
  Index vocab_size() const { return beta_nat.empty() ? 0 : beta_nat.front().cols(); }
  std::optional<Index> slice_of_year(int year) const;
};

struct DtmTrainTrace {
  // Objective value at the top of each outer iteration; non-decreasing by
  // construction (coordinate ascent). Empty when no refinement ran (T == 1
  // or iters == 0).
  std::vector<Scalar> objective;
};

// Fits the chain model. A pooled static run initializes every slice at
// log(phi + 1e-10); outer iterations then alternate per-document mixture
// responsibilities, document-weight updates, and a tridiagonal Newton smooth
// of every word chain under the random-walk prior (the Kalman-smoother
// normal equations). With a single slice there is no chain to smooth and the
// pooled topics are returned as-is. Deterministic for a fixed seed.
DtmModel train_dtm(const TimeSlicedCorpus& corpus, const Vocabulary& vocab,
                   const DtmConfig& cfg, DtmTrainTrace* trace = nullptr);

// softmax(beta_nat[t].row(k)), max-stabilized.
Vector topic_at_slice(const DtmModel& model, Index k, Index t);

// All topics of one slice, K x V row-stochastic.
Matrix topics_at_slice(const DtmModel& model, Index t);

// Fold-in inference against the topics of slice t; same contract as the
// static model's infer_theta. The document's year must fall inside slice t.
Theta infer_theta_dtm(const DtmModel& model, const Vocabulary& vocab,
                      const BowDocument& doc, Index t, Index burn_in, Index samples,
                      std::uint64_t seed);

std::vector<Theta> infer_thetas_dtm(const DtmModel& model, const Vocabulary& vocab,
                                    const std::vector<BowDocument>& docs, Index burn_in,
                                    Index samples, std::uint64_t seed, int threads = 1);

// Jensen-Shannon divergence (base 2) between each adjacent pair of slices of
// topic k; length T-1. Needs T >= 2.
Vector chain_smoothness(const DtmModel& model, Index k);

}  // namespace diatom

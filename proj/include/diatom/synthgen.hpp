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
#include "diatom/lda.hpp"
#include "diatom/prominence.hpp"
#include "diatom/types.hpp"

namespace diatom {

enum class DynamicsKind { constant, linear_trend, onset, drift };

DynamicsKind parse_dynamics_kind(const std::string& name);
std::string to_string(DynamicsKind kind);

struct TopicDynamics {
  DynamicsKind kind = DynamicsKind::constant;
  Scalar slope = 0.0;       // linear_trend: per-slice change of the raw mixture weight
  Index onset_slice = 0;    // onset: first slice with nonzero prior mass, in [1, T-1]
  Scalar drift_rate = 0.0;  // drift: natural-parameter random-walk step stddev
};

struct ScenarioSpec {
  Index n_slices = 0;
  Index n_topics = 0;
  Index vocab_size = 0;
  Index docs_per_slice = 0;
  Index tokens_per_doc = 0;
  std::vector<TopicDynamics> dynamics;  // one per topic
  Scalar doc_alpha = 0.5;  // Dirichlet concentration of document mixtures
  // Disjoint per-topic word blocks instead of dense Dirichlet topics; makes
  // planted word sets unambiguous.
  bool word_blocks = false;
  int start_year = 1854;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticCorpus {
  TimeSlicedCorpus corpus;
  Vocabulary vocab;               // index i <-> word "w%04d"
  std::vector<Document> raw_docs; // token form, matching corpus.ingest input
  std::vector<Matrix> phi_star;   // per slice, K x V planted topics
  std::vector<Theta> theta_star;  // planted per-document mixtures
  ProminenceSeries prominence_star;
  // Raw per-slice mixture means (rows sum to 1) the thetas were drawn from.
  Matrix mixture_means;  // T x K
};

// Samples the generative mixture process slice by slice under the declared
// dynamics. Ground-truth prominence is the yearly normalized theta mass of
// the planted mixtures, computed by an inline double sum independent of the
// prominence module. Regeneration with the same spec is byte-identical.
SyntheticCorpus generate(const ScenarioSpec& spec);

// Word block [k*V/K, (k+1)*V/K) of a block-topic scenario.
std::vector<Index> topic_word_block(const ScenarioSpec& spec, Index k);

}  // namespace diatom

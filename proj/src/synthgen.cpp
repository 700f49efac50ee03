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

#include "diatom/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "diatom/rng.hpp"
#include "diatom/stats.hpp"

namespace diatom {

namespace {

std::string word_name(Index v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "w%04lld", static_cast<long long>(v));
  return buf;
}

std::string doc_name(int year, Index j) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "y%04d-d%05lld", year, static_cast<long long>(j));
  return buf;
}

}  // namespace

DynamicsKind parse_dynamics_kind(const std::string& name) {
  if (name == "constant") return DynamicsKind::constant;
  if (name == "linear_trend") return DynamicsKind::linear_trend;
  if (name == "onset") return DynamicsKind::onset;
  if (name == "drift") return DynamicsKind::drift;
  throw std::invalid_argument("unknown dynamics kind: " + name);
}

std::string to_string(DynamicsKind kind) {
  switch (kind) {
    case DynamicsKind::constant: return "constant";
    case DynamicsKind::linear_trend: return "linear_trend";
    case DynamicsKind::onset: return "onset";
    default: return "drift";
  }
}

void ScenarioSpec::validate() const {
  if (n_slices < 1 || n_topics < 1 || docs_per_slice < 1 || tokens_per_doc < 1) {
    throw std::invalid_argument("scenario: all sizes must be positive");
  }
  if (vocab_size < n_topics) {
    throw std::invalid_argument("scenario: vocabulary smaller than the topic count");
  }
  if (static_cast<Index>(dynamics.size()) != n_topics) {
    throw std::invalid_argument("scenario: need one dynamics entry per topic");
  }
  if (!(doc_alpha > 0.0)) throw std::invalid_argument("scenario: doc_alpha must be > 0");
  for (const auto& dyn : dynamics) {
    if (dyn.kind == DynamicsKind::onset &&
        (dyn.onset_slice < 1 || dyn.onset_slice >= n_slices)) {
      throw std::invalid_argument("scenario: onset slice must be in [1, T-1]");
    }
    if (dyn.kind == DynamicsKind::drift && !(dyn.drift_rate > 0.0)) {
      throw std::invalid_argument("scenario: drift rate must be > 0");
    }
  }
}

std::vector<Index> topic_word_block(const ScenarioSpec& spec, Index k) {
  const Index lo = k * spec.vocab_size / spec.n_topics;
  const Index hi = (k + 1) * spec.vocab_size / spec.n_topics;
  std::vector<Index> block;
  for (Index v = lo; v < hi; ++v) block.push_back(v);
  return block;
}

SyntheticCorpus generate(const ScenarioSpec& spec) {
  spec.validate();
  const Index t_slices = spec.n_slices;
  const Index n_topics = spec.n_topics;
  const Index v_size = spec.vocab_size;

  auto eng = rng::derive_engine(spec.seed, "synthgen");

  // Base topics at slice 0; drift evolves natural parameters from there.
  Matrix base_phi(n_topics, v_size);
  if (spec.word_blocks) {
    base_phi.setZero();
    for (Index k = 0; k < n_topics; ++k) {
      const auto block = topic_word_block(spec, k);
      const Vector alpha = Vector::Constant(static_cast<Index>(block.size()), 1.0);
      const Vector dist = rng::dirichlet(eng, alpha);
      for (std::size_t i = 0; i < block.size(); ++i) base_phi(k, block[i]) = dist[static_cast<Index>(i)];
    }
  } else {
    const Vector alpha = Vector::Constant(v_size, 0.1);
    for (Index k = 0; k < n_topics; ++k) base_phi.row(k) = rng::dirichlet(eng, alpha).transpose();
  }

  SyntheticCorpus out;
  out.phi_star.resize(static_cast<std::size_t>(t_slices));
  for (Index t = 0; t < t_slices; ++t) {
    out.phi_star[static_cast<std::size_t>(t)] = base_phi;
  }
  for (Index k = 0; k < n_topics; ++k) {
    const auto& dyn = spec.dynamics[static_cast<std::size_t>(k)];
    if (dyn.kind != DynamicsKind::drift) continue;
    Vector nat = base_phi.row(k).array().max(1e-12).log().transpose();
    for (Index t = 1; t < t_slices; ++t) {
      for (Index v = 0; v < v_size; ++v) nat[v] += dyn.drift_rate * rng::normal(eng);
      out.phi_star[static_cast<std::size_t>(t)].row(k) = softmax(nat).transpose();
    }
  }

  // Per-slice mixture means under the declared dynamics.
  out.mixture_means.resize(t_slices, n_topics);
  for (Index t = 0; t < t_slices; ++t) {
    Vector raw(n_topics);
    for (Index k = 0; k < n_topics; ++k) {
      const auto& dyn = spec.dynamics[static_cast<std::size_t>(k)];
      switch (dyn.kind) {
        case DynamicsKind::linear_trend:
          raw[k] = std::max(0.05, 1.0 + dyn.slope * static_cast<Scalar>(t));
          break;
        case DynamicsKind::onset:
          raw[k] = t < dyn.onset_slice ? 0.0 : 1.0;
          break;
        default:
          raw[k] = 1.0;
          break;
      }
    }
    out.mixture_means.row(t) = (raw / raw.sum()).transpose();
  }

  // Documents.
  std::vector<BowDocument> bows;
  for (Index t = 0; t < t_slices; ++t) {
    const int year = spec.start_year + static_cast<int>(t);
    const Matrix& phi_t = out.phi_star[static_cast<std::size_t>(t)];
    const Vector dir_alpha =
        spec.doc_alpha * static_cast<Scalar>(n_topics) * out.mixture_means.row(t).transpose();
    for (Index j = 0; j < spec.docs_per_slice; ++j) {
      Theta theta;
      theta.doc_id = doc_name(year, j);
      theta.year = year;
      theta.weights = rng::dirichlet(eng, dir_alpha);
      std::map<Index, std::int64_t> counts;
      Document raw_doc;
      raw_doc.id = theta.doc_id;
      raw_doc.year = year;
      for (Index i = 0; i < spec.tokens_per_doc; ++i) {
        const Index z = rng::discrete(eng, theta.weights);
        const Index w = rng::discrete(eng, phi_t.row(z).transpose());
        ++counts[w];
        raw_doc.tokens.push_back(word_name(w));
      }
      BowDocument bow;
      bow.doc_id = theta.doc_id;
      bow.year = year;
      bow.counts.assign(counts.begin(), counts.end());
      bow.token_total = spec.tokens_per_doc;
      bows.push_back(std::move(bow));
      out.raw_docs.push_back(std::move(raw_doc));
      out.theta_star.push_back(std::move(theta));
    }
  }
  out.corpus = slice_by_year(std::move(bows), 1);

  // Vocabulary in natural index order with real document frequencies.
  {
    std::vector<std::string> words;
    std::vector<std::int64_t> doc_freq(static_cast<std::size_t>(v_size), 0);
    for (Index v = 0; v < v_size; ++v) words.push_back(word_name(v));
    std::int64_t total_tokens = 0;
    for (const auto& slice : out.corpus.slices) {
      for (const auto& d : slice.docs) {
        total_tokens += d.token_total;
        for (const auto& [w, c] : d.counts) {
          (void)c;
          ++doc_freq[static_cast<std::size_t>(w)];
        }
      }
    }
    out.vocab = Vocabulary(std::move(words), std::move(doc_freq), total_tokens);
  }

  // Ground-truth prominence from the planted thetas: the full yearly double
  // sum over documents and topics, kept independent of the prominence
  // module on purpose.
  {
    std::map<int, std::vector<const Theta*>> by_year;
    for (const auto& th : out.theta_star) by_year[th.year].push_back(&th);
    out.prominence_star.values.resize(static_cast<Index>(by_year.size()), n_topics);
    Index row = 0;
    for (const auto& [year, docs] : by_year) {
      Scalar denom = 0.0;
      for (const Theta* th : docs) {
        for (Index i = 0; i < n_topics; ++i) denom += th->weights[i];
      }
      for (Index k = 0; k < n_topics; ++k) {
        Scalar num = 0.0;
        for (const Theta* th : docs) num += th->weights[k];
        out.prominence_star.values(row, k) = num / denom;
      }
      out.prominence_star.years.push_back(year);
      out.prominence_star.doc_counts.push_back(static_cast<std::int64_t>(docs.size()));
      ++row;
    }
  }
  return out;
}

}  // namespace diatom

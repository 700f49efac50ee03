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

#include "diatom/dtm.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "diatom/rng.hpp"
#include "diatom/stats.hpp"

namespace diatom {

namespace {

constexpr Scalar kLogFloor = 1e-10;  // phi -> natural parameter mapping
constexpr int kNewtonPasses = 3;
constexpr int kMaxBacktracks = 40;

// Chain objective for one word: sum_t [a_t b_t - c_t exp(b_t)] minus the
// random-walk penalty and the slice-0 anchor.
Scalar chain_objective(const Vector& b, const Vector& a, const Vector& c,
                       Scalar inv_sigma2, Scalar inv_sigma0_sq, Scalar anchor) {
  const Index t_len = b.size();
  Scalar f = 0.0;
  for (Index t = 0; t < t_len; ++t) {
    f += a[t] * b[t] - c[t] * std::exp(b[t]);
    if (t > 0) {
      const Scalar d = b[t] - b[t - 1];
      f -= 0.5 * inv_sigma2 * d * d;
    }
  }
  const Scalar d0 = b[0] - anchor;
  f -= 0.5 * inv_sigma0_sq * d0 * d0;
  return f;
}

// One damped Newton ascent step on the chain; the negated Hessian is
// symmetric tridiagonal, solved by the Thomas algorithm. Backtracking keeps
// the step an ascent, so the outer objective never decreases.
void newton_chain_step(Vector& b, const Vector& a, const Vector& c, Scalar inv_sigma2,
                       Scalar inv_sigma0_sq, Scalar anchor, Vector& grad, Vector& diag,
                       Vector& off, Vector& solve_tmp, Vector& direction, Vector& trial) {
  const Index t_len = b.size();
  for (Index t = 0; t < t_len; ++t) {
    const Scalar ceb = c[t] * std::exp(b[t]);
    Scalar g = a[t] - ceb;
    Scalar h = ceb;
    if (t > 0) {
      g -= inv_sigma2 * (b[t] - b[t - 1]);
      h += inv_sigma2;
    }
    if (t < t_len - 1) {
      g += inv_sigma2 * (b[t + 1] - b[t]);
      h += inv_sigma2;
    }
    if (t == 0) {
      g -= inv_sigma0_sq * (b[0] - anchor);
      h += inv_sigma0_sq;
    }
    grad[t] = g;
    diag[t] = h;
    if (t < t_len - 1) off[t] = -inv_sigma2;
  }

  // Thomas solve (-H) direction = grad.
  solve_tmp[0] = diag[0];
  direction[0] = grad[0];
  for (Index t = 1; t < t_len; ++t) {
    const Scalar w = off[t - 1] / solve_tmp[t - 1];
    solve_tmp[t] = diag[t] - w * off[t - 1];
    direction[t] = grad[t] - w * direction[t - 1];
  }
  direction[t_len - 1] /= solve_tmp[t_len - 1];
  for (Index t = t_len - 2; t >= 0; --t) {
    direction[t] = (direction[t] - off[t] * direction[t + 1]) / solve_tmp[t];
  }

  const Scalar f0 = chain_objective(b, a, c, inv_sigma2, inv_sigma0_sq, anchor);
  Scalar step = 1.0;
  for (int bt = 0; bt < kMaxBacktracks; ++bt) {
    trial = b + step * direction;
    const Scalar f1 = chain_objective(trial, a, c, inv_sigma2, inv_sigma0_sq, anchor);
    if (std::isfinite(f1) && f1 >= f0) {
      b = trial;
      return;
    }
    step *= 0.5;
  }
  // No improving step found (gradient numerically zero); keep b.
}

}  // namespace

void DtmConfig::validate() const {
  if (n_topics < 1) throw std::invalid_argument("dtm: K must be >= 1");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("dtm: sigma2 must be > 0");
  if (!(sigma0_sq > 0.0)) throw std::invalid_argument("dtm: sigma0_sq must be > 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("dtm: alpha must be > 0");
  if (iters < 0) throw std::invalid_argument("dtm: iters must be >= 0");
}

std::optional<Index> DtmModel::slice_of_year(int year) const {
  for (Index t = 0; t < n_slices(); ++t) {
    if (year >= slice_first_year[static_cast<std::size_t>(t)] &&
        year <= slice_last_year[static_cast<std::size_t>(t)]) {
      return t;
    }
  }
  return std::nullopt;
}

DtmModel train_dtm(const TimeSlicedCorpus& corpus, const Vocabulary& vocab,
                   const DtmConfig& cfg, DtmTrainTrace* trace) {
  cfg.validate();
  const Index t_slices = corpus.n_slices();
  if (t_slices == 0) throw std::invalid_argument("train_dtm: no slices");
  for (const auto& slice : corpus.slices) {
    if (slice.docs.empty()) {
      throw std::runtime_error("train_dtm: slice " + slice.label + " is empty");
    }
  }

  // Pooled static initialization; shared topic indices across the two model
  // families come from here.
  std::vector<BowDocument> pooled;
  for (const auto& slice : corpus.slices) {
    pooled.insert(pooled.end(), slice.docs.begin(), slice.docs.end());
  }
  LdaConfig init_cfg = LdaConfig::defaults(cfg.n_topics);
  init_cfg.beta = cfg.init_beta;
  init_cfg.burn_in = cfg.init_burn_in;
  init_cfg.samples = cfg.init_samples;
  init_cfg.thin = cfg.init_thin;
  init_cfg.seed = rng::fold(cfg.seed, rng::hash_bytes("dtm-init"));
  const LdaModel pooled_lda = train_lda(pooled, vocab, init_cfg);

  const Index n_topics = cfg.n_topics;
  const Index v_size = vocab.size();
  const Matrix beta_init = (pooled_lda.phi.array() + kLogFloor).log();

  DtmModel model;
  model.sigma2 = cfg.sigma2;
  model.alpha = cfg.alpha;
  model.vocab_hash = vocab.hash();
  for (const auto& slice : corpus.slices) {
    model.slice_labels.push_back(slice.label);
    model.slice_first_year.push_back(slice.first_year);
    model.slice_last_year.push_back(slice.last_year);
  }
  model.beta_nat.assign(static_cast<std::size_t>(t_slices), beta_init);
  if (t_slices == 1 || cfg.iters == 0) {
    // Single slice: nothing to smooth, the pooled topics are the model.
    return model;
  }

  // Flat document index across slices.
  std::vector<const BowDocument*> docs;
  std::vector<Index> doc_slice;
  for (Index t = 0; t < t_slices; ++t) {
    for (const auto& d : corpus.slices[static_cast<std::size_t>(t)].docs) {
      if (d.empty()) {
        throw std::runtime_error("train_dtm: document " + d.doc_id +
                                 " is empty; filter empty documents upstream");
      }
      docs.push_back(&d);
      doc_slice.push_back(t);
    }
  }
  const Index n_docs = static_cast<Index>(docs.size());

  Matrix theta = Matrix::Constant(n_topics, n_docs, 1.0 / static_cast<Scalar>(n_topics));
  std::vector<Matrix> beta(model.beta_nat);
  const Scalar inv_sigma2 = 1.0 / cfg.sigma2;
  const Scalar inv_sigma0_sq = 1.0 / cfg.sigma0_sq;
  const Scalar k_alpha = static_cast<Scalar>(n_topics) * cfg.alpha;

  std::vector<Matrix> nhat(static_cast<std::size_t>(t_slices));
  Matrix nd_hat(n_topics, n_docs);
  Matrix pi(n_topics, v_size);
  Matrix zeta(t_slices, n_topics);  // per-slice normalizers fixed for the beta step
  Vector q(n_topics);
  Vector chain_b(t_slices), chain_a(t_slices), chain_c(t_slices);
  Vector grad(t_slices), diag(t_slices), off(t_slices), solve_tmp(t_slices),
      direction(t_slices), trial(t_slices);

  for (Index iter = 0; iter < cfg.iters; ++iter) {
    // Tighten the per-(slice, topic) softmax normalizers, then take mixture
    // responsibilities with the current document weights. The objective is
    // exact at this point in the cycle, so it is evaluated here.
    Scalar objective = 0.0;
    for (auto& m : nhat) m = Matrix::Zero(n_topics, v_size);
    nd_hat.setZero();

    Index g = 0;
    for (Index t = 0; t < t_slices; ++t) {
      const Matrix& bt = beta[static_cast<std::size_t>(t)];
      for (Index k = 0; k < n_topics; ++k) {
        const Scalar lse = log_sum_exp(bt.row(k).transpose());
        zeta(t, k) = std::exp(lse);
        pi.row(k) = (bt.row(k).array() - lse).exp();
      }
      Matrix& nh = nhat[static_cast<std::size_t>(t)];
      const auto& slice_docs = corpus.slices[static_cast<std::size_t>(t)].docs;
      for (const auto& d : slice_docs) {
        for (const auto& [w, c] : d.counts) {
          Scalar mix = 0.0;
          for (Index k = 0; k < n_topics; ++k) {
            q[k] = theta(k, g) * pi(k, w);
            mix += q[k];
          }
          objective += static_cast<Scalar>(c) * std::log(mix);
          const Scalar scale = static_cast<Scalar>(c) / mix;
          for (Index k = 0; k < n_topics; ++k) {
            const Scalar r = q[k] * scale;
            nd_hat(k, g) += r;
            nh(k, w) += r;
          }
        }
        ++g;
      }
    }

    objective += cfg.alpha * theta.array().log().sum();
    for (Index k = 0; k < n_topics; ++k) {
      for (Index t = 1; t < t_slices; ++t) {
        objective -= 0.5 * inv_sigma2 *
                     (beta[static_cast<std::size_t>(t)].row(k) -
                      beta[static_cast<std::size_t>(t - 1)].row(k))
                         .squaredNorm();
      }
      objective -= 0.5 * inv_sigma0_sq *
                   (beta[0].row(k) - beta_init.row(k)).squaredNorm();
    }
    if (!std::isfinite(objective)) {
      throw std::runtime_error("train_dtm: non-finite objective at iteration " +
                               std::to_string(iter));
    }
    if (trace) trace->objective.push_back(objective);

    // Document weights.
    for (Index gg = 0; gg < n_docs; ++gg) {
      const Scalar n_g = static_cast<Scalar>(docs[static_cast<std::size_t>(gg)]->token_total);
      theta.col(gg) = (nd_hat.col(gg).array() + cfg.alpha) / (n_g + k_alpha);
    }

    // Chain smoothing: damped Newton on every word chain against the
    // normalizers frozen above.
    for (int pass = 0; pass < kNewtonPasses; ++pass) {
      for (Index k = 0; k < n_topics; ++k) {
        for (Index t = 0; t < t_slices; ++t) {
          const auto& nh = nhat[static_cast<std::size_t>(t)];
          chain_c[t] = nh.row(k).sum() / zeta(t, k);
        }
        for (Index v = 0; v < v_size; ++v) {
          for (Index t = 0; t < t_slices; ++t) {
            chain_b[t] = beta[static_cast<std::size_t>(t)](k, v);
            chain_a[t] = nhat[static_cast<std::size_t>(t)](k, v);
          }
          newton_chain_step(chain_b, chain_a, chain_c, inv_sigma2, inv_sigma0_sq,
                            beta_init(k, v), grad, diag, off, solve_tmp, direction, trial);
          for (Index t = 0; t < t_slices; ++t) {
            beta[static_cast<std::size_t>(t)](k, v) = chain_b[t];
          }
        }
      }
    }
  }

  model.beta_nat = std::move(beta);
  return model;
}

Vector topic_at_slice(const DtmModel& model, Index k, Index t) {
  if (t < 0 || t >= model.n_slices()) {
    throw std::out_of_range("topic_at_slice: slice index out of range");
  }
  if (k < 0 || k >= model.n_topics()) {
    throw std::out_of_range("topic_at_slice: topic index out of range");
  }
  return softmax(model.beta_nat[static_cast<std::size_t>(t)].row(k).transpose());
}

Matrix topics_at_slice(const DtmModel& model, Index t) {
  if (t < 0 || t >= model.n_slices()) {
    throw std::out_of_range("topics_at_slice: slice index out of range");
  }
  Matrix out(model.n_topics(), model.vocab_size());
  for (Index k = 0; k < model.n_topics(); ++k) {
    out.row(k) = topic_at_slice(model, k, t).transpose();
  }
  return out;
}

Theta infer_theta_dtm(const DtmModel& model, const Vocabulary& vocab,
                      const BowDocument& doc, Index t, Index burn_in, Index samples,
                      std::uint64_t seed) {
  if (model.vocab_hash != vocab.hash()) {
    throw std::runtime_error("infer_theta_dtm: vocabulary checksum does not match the model");
  }
  if (t < 0 || t >= model.n_slices()) {
    throw std::out_of_range("infer_theta_dtm: slice index out of range");
  }
  if (doc.year < model.slice_first_year[static_cast<std::size_t>(t)] ||
      doc.year > model.slice_last_year[static_cast<std::size_t>(t)]) {
    throw std::invalid_argument("infer_theta_dtm: document year " + std::to_string(doc.year) +
                                " does not fall in slice " +
                                model.slice_labels[static_cast<std::size_t>(t)]);
  }
  const Matrix pi = topics_at_slice(model, t);
  return fold_in_theta(pi, model.alpha, doc, burn_in, samples,
                       rng::fold(seed, rng::hash_bytes(doc.doc_id)));
}

std::vector<Theta> infer_thetas_dtm(const DtmModel& model, const Vocabulary& vocab,
                                    const std::vector<BowDocument>& docs, Index burn_in,
                                    Index samples, std::uint64_t seed, int threads) {
  if (model.vocab_hash != vocab.hash()) {
    throw std::runtime_error("infer_thetas_dtm: vocabulary checksum does not match the model");
  }
  // Slice topic matrices are shared across documents.
  std::vector<Matrix> pi(static_cast<std::size_t>(model.n_slices()));
  for (Index t = 0; t < model.n_slices(); ++t) {
    pi[static_cast<std::size_t>(t)] = topics_at_slice(model, t);
  }
  std::vector<Theta> out(docs.size());
  auto run = [&](std::size_t i) {
    const auto t = model.slice_of_year(docs[i].year);
    if (!t) {
      throw std::runtime_error("infer_thetas_dtm: document " + docs[i].doc_id + " year " +
                               std::to_string(docs[i].year) + " outside the model span");
    }
    out[i] = fold_in_theta(pi[static_cast<std::size_t>(*t)], model.alpha, docs[i], burn_in,
                           samples, rng::fold(seed, rng::hash_bytes(docs[i].doc_id)));
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

Vector chain_smoothness(const DtmModel& model, Index k) {
  if (model.n_slices() < 2) {
    throw std::invalid_argument("chain_smoothness: need at least two slices");
  }
  Vector out(model.n_slices() - 1);
  Vector prev = topic_at_slice(model, k, 0);
  for (Index t = 1; t < model.n_slices(); ++t) {
    Vector cur = topic_at_slice(model, k, t);
    out[t - 1] = js_divergence(prev, cur);
    prev = std::move(cur);
  }
  return out;
}

}  // namespace diatom

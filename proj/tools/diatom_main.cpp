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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diatom/corpus.hpp"
#include "diatom/diagnostics.hpp"
#include "diatom/dtm.hpp"
#include "diatom/lda.hpp"
#include "diatom/model_io.hpp"
#include "diatom/prominence.hpp"
#include "diatom/rng.hpp"
#include "diatom/sampler.hpp"
#include "diatom/stats.hpp"
#include "diatom/synthgen.hpp"

#define DIATOM_VERSION "0.1.0"

namespace {

using namespace diatom;
namespace fs = std::filesystem;

// Collects resolved settings and input checksums, and writes the manifest
// that every output directory carries.
class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, std::uint64_t seed, int threads)
      : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
    manifest_.version = DIATOM_VERSION;
    manifest_.seed = seed;
    manifest_.threads = threads;
  }

  void config(const std::string& key, const std::string& value) {
    manifest_.config[key] = value;
  }
  void config(const std::string& key, std::int64_t value) {
    manifest_.config[key] = std::to_string(value);
  }
  void config(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    manifest_.config[key] = buf;
  }

  void input(const std::string& path) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv64:%016llx",
                  static_cast<unsigned long long>(io::file_checksum(path)));
    manifest_.inputs[path] = buf;
  }

  void write(const fs::path& out_dir) {
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    io::save_manifest(manifest_, (out_dir / "manifest.json").string());
  }

 private:
  io::RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

std::vector<Document> load_documents(const std::string& path, const IngestConfig& cfg,
                                     bool print_warnings) {
  IngestReport report;
  auto docs = ingest_file(path, cfg, &report);
  if (print_warnings) {
    for (const auto& w : report.warnings) {
      std::cerr << "warning: " << path << ":" << w.line << ": " << w.message << "\n";
    }
  }
  return docs;
}

std::vector<BowDocument> drop_empty(std::vector<BowDocument> bows, const char* stage) {
  std::vector<BowDocument> kept;
  kept.reserve(bows.size());
  std::size_t dropped = 0;
  for (auto& b : bows) {
    if (b.empty()) {
      ++dropped;
    } else {
      kept.push_back(std::move(b));
    }
  }
  if (dropped > 0) {
    std::cerr << stage << ": dropped " << dropped << " empty document(s)\n";
  }
  return kept;
}

ScenarioSpec parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  ScenarioSpec spec;
  spec.n_slices = j.at("n_slices").get<Index>();
  spec.n_topics = j.at("n_topics").get<Index>();
  spec.vocab_size = j.at("vocab_size").get<Index>();
  spec.docs_per_slice = j.at("docs_per_slice").get<Index>();
  spec.tokens_per_doc = j.at("tokens_per_doc").get<Index>();
  spec.doc_alpha = j.value("doc_alpha", 0.5);
  spec.word_blocks = j.value("word_blocks", false);
  spec.start_year = j.value("start_year", 1854);
  spec.seed = j.value("seed", std::uint64_t{0});
  for (const auto& d : j.at("dynamics")) {
    TopicDynamics dyn;
    dyn.kind = parse_dynamics_kind(d.at("kind").get<std::string>());
    dyn.slope = d.value("slope", 0.0);
    dyn.onset_slice = d.value("onset_slice", Index{0});
    dyn.drift_rate = d.value("drift_rate", 0.0);
    spec.dynamics.push_back(dyn);
  }
  return spec;
}

struct CommonArgs {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "Seed for all randomness of this run")
      ->envname("DIATOM_SEED")
      ->capture_default_str();
  cmd->add_option("--threads", args.threads, "Worker threads (1 = deterministic reference)")
      ->envname("DIATOM_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", args.out, "Output directory")->required();
}

void load_stopwords(const std::string& path, IngestConfig& cfg) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword file: " + path);
  std::string word;
  while (std::getline(in, word)) {
    if (!word.empty()) cfg.stopwords.insert(word);
  }
}

int run_app(int argc, char** argv) {
  CLI::App app{"diatom: topic-model based discourse dynamics for diachronic corpora"};
  app.set_version_flag("--version", DIATOM_VERSION);
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);

  // ---- ingest ---------------------------------------------------------------
  auto* ingest_cmd = app.add_subcommand(
      "ingest", "Tokenize a JSONL collection and build the pruned vocabulary");
  static std::string ingest_input, ingest_stopwords;
  static CommonArgs ingest_args;
  static IngestConfig ingest_prep;
  static int ingest_start_year = 0, ingest_end_year = 0;
  static std::int64_t ingest_min_df = 5;
  static double ingest_max_df_ratio = 0.7;
  static std::size_t ingest_max_vocab = 50000;
  ingest_cmd->add_option("--input", ingest_input, "Line-delimited JSON records")->required();
  ingest_cmd->add_option("--min-token-len", ingest_prep.min_token_len,
                         "Minimum token length in bytes")
      ->capture_default_str();
  ingest_cmd->add_option("--stopwords", ingest_stopwords, "Stopword list, one word per line");
  ingest_cmd->add_option("--start-year", ingest_start_year,
                         "Reject records dated before this year");
  ingest_cmd->add_option("--end-year", ingest_end_year,
                         "Reject records dated after this year");
  ingest_cmd->add_option("--min-df", ingest_min_df, "Minimum document frequency")
      ->capture_default_str();
  ingest_cmd->add_option("--max-df-ratio", ingest_max_df_ratio,
                         "Maximum document-frequency ratio")
      ->capture_default_str();
  ingest_cmd->add_option("--max-vocab", ingest_max_vocab, "Vocabulary size cap")
      ->capture_default_str();
  add_common(ingest_cmd, ingest_args);
  ingest_cmd->callback([&] {
    ManifestBuilder manifest("ingest", ingest_args.seed, ingest_args.threads);
    manifest.input(ingest_input);
    manifest.config("min_df", ingest_min_df);
    manifest.config("max_df_ratio", ingest_max_df_ratio);
    manifest.config("max_vocab", static_cast<std::int64_t>(ingest_max_vocab));
    manifest.config("min_token_len", static_cast<std::int64_t>(ingest_prep.min_token_len));
    if (ingest_cmd->count("--start-year")) ingest_prep.start_year = ingest_start_year;
    if (ingest_cmd->count("--end-year")) ingest_prep.end_year = ingest_end_year;
    load_stopwords(ingest_stopwords, ingest_prep);
    const auto out_dir = prepare_out_dir(ingest_args.out);

    const auto docs = load_documents(ingest_input, ingest_prep, true);
    if (docs.empty()) throw std::runtime_error("ingest: no valid records in " + ingest_input);
    const auto vocab =
        build_vocabulary(docs, ingest_min_df, ingest_max_df_ratio, ingest_max_vocab);
    io::save_documents_jsonl(docs, (out_dir / "docs.jsonl").string());
    io::save_vocabulary(vocab, (out_dir / "vocab.tsv").string());
    std::cout << "ingest: " << docs.size() << " documents, vocabulary " << vocab.size()
              << " words\n";
    manifest.write(out_dir);
  });

  // ---- stats ----------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "Per-year token and article statistics");
  static std::string stats_input, stats_vocab;
  static CommonArgs stats_args;
  stats_cmd->add_option("--input", stats_input, "Tokenized documents (JSONL)")->required();
  stats_cmd->add_option("--vocab", stats_vocab, "Vocabulary TSV")->required();
  add_common(stats_cmd, stats_args);
  stats_cmd->callback([&] {
    ManifestBuilder manifest("stats", stats_args.seed, stats_args.threads);
    manifest.input(stats_input);
    manifest.input(stats_vocab);
    const auto out_dir = prepare_out_dir(stats_args.out);
    const auto vocab = io::load_vocabulary(stats_vocab);
    const auto docs = load_documents(stats_input, IngestConfig{}, true);
    const auto bows = vectorize_all(docs, vocab, stats_args.threads);
    io::save_stats_csv(corpus_stats(bows), (out_dir / "stats.csv").string());
    manifest.write(out_dir);
  });

  // ---- sample ---------------------------------------------------------------
  auto* sample_cmd = app.add_subcommand("sample", "Draw a per-year budgeted training subset");
  static std::string sample_input, sample_vocab, sample_unit = "tokens";
  static std::int64_t sample_budget = 0;
  static CommonArgs sample_args;
  sample_cmd->add_option("--input", sample_input, "Tokenized documents (JSONL)")->required();
  sample_cmd->add_option("--vocab", sample_vocab, "Vocabulary TSV")->required();
  sample_cmd->add_option("--unit", sample_unit, "Balance unit: articles or tokens")
      ->check(CLI::IsMember({"articles", "tokens"}))
      ->capture_default_str();
  sample_cmd->add_option("--budget", sample_budget, "Per-year budget")->required();
  add_common(sample_cmd, sample_args);
  sample_cmd->callback([&] {
    ManifestBuilder manifest("sample", sample_args.seed, sample_args.threads);
    manifest.input(sample_input);
    manifest.input(sample_vocab);
    manifest.config("unit", sample_unit);
    manifest.config("budget", sample_budget);
    const auto out_dir = prepare_out_dir(sample_args.out);
    const auto vocab = io::load_vocabulary(sample_vocab);
    const auto docs = load_documents(sample_input, IngestConfig{}, true);
    const auto bows = drop_empty(vectorize_all(docs, vocab, sample_args.threads), "sample");

    SamplePlan plan;
    plan.unit = parse_sample_unit(sample_unit);
    plan.per_year_budget = sample_budget;
    plan.seed = sample_args.seed;
    const auto sampled = balanced_sample(bows, plan);
    io::save_sample_report_csv(sample_report(bows, sampled),
                               (out_dir / "sample_report.csv").string());

    std::unordered_map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id[d.id] = &d;
    std::vector<Document> sampled_docs;
    sampled_docs.reserve(sampled.size());
    for (const auto& b : sampled) sampled_docs.push_back(*by_id.at(b.doc_id));
    io::save_documents_jsonl(sampled_docs, (out_dir / "sampled.jsonl").string());
    std::cout << "sample: kept " << sampled.size() << " of " << bows.size()
              << " documents\n";
    manifest.write(out_dir);
  });

  // ---- train-lda ------------------------------------------------------------
  auto* lda_cmd = app.add_subcommand("train-lda", "Train a static topic model");
  static std::string lda_input, lda_vocab;
  static CommonArgs lda_args;
  static Index lda_k = 50;
  static double lda_alpha = -1.0, lda_beta = 0.01;
  static Index lda_burn_in = 800, lda_samples = 200, lda_thin = 10;
  lda_cmd->add_option("--input", lda_input, "Training documents (JSONL)")->required();
  lda_cmd->add_option("--vocab", lda_vocab, "Vocabulary TSV")->required();
  lda_cmd->add_option("--k", lda_k, "Topic count")->capture_default_str();
  lda_cmd->add_option("--alpha", lda_alpha, "Document-topic prior (default 50/K)");
  lda_cmd->add_option("--beta", lda_beta, "Topic-word prior")->capture_default_str();
  lda_cmd->add_option("--burn-in", lda_burn_in, "Burn-in sweeps")->capture_default_str();
  lda_cmd->add_option("--samples", lda_samples, "Averaged post-burn-in sweeps")
      ->capture_default_str();
  lda_cmd->add_option("--thin", lda_thin, "Snapshot thinning within the sample window")
      ->capture_default_str();
  add_common(lda_cmd, lda_args);
  lda_cmd->callback([&] {
    LdaConfig cfg = LdaConfig::defaults(lda_k);
    if (lda_alpha > 0.0) cfg.alpha = lda_alpha;
    cfg.beta = lda_beta;
    cfg.burn_in = lda_burn_in;
    cfg.samples = lda_samples;
    cfg.thin = lda_thin;
    cfg.seed = lda_args.seed;

    ManifestBuilder manifest("train-lda", lda_args.seed, lda_args.threads);
    manifest.input(lda_input);
    manifest.input(lda_vocab);
    manifest.config("k", static_cast<std::int64_t>(cfg.n_topics));
    manifest.config("alpha", cfg.alpha);
    manifest.config("beta", cfg.beta);
    manifest.config("burn_in", static_cast<std::int64_t>(cfg.burn_in));
    manifest.config("samples", static_cast<std::int64_t>(cfg.samples));
    manifest.config("thin", static_cast<std::int64_t>(cfg.thin));
    const auto out_dir = prepare_out_dir(lda_args.out);

    const auto vocab = io::load_vocabulary(lda_vocab);
    const auto docs = load_documents(lda_input, IngestConfig{}, true);
    const auto bows = drop_empty(vectorize_all(docs, vocab, lda_args.threads), "train-lda");
    const auto model = train_lda(bows, vocab, cfg);
    io::save_lda(model, (out_dir / "lda.model").string());

    std::ofstream topics((out_dir / "topics.tsv").string());
    topics << "topic\trank\tword\tprobability\n";
    for (Index kk = 0; kk < model.n_topics(); ++kk) {
      const Vector row = model.phi.row(kk).transpose();
      const auto tops = top_words(row, vocab, std::min<Index>(15, vocab.size()));
      for (std::size_t r = 0; r < tops.size(); ++r) {
        char prob[40];
        std::snprintf(prob, sizeof(prob), "%.6g", row[tops[r]]);
        topics << kk << '\t' << r << '\t' << vocab.word(tops[r]) << '\t' << prob << '\n';
      }
    }
    manifest.write(out_dir);
  });

  // ---- train-dtm ------------------------------------------------------------
  auto* dtm_cmd = app.add_subcommand("train-dtm", "Train the slice-chained topic model");
  static std::string dtm_input, dtm_vocab;
  static CommonArgs dtm_args;
  static Index dtm_k = 50, dtm_iters = 30, dtm_granularity = 1;
  static double dtm_sigma2 = 0.005, dtm_alpha = 0.1;
  dtm_cmd->add_option("--input", dtm_input, "Training documents (JSONL)")->required();
  dtm_cmd->add_option("--vocab", dtm_vocab, "Vocabulary TSV")->required();
  dtm_cmd->add_option("--k", dtm_k, "Topic count")->capture_default_str();
  dtm_cmd->add_option("--granularity", dtm_granularity, "Years per slice")
      ->capture_default_str();
  dtm_cmd->add_option("--chain-variance", dtm_sigma2,
                      "Evolution-speed parameter (natural-parameter step variance)")
      ->capture_default_str();
  dtm_cmd->add_option("--alpha", dtm_alpha, "Document-topic prior")->capture_default_str();
  dtm_cmd->add_option("--iters", dtm_iters, "Outer variational iterations")
      ->capture_default_str();
  add_common(dtm_cmd, dtm_args);
  dtm_cmd->callback([&] {
    DtmConfig cfg;
    cfg.n_topics = dtm_k;
    cfg.sigma2 = dtm_sigma2;
    cfg.alpha = dtm_alpha;
    cfg.iters = dtm_iters;
    cfg.seed = dtm_args.seed;

    ManifestBuilder manifest("train-dtm", dtm_args.seed, dtm_args.threads);
    manifest.input(dtm_input);
    manifest.input(dtm_vocab);
    manifest.config("k", static_cast<std::int64_t>(dtm_k));
    manifest.config("granularity", static_cast<std::int64_t>(dtm_granularity));
    manifest.config("chain_variance", dtm_sigma2);
    manifest.config("alpha", dtm_alpha);
    manifest.config("iters", static_cast<std::int64_t>(dtm_iters));
    const auto out_dir = prepare_out_dir(dtm_args.out);

    const auto vocab = io::load_vocabulary(dtm_vocab);
    const auto docs = load_documents(dtm_input, IngestConfig{}, true);
    const auto bows = drop_empty(vectorize_all(docs, vocab, dtm_args.threads), "train-dtm");
    const auto sliced = slice_by_year(bows, static_cast<int>(dtm_granularity));

    DtmTrainTrace trace;
    const auto model = train_dtm(sliced, vocab, cfg, &trace);
    io::save_dtm(model, (out_dir / "dtm.model").string());
    io::save_slice_topics_tsv(model, vocab, 15, (out_dir / "slice_topics.tsv").string());
    {
      std::ofstream obj((out_dir / "objective.csv").string());
      obj << "iteration,objective\n";
      for (std::size_t i = 0; i < trace.objective.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", trace.objective[i]);
        obj << i << ',' << buf << '\n';
      }
    }
    manifest.write(out_dir);
  });

  // ---- infer ----------------------------------------------------------------
  auto* infer_cmd = app.add_subcommand(
      "infer", "Infer topic proportions for every document under a trained model");
  static std::string infer_input, infer_vocab, infer_model;
  static CommonArgs infer_args;
  static Index infer_burn_in = 50, infer_samples = 50;
  infer_cmd->add_option("--model", infer_model, "Trained model file")->required();
  infer_cmd->add_option("--input", infer_input, "Documents to infer (JSONL)")->required();
  infer_cmd->add_option("--vocab", infer_vocab, "Vocabulary TSV")->required();
  infer_cmd->add_option("--burn-in", infer_burn_in, "Fold-in burn-in sweeps")
      ->capture_default_str();
  infer_cmd->add_option("--samples", infer_samples, "Fold-in averaged sweeps")
      ->capture_default_str();
  add_common(infer_cmd, infer_args);
  infer_cmd->callback([&] {
    ManifestBuilder manifest("infer", infer_args.seed, infer_args.threads);
    manifest.input(infer_model);
    manifest.input(infer_input);
    manifest.input(infer_vocab);
    manifest.config("burn_in", static_cast<std::int64_t>(infer_burn_in));
    manifest.config("samples", static_cast<std::int64_t>(infer_samples));
    const auto out_dir = prepare_out_dir(infer_args.out);

    const auto vocab = io::load_vocabulary(infer_vocab);
    const auto docs = load_documents(infer_input, IngestConfig{}, true);
    const auto bows = vectorize_all(docs, vocab, infer_args.threads);

    const std::string kind = io::peek_model_kind(infer_model);
    std::vector<Theta> thetas;
    if (kind == "diatom-lda") {
      const auto model = io::load_lda(infer_model);
      thetas = infer_thetas(model, vocab, bows, infer_burn_in, infer_samples,
                            infer_args.seed, infer_args.threads);
    } else if (kind == "diatom-dtm") {
      const auto model = io::load_dtm(infer_model);
      thetas = infer_thetas_dtm(model, vocab, bows, infer_burn_in, infer_samples,
                                infer_args.seed, infer_args.threads);
    } else {
      throw std::runtime_error("unknown model kind: " + kind);
    }
    io::save_theta_csv(thetas, (out_dir / "thetas.csv").string());
    manifest.write(out_dir);
  });

  // ---- prominence -------------------------------------------------------------
  auto* prom_cmd =
      app.add_subcommand("prominence", "Aggregate thetas into per-year topic prominence");
  static std::string prom_thetas, prom_clusters;
  static bool prom_trends = false;
  static CommonArgs prom_args;
  prom_cmd->add_option("--thetas", prom_thetas, "Theta CSV from infer")->required();
  prom_cmd->add_option("--clusters", prom_clusters, "Topic cluster config");
  prom_cmd->add_flag("--with-trends", prom_trends, "Also write per-series OLS trends");
  add_common(prom_cmd, prom_args);
  prom_cmd->callback([&] {
    ManifestBuilder manifest("prominence", prom_args.seed, prom_args.threads);
    manifest.input(prom_thetas);
    if (!prom_clusters.empty()) manifest.input(prom_clusters);
    const auto out_dir = prepare_out_dir(prom_args.out);

    const auto thetas = io::load_theta_csv(prom_thetas);
    const auto series = topic_prominence(thetas);
    io::save_prominence_csv(series, (out_dir / "prominence.csv").string());

    std::vector<TopicCluster> clusters;
    if (!prom_clusters.empty()) {
      clusters = io::load_clusters(prom_clusters);
      io::save_cluster_prominence_csv(series, clusters, (out_dir / "clusters.csv").string());
    }
    if (prom_trends) {
      std::vector<std::pair<std::string, TrendSummary>> trends;
      for (Index k = 0; k < series.n_topics(); ++k) {
        trends.emplace_back("topic_" + std::to_string(k),
                            trend_summary(series.years, series.values.col(k)));
      }
      for (const auto& c : clusters) {
        trends.emplace_back(c.name,
                            trend_summary(series.years, cluster_prominence(series, c)));
      }
      io::save_trends_csv(trends, (out_dir / "trends.csv").string());
    }
    manifest.write(out_dir);
  });

  // ---- heatmap ----------------------------------------------------------------
  auto* heatmap_cmd =
      app.add_subcommand("heatmap", "Term-saliency heatmap of one chain topic over time");
  static std::string hm_model, hm_input, hm_vocab;
  static Index hm_topic = 0, hm_top_n = 12;
  static double hm_lambda = 0.6;
  static bool hm_svg = false;
  static CommonArgs hm_args;
  heatmap_cmd->add_option("--model", hm_model, "diatom-dtm model file")->required();
  heatmap_cmd->add_option("--input", hm_input, "Corpus for the unigram baseline (JSONL)")
      ->required();
  heatmap_cmd->add_option("--vocab", hm_vocab, "Vocabulary TSV")->required();
  heatmap_cmd->add_option("--topic", hm_topic, "Topic index")->required();
  heatmap_cmd->add_option("--top-n", hm_top_n, "Words per slice entering the union")
      ->capture_default_str();
  heatmap_cmd->add_option("--lambda", hm_lambda, "Relevance weight in [0,1]")
      ->capture_default_str();
  heatmap_cmd->add_flag("--svg", hm_svg, "Also write an SVG rendering");
  add_common(heatmap_cmd, hm_args);
  heatmap_cmd->callback([&] {
    ManifestBuilder manifest("heatmap", hm_args.seed, hm_args.threads);
    manifest.input(hm_model);
    manifest.input(hm_input);
    manifest.input(hm_vocab);
    manifest.config("topic", static_cast<std::int64_t>(hm_topic));
    manifest.config("top_n", static_cast<std::int64_t>(hm_top_n));
    manifest.config("lambda", hm_lambda);
    const auto out_dir = prepare_out_dir(hm_args.out);

    const auto vocab = io::load_vocabulary(hm_vocab);
    const auto model = io::load_dtm(hm_model);
    const auto docs = load_documents(hm_input, IngestConfig{}, true);
    const auto bows = vectorize_all(docs, vocab, hm_args.threads);

    Vector unigram = Vector::Zero(vocab.size());
    double total = 0.0;
    for (const auto& b : bows) {
      for (const auto& [w, c] : b.counts) {
        unigram[w] += static_cast<Scalar>(c);
        total += static_cast<double>(c);
      }
    }
    if (total <= 0.0) throw std::runtime_error("heatmap: corpus has no tokens");
    unigram /= total;

    const auto heatmap = saliency_heatmap(model, vocab, unigram, hm_topic, hm_top_n, hm_lambda);
    const std::string stem = "heatmap_topic" + std::to_string(hm_topic);
    io::save_heatmap_csv(heatmap, (out_dir / (stem + ".csv")).string());
    if (hm_svg) io::save_heatmap_svg(heatmap, (out_dir / (stem + ".svg")).string());
    manifest.write(out_dir);
  });

  // ---- stretch ------------------------------------------------------------------
  auto* stretch_cmd =
      app.add_subcommand("stretch", "Stretching and drift scores for one chain topic");
  static std::string st_model, st_vocab, st_onset_words;
  static Index st_topic = 0, st_top_n = 12, st_onset_slice = -1;
  static CommonArgs st_args;
  stretch_cmd->add_option("--model", st_model, "diatom-dtm model file")->required();
  stretch_cmd->add_option("--topic", st_topic, "Topic index")->required();
  stretch_cmd->add_option("--top-n", st_top_n, "Top-word list length")->capture_default_str();
  stretch_cmd->add_option("--vocab", st_vocab,
                          "Vocabulary TSV (needed to resolve --onset-words)");
  stretch_cmd->add_option("--onset-words", st_onset_words, "Comma-separated onset word set");
  stretch_cmd->add_option("--onset-slice", st_onset_slice,
                          "First slice where the onset set is really in use");
  add_common(stretch_cmd, st_args);
  stretch_cmd->callback([&] {
    ManifestBuilder manifest("stretch", st_args.seed, st_args.threads);
    manifest.input(st_model);
    manifest.config("topic", static_cast<std::int64_t>(st_topic));
    manifest.config("top_n", static_cast<std::int64_t>(st_top_n));
    const auto out_dir = prepare_out_dir(st_args.out);

    const auto model = io::load_dtm(st_model);
    std::optional<OnsetSpec> onset;
    if (!st_onset_words.empty() || st_onset_slice >= 0) {
      if (st_onset_words.empty() || st_onset_slice < 0 || st_vocab.empty()) {
        throw std::runtime_error(
            "stretch: --onset-words, --onset-slice and --vocab must be given together");
      }
      const auto vocab = io::load_vocabulary(st_vocab);
      if (vocab.hash() != model.vocab_hash) {
        throw std::runtime_error("stretch: vocabulary checksum does not match the model");
      }
      OnsetSpec spec;
      spec.slice = st_onset_slice;
      std::stringstream ss(st_onset_words);
      std::string word;
      while (std::getline(ss, word, ',')) {
        const auto idx = vocab.index_of(word);
        if (!idx) throw std::runtime_error("stretch: onset word not in vocabulary: " + word);
        spec.words.push_back(*idx);
      }
      onset = std::move(spec);
    }
    const auto report = stretch_score(model, st_topic, st_top_n, onset);
    io::save_stretch_csv(
        report, model.slice_labels,
        (out_dir / ("stretch_topic" + std::to_string(st_topic) + ".csv")).string());
    manifest.write(out_dir);
  });

  // ---- match -----------------------------------------------------------------
  auto* match_cmd = app.add_subcommand(
      "match", "Candidate alignment table between a static and a chain model");
  static std::string match_lda, match_dtm;
  static CommonArgs match_args;
  match_cmd->add_option("--lda", match_lda, "diatom-lda model file")->required();
  match_cmd->add_option("--dtm", match_dtm, "diatom-dtm model file")->required();
  add_common(match_cmd, match_args);
  match_cmd->callback([&] {
    ManifestBuilder manifest("match", match_args.seed, match_args.threads);
    manifest.input(match_lda);
    manifest.input(match_dtm);
    const auto out_dir = prepare_out_dir(match_args.out);
    const auto match = match_topics(io::load_lda(match_lda), io::load_dtm(match_dtm));
    io::save_match_csv(match, (out_dir / "match.csv").string());
    manifest.write(out_dir);
  });

  // ---- synth -----------------------------------------------------------------
  auto* synth_cmd =
      app.add_subcommand("synth", "Generate a seeded synthetic corpus with planted dynamics");
  static std::string synth_spec;
  static CommonArgs synth_args;
  synth_cmd->add_option("--spec", synth_spec, "Scenario JSON")->required();
  auto* synth_seed_opt =
      synth_cmd->add_option("--seed", synth_args.seed, "Overrides the scenario seed")
          ->envname("DIATOM_SEED");
  synth_cmd->add_option("--threads", synth_args.threads, "Unused; generation is sequential")
      ->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
  synth_cmd->callback([&] {
    auto spec = parse_scenario(synth_spec);
    if (synth_seed_opt->count() > 0) spec.seed = synth_args.seed;
    ManifestBuilder manifest("synth", spec.seed, 1);
    manifest.input(synth_spec);
    const auto out_dir = prepare_out_dir(synth_args.out);

    const auto synth = generate(spec);
    io::save_documents_jsonl(synth.raw_docs, (out_dir / "corpus.jsonl").string());
    io::save_vocabulary(synth.vocab, (out_dir / "vocab.tsv").string());
    io::save_theta_csv(synth.theta_star, (out_dir / "theta_star.csv").string());
    io::save_prominence_csv(synth.prominence_star, (out_dir / "prominence_star.csv").string());
    {
      std::ofstream phi((out_dir / "phi_star.tsv").string());
      phi << "slice\ttopic";
      for (Index v = 0; v < spec.vocab_size; ++v) phi << '\t' << synth.vocab.word(v);
      phi << '\n';
      char buf[40];
      for (Index t = 0; t < spec.n_slices; ++t) {
        for (Index k = 0; k < spec.n_topics; ++k) {
          phi << t << '\t' << k;
          for (Index v = 0; v < spec.vocab_size; ++v) {
            std::snprintf(buf, sizeof(buf), "%.12g",
                          synth.phi_star[static_cast<std::size_t>(t)](k, v));
            phi << '\t' << buf;
          }
          phi << '\n';
        }
      }
    }
    manifest.write(out_dir);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Help and version exit cleanly; anything else is a usage error.
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

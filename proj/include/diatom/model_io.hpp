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

#include <map>
#include <string>
#include <vector>

#include "diatom/corpus.hpp"
#include "diatom/diagnostics.hpp"
#include "diatom/dtm.hpp"
#include "diatom/lda.hpp"
#include "diatom/prominence.hpp"
#include "diatom/sampler.hpp"

// Text formats for every artifact the pipeline exchanges. All writers use
// fixed printf formats so identical runs produce identical bytes.
namespace diatom::io {

// --- vocabulary -----------------------------------------------------------
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// --- models ----------------------------------------------------------------
void save_lda(const LdaModel& model, const std::string& path);
LdaModel load_lda(const std::string& path);

void save_dtm(const DtmModel& model, const std::string& path);
DtmModel load_dtm(const std::string& path);

// "diatom-lda" or "diatom-dtm" from a model file header.
std::string peek_model_kind(const std::string& path);

// --- documents --------------------------------------------------------------
// One JSON object per line: {"id", "date": "YYYY-01-01", "tokens": [...]}.
void save_documents_jsonl(const std::vector<Document>& docs, const std::string& path);

// --- tabular artifacts ------------------------------------------------------
void save_stats_csv(const std::vector<YearStats>& stats, const std::string& path);
void save_sample_report_csv(const std::vector<YearSampleStats>& report,
                            const std::string& path);

void save_theta_csv(const std::vector<Theta>& thetas, const std::string& path);
std::vector<Theta> load_theta_csv(const std::string& path);

void save_prominence_csv(const ProminenceSeries& series, const std::string& path);
void save_cluster_prominence_csv(const ProminenceSeries& series,
                                 const std::vector<TopicCluster>& clusters,
                                 const std::string& path);
void save_trends_csv(const std::vector<std::pair<std::string, TrendSummary>>& trends,
                     const std::string& path);

// Cluster config: one "name: 0,3,7" per line, '#' comments allowed.
std::vector<TopicCluster> load_clusters(const std::string& path);

void save_heatmap_csv(const HeatmapMatrix& heatmap, const std::string& path);
void save_heatmap_svg(const HeatmapMatrix& heatmap, const std::string& path);

void save_stretch_csv(const StretchReport& report,
                      const std::vector<std::string>& slice_labels,
                      const std::string& path);

void save_match_csv(const TopicMatch& match, const std::string& path);

// Per-slice topic export: slice label, topic, then the top-n words.
void save_slice_topics_tsv(const DtmModel& model, const Vocabulary& vocab, Index top_n,
                           const std::string& path);

// --- run manifest ------------------------------------------------------------
struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  int threads = 1;
  std::map<std::string, std::string> config;  // resolved settings
  std::map<std::string, std::string> inputs;  // path -> checksum
  double wall_clock_seconds = 0.0;
};

std::uint64_t file_checksum(const std::string& path);
void save_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace diatom::io

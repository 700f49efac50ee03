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

#include "diatom/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "diatom/rng.hpp"

namespace diatom::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

std::string fmt17(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt12(Scalar x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

void write_matrix_rows(std::ofstream& out, const Matrix& m) {
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out << '\t';
      out << fmt17(m(r, c));
    }
    out << '\n';
  }
}

void read_matrix_rows(std::ifstream& in, Matrix& m, const std::string& path) {
  std::string line;
  for (Index r = 0; r < m.rows(); ++r) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated matrix in " + path);
    const auto parts = split(line, '\t');
    if (static_cast<Index>(parts.size()) != m.cols()) {
      throw std::runtime_error("bad matrix row width in " + path);
    }
    for (Index c = 0; c < m.cols(); ++c) m(r, c) = std::stod(parts[static_cast<std::size_t>(c)]);
  }
}

std::string expect_field(std::ifstream& in, const std::string& key, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("truncated header in " + path);
  const auto parts = split(line, '\t');
  if (parts.size() != 2 || parts[0] != key) {
    throw std::runtime_error("expected header field '" + key + "' in " + path);
  }
  return parts[1];
}

}  // namespace

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  auto out = open_out(path);
  out << "# diatom-vocab\t1\t" << vocab.size() << '\t' << vocab.total_tokens() << '\n';
  for (Index i = 0; i < vocab.size(); ++i) {
    out << i << '\t' << vocab.word(i) << '\t' << vocab.doc_freq(i) << '\n';
  }
}

Vocabulary load_vocabulary(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty vocabulary file " + path);
  const auto header = split(line, '\t');
  if (header.size() != 4 || header[0] != "# diatom-vocab") {
    throw std::runtime_error("not a vocabulary file: " + path);
  }
  const std::int64_t total_tokens = std::stoll(header[3]);
  std::vector<std::string> words;
  std::vector<std::int64_t> freqs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, '\t');
    if (parts.size() != 3) throw std::runtime_error("bad vocabulary row in " + path);
    if (std::stoll(parts[0]) != static_cast<std::int64_t>(words.size())) {
      throw std::runtime_error("non-dense vocabulary indices in " + path);
    }
    words.push_back(parts[1]);
    freqs.push_back(std::stoll(parts[2]));
  }
  return Vocabulary(std::move(words), std::move(freqs), total_tokens);
}

void save_lda(const LdaModel& model, const std::string& path) {
  auto out = open_out(path);
  out << "diatom-lda\t1\n";
  out << "k\t" << model.n_topics() << '\n';
  out << "v\t" << model.vocab_size() << '\n';
  out << "alpha\t" << fmt17(model.alpha) << '\n';
  out << "beta\t" << fmt17(model.beta) << '\n';
  out << "vocab_hash\t" << hex64(model.vocab_hash) << '\n';
  write_matrix_rows(out, model.phi);
}

LdaModel load_lda(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split(line, '\t')[0] != "diatom-lda") {
    throw std::runtime_error("not a diatom-lda model file: " + path);
  }
  LdaModel model;
  const Index k = std::stoll(expect_field(in, "k", path));
  const Index v = std::stoll(expect_field(in, "v", path));
  model.alpha = std::stod(expect_field(in, "alpha", path));
  model.beta = std::stod(expect_field(in, "beta", path));
  model.vocab_hash = parse_hex64(expect_field(in, "vocab_hash", path));
  model.phi.resize(k, v);
  read_matrix_rows(in, model.phi, path);
  return model;
}

void save_dtm(const DtmModel& model, const std::string& path) {
  auto out = open_out(path);
  out << "diatom-dtm\t1\n";
  out << "t\t" << model.n_slices() << '\n';
  out << "k\t" << model.n_topics() << '\n';
  out << "v\t" << model.vocab_size() << '\n';
  out << "sigma2\t" << fmt17(model.sigma2) << '\n';
  out << "alpha\t" << fmt17(model.alpha) << '\n';
  out << "vocab_hash\t" << hex64(model.vocab_hash) << '\n';
  for (Index t = 0; t < model.n_slices(); ++t) {
    out << "slice\t" << model.slice_labels[static_cast<std::size_t>(t)] << '\t'
        << model.slice_first_year[static_cast<std::size_t>(t)] << '\t'
        << model.slice_last_year[static_cast<std::size_t>(t)] << '\n';
  }
  for (Index t = 0; t < model.n_slices(); ++t) {
    write_matrix_rows(out, model.beta_nat[static_cast<std::size_t>(t)]);
  }
}

DtmModel load_dtm(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || split(line, '\t')[0] != "diatom-dtm") {
    throw std::runtime_error("not a diatom-dtm model file: " + path);
  }
  DtmModel model;
  const Index t_slices = std::stoll(expect_field(in, "t", path));
  const Index k = std::stoll(expect_field(in, "k", path));
  const Index v = std::stoll(expect_field(in, "v", path));
  model.sigma2 = std::stod(expect_field(in, "sigma2", path));
  model.alpha = std::stod(expect_field(in, "alpha", path));
  model.vocab_hash = parse_hex64(expect_field(in, "vocab_hash", path));
  for (Index t = 0; t < t_slices; ++t) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated slice list in " + path);
    const auto parts = split(line, '\t');
    if (parts.size() != 4 || parts[0] != "slice") {
      throw std::runtime_error("bad slice row in " + path);
    }
    model.slice_labels.push_back(parts[1]);
    model.slice_first_year.push_back(std::stoi(parts[2]));
    model.slice_last_year.push_back(std::stoi(parts[3]));
  }
  model.beta_nat.assign(static_cast<std::size_t>(t_slices), Matrix(k, v));
  for (Index t = 0; t < t_slices; ++t) {
    read_matrix_rows(in, model.beta_nat[static_cast<std::size_t>(t)], path);
  }
  return model;
}

std::string peek_model_kind(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty model file: " + path);
  return split(line, '\t')[0];
}

void save_documents_jsonl(const std::vector<Document>& docs, const std::string& path) {
  auto out = open_out(path);
  for (const auto& d : docs) {
    nlohmann::json rec;
    rec["id"] = d.id;
    char date[16];
    std::snprintf(date, sizeof(date), "%04d-01-01", d.year);
    rec["date"] = date;
    rec["tokens"] = d.tokens;
    out << rec.dump() << '\n';
  }
}

void save_stats_csv(const std::vector<YearStats>& stats, const std::string& path) {
  auto out = open_out(path);
  out << "year,tokens,articles,mean_length\n";
  char mean[32];
  for (const auto& st : stats) {
    std::snprintf(mean, sizeof(mean), "%.2f", st.mean_length());
    out << st.year << ',' << st.tokens << ',' << st.articles << ',' << mean << '\n';
  }
}

void save_sample_report_csv(const std::vector<YearSampleStats>& report,
                            const std::string& path) {
  auto out = open_out(path);
  out << "year,kept_articles,kept_tokens,kept_fraction\n";
  char frac[32];
  for (const auto& st : report) {
    std::snprintf(frac, sizeof(frac), "%.6f", st.kept_fraction);
    out << st.year << ',' << st.kept_articles << ',' << st.kept_tokens << ',' << frac << '\n';
  }
}

void save_theta_csv(const std::vector<Theta>& thetas, const std::string& path) {
  auto out = open_out(path);
  const Index k = thetas.empty() ? 0 : thetas.front().weights.size();
  out << "doc_id,year";
  for (Index i = 0; i < k; ++i) out << ",theta_" << i;
  out << ",uninformed\n";
  for (const auto& th : thetas) {
    out << th.doc_id << ',' << th.year;
    for (Index i = 0; i < k; ++i) out << ',' << fmt12(th.weights[i]);
    out << ',' << (th.uninformed ? 1 : 0) << '\n';
  }
}

std::vector<Theta> load_theta_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty theta file " + path);
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "doc_id" || header[1] != "year") {
    throw std::runtime_error("not a theta csv: " + path);
  }
  const bool has_flag = header.back() == "uninformed";
  const std::size_t k = header.size() - 2 - (has_flag ? 1 : 0);
  std::vector<Theta> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != header.size()) throw std::runtime_error("bad theta row in " + path);
    Theta th;
    th.doc_id = parts[0];
    th.year = std::stoi(parts[1]);
    th.weights.resize(static_cast<Index>(k));
    for (std::size_t i = 0; i < k; ++i) th.weights[static_cast<Index>(i)] = std::stod(parts[2 + i]);
    if (has_flag) th.uninformed = parts.back() == "1";
    out.push_back(std::move(th));
  }
  return out;
}

void save_prominence_csv(const ProminenceSeries& series, const std::string& path) {
  auto out = open_out(path);
  out << "year";
  for (Index k = 0; k < series.n_topics(); ++k) out << ",topic_" << k;
  out << '\n';
  for (std::size_t i = 0; i < series.years.size(); ++i) {
    out << series.years[i];
    for (Index k = 0; k < series.n_topics(); ++k) {
      out << ',' << fmt12(series.values(static_cast<Index>(i), k));
    }
    out << '\n';
  }
}

void save_cluster_prominence_csv(const ProminenceSeries& series,
                                 const std::vector<TopicCluster>& clusters,
                                 const std::string& path) {
  auto out = open_out(path);
  out << "year";
  for (const auto& c : clusters) out << ',' << c.name;
  out << '\n';
  std::vector<Vector> columns;
  for (const auto& c : clusters) columns.push_back(cluster_prominence(series, c));
  for (std::size_t i = 0; i < series.years.size(); ++i) {
    out << series.years[i];
    for (const auto& col : columns) out << ',' << fmt12(col[static_cast<Index>(i)]);
    out << '\n';
  }
}

void save_trends_csv(const std::vector<std::pair<std::string, TrendSummary>>& trends,
                     const std::string& path) {
  auto out = open_out(path);
  out << "series,slope_per_year,direction\n";
  for (const auto& [name, trend] : trends) {
    out << name << ',' << fmt12(trend.slope_per_year) << ',' << to_string(trend.direction)
        << '\n';
  }
}

std::vector<TopicCluster> load_clusters(const std::string& path) {
  auto in = open_in(path);
  std::vector<TopicCluster> clusters;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.resize(hash_pos);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("clusters: missing ':' on line " + std::to_string(lineno));
    }
    TopicCluster cluster;
    cluster.name = line.substr(0, colon);
    cluster.name.erase(0, cluster.name.find_first_not_of(" \t"));
    cluster.name.erase(cluster.name.find_last_not_of(" \t") + 1);
    std::stringstream ss(line.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      cluster.members.push_back(std::stoll(item.substr(first)));
    }
    if (cluster.name.empty() || cluster.members.empty()) {
      throw std::runtime_error("clusters: empty name or member list on line " +
                               std::to_string(lineno));
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

void save_heatmap_csv(const HeatmapMatrix& heatmap, const std::string& path) {
  auto out = open_out(path);
  out << "word";
  for (const auto& label : heatmap.slice_labels) out << ',' << label;
  out << '\n';
  for (std::size_t r = 0; r < heatmap.words.size(); ++r) {
    out << heatmap.words[r];
    for (Index t = 0; t < heatmap.values.cols(); ++t) {
      out << ',' << fmt12(heatmap.values(static_cast<Index>(r), t));
    }
    out << '\n';
  }
}

void save_heatmap_svg(const HeatmapMatrix& heatmap, const std::string& path) {
  const int cell_w = 34, cell_h = 18, label_w = 120, header_h = 60, margin = 8;
  const Index n_rows = heatmap.values.rows();
  const Index n_cols = heatmap.values.cols();
  const int width = label_w + static_cast<int>(n_cols) * cell_w + margin;
  const int height = header_h + static_cast<int>(n_rows) * cell_h + margin;
  const Scalar vmax = n_rows > 0 ? std::max(heatmap.values.maxCoeff(), 1e-12) : 1.0;

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" font-family=\"monospace\" font-size=\"10\">\n";
  out << "<text x=\"" << margin << "\" y=\"14\">topic " << heatmap.topic
      << " term probability by slice</text>\n";
  for (Index c = 0; c < n_cols; ++c) {
    out << "<text x=\"" << label_w + static_cast<int>(c) * cell_w + 2 << "\" y=\""
        << header_h - 6 << "\" transform=\"rotate(-45 "
        << label_w + static_cast<int>(c) * cell_w + 2 << ' ' << header_h - 6 << ")\">"
        << heatmap.slice_labels[static_cast<std::size_t>(c)] << "</text>\n";
  }
  char color[32];
  for (Index r = 0; r < n_rows; ++r) {
    out << "<text x=\"" << margin << "\" y=\""
        << header_h + static_cast<int>(r) * cell_h + 13 << "\">"
        << heatmap.words[static_cast<std::size_t>(r)] << "</text>\n";
    for (Index c = 0; c < n_cols; ++c) {
      const double z = heatmap.values(r, c) / vmax;  // 0..1 sequential scale
      const int red = static_cast<int>(255.0 * (1.0 - z));
      const int green = static_cast<int>(255.0 * (1.0 - 0.55 * z));
      std::snprintf(color, sizeof(color), "#%02x%02xff", red, green);
      out << "<rect x=\"" << label_w + static_cast<int>(c) * cell_w << "\" y=\""
          << header_h + static_cast<int>(r) * cell_h << "\" width=\"" << cell_w
          << "\" height=\"" << cell_h << "\" fill=\"" << color
          << "\" stroke=\"#ffffff\"/>\n";
    }
  }
  out << "</svg>\n";
}

void save_stretch_csv(const StretchReport& report,
                      const std::vector<std::string>& slice_labels,
                      const std::string& path) {
  auto out = open_out(path);
  out << "# topic," << report.topic << '\n';
  out << "# endpoint_js," << fmt12(report.endpoint_js) << '\n';
  if (report.onset_leakage) {
    out << "# onset_leakage," << fmt12(*report.onset_leakage)
        << " (diatom-defined metric: mean pre-onset probability mass on the onset word set)\n";
  }
  out << "transition,from,to,adjacent_js,top_word_rank_corr\n";
  for (Index t = 0; t < report.adjacent_js.size(); ++t) {
    out << t << ',' << slice_labels[static_cast<std::size_t>(t)] << ','
        << slice_labels[static_cast<std::size_t>(t + 1)] << ','
        << fmt12(report.adjacent_js[t]) << ',' << fmt12(report.top_word_rank_corr[t]) << '\n';
  }
}

void save_match_csv(const TopicMatch& match, const std::string& path) {
  auto out = open_out(path);
  out << "# candidate pairs only: LDA and DTM topics cannot be aligned in any other way "
         "than manual interpretation by domain experts\n";
  out << "lda_topic,dtm_topic,js_divergence,greedy\n";
  std::vector<std::pair<Index, Index>> greedy(match.greedy);
  for (const auto& [i, j, d] : match.ranked) {
    const bool is_greedy =
        std::find(greedy.begin(), greedy.end(), std::make_pair(i, j)) != greedy.end();
    out << i << ',' << j << ',' << fmt12(d) << ',' << (is_greedy ? 1 : 0) << '\n';
  }
}

void save_slice_topics_tsv(const DtmModel& model, const Vocabulary& vocab, Index top_n,
                           const std::string& path) {
  auto out = open_out(path);
  out << "slice\ttopic\trank\tword\tprobability\n";
  for (Index t = 0; t < model.n_slices(); ++t) {
    for (Index k = 0; k < model.n_topics(); ++k) {
      const Vector dist = topic_at_slice(model, k, t);
      const auto words = top_words(dist, vocab, std::min(top_n, model.vocab_size()));
      for (std::size_t r = 0; r < words.size(); ++r) {
        out << model.slice_labels[static_cast<std::size_t>(t)] << '\t' << k << '\t' << r
            << '\t' << vocab.word(words[r]) << '\t' << fmt12(dist[words[r]]) << '\n';
      }
    }
  }
}

std::uint64_t file_checksum(const std::string& path) {
  auto in = open_in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return rng::hash_bytes(content);
}

void save_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["config"] = manifest.config;
  nlohmann::json inputs = nlohmann::json::object();
  for (const auto& [p, checksum] : manifest.inputs) inputs[p] = checksum;
  j["inputs"] = inputs;
  j["wall_clock_seconds"] = manifest.wall_clock_seconds;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace diatom::io

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

#include "diatom/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <istream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "diatom/rng.hpp"

namespace diatom {

namespace {

bool is_ascii_token_char(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;  // bytes >= 0x80: UTF-8 payload
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text, const IngestConfig& cfg) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.size() >= cfg.min_token_len && !cfg.stopwords.count(current)) {
      out.push_back(current);
    }
    current.clear();
  };
  for (unsigned char c : text) {
    if (is_ascii_token_char(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::optional<int> parse_iso_year(const std::string& date) {
  // YYYY / YYYY-MM / YYYY-MM-DD, optionally followed by 'T'... after the day.
  if (date.size() < 4 || !all_digits(std::string_view(date).substr(0, 4))) {
    return std::nullopt;
  }
  const int year = std::stoi(date.substr(0, 4));
  if (date.size() == 4) return year;
  if (date[4] != '-' || date.size() < 7) return std::nullopt;
  if (!all_digits(std::string_view(date).substr(5, 2))) return std::nullopt;
  if (date.size() == 7) return year;
  if (date[7] != '-' || date.size() < 10) return std::nullopt;
  if (!all_digits(std::string_view(date).substr(8, 2))) return std::nullopt;
  if (date.size() == 10 || date[10] == 'T' || date[10] == ' ') return year;
  return std::nullopt;
}

std::vector<Document> ingest(std::istream& in, const IngestConfig& cfg,
                             IngestReport* report) {
  std::vector<Document> docs;
  IngestReport local;
  IngestReport& rep = report ? *report : local;

  std::string line;
  std::size_t lineno = 0;
  auto warn = [&](const std::string& msg) {
    rep.warnings.push_back({lineno, msg});
    ++rep.skipped;
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto rec = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      warn("malformed record");
      continue;
    }
    if (!rec.contains("id") || !rec["id"].is_string()) {
      warn("missing or non-string id");
      continue;
    }
    if (!rec.contains("date") || !rec["date"].is_string()) {
      warn("missing or non-string date");
      continue;
    }
    const auto year = parse_iso_year(rec["date"].get<std::string>());
    if (!year) {
      warn("unparseable date \"" + rec["date"].get<std::string>() + "\"");
      continue;
    }
    if ((cfg.start_year && *year < *cfg.start_year) ||
        (cfg.end_year && *year > *cfg.end_year)) {
      warn("year " + std::to_string(*year) + " outside the declared span");
      continue;
    }

    Document doc;
    doc.id = rec["id"].get<std::string>();
    doc.year = *year;
    if (rec.contains("tokens") && rec["tokens"].is_array()) {
      for (const auto& tok : rec["tokens"]) {
        if (!tok.is_string()) continue;
        for (auto& t : tokenize(tok.get<std::string>(), cfg)) {
          doc.tokens.push_back(std::move(t));
        }
      }
    } else if (rec.contains("text") && rec["text"].is_string()) {
      doc.tokens = tokenize(rec["text"].get<std::string>(), cfg);
    } else {
      warn("record has neither text nor tokens");
      continue;
    }
    ++rep.parsed;
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<Document> ingest_file(const std::string& path, const IngestConfig& cfg,
                                  IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  return ingest(in, cfg, report);
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::int64_t> doc_freq,
                       std::int64_t total_tokens)
    : words_(std::move(words)), doc_freq_(std::move(doc_freq)), total_tokens_(total_tokens) {
  if (words_.size() != doc_freq_.size()) {
    throw std::invalid_argument("vocabulary: words/doc_freq size mismatch");
  }
  index_.reserve(words_.size());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<Index>(i)).second) {
      throw std::invalid_argument("vocabulary: duplicate word " + words_[i]);
    }
    for (unsigned char c : words_[i]) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= static_cast<unsigned char>('\n');
    h *= 0x100000001b3ULL;
  }
  hash_ = h;
}

std::optional<Index> Vocabulary::index_of(const std::string& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const std::vector<Document>& docs, std::int64_t min_df,
                            double max_df_ratio, std::size_t max_size) {
  if (docs.empty()) throw std::invalid_argument("build_vocabulary: no documents");
  if (!(max_df_ratio > 0.0) || max_df_ratio > 1.0) {
    throw std::invalid_argument("build_vocabulary: max_df_ratio must be in (0, 1]");
  }
  if (max_size == 0) throw std::invalid_argument("build_vocabulary: max_size must be positive");

  std::map<std::string, std::int64_t> df;  // ordered: lexicographic tie-break for free
  std::int64_t total_tokens = 0;
  {
    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
      seen.clear();
      for (const auto& tok : doc.tokens) {
        ++total_tokens;
        if (seen.insert(tok).second) ++df[tok];
      }
    }
  }

  const double n_docs = static_cast<double>(docs.size());
  std::vector<std::pair<std::string, std::int64_t>> surviving;
  for (const auto& [word, freq] : df) {
    if (freq >= min_df && static_cast<double>(freq) / n_docs <= max_df_ratio) {
      surviving.emplace_back(word, freq);
    }
  }
  if (surviving.empty()) {
    throw std::runtime_error(
        "build_vocabulary: no words survive min_df=" + std::to_string(min_df) +
        " max_df_ratio=" + std::to_string(max_df_ratio));
  }

  std::stable_sort(surviving.begin(), surviving.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  if (surviving.size() > max_size) surviving.resize(max_size);

  std::vector<std::string> words;
  std::vector<std::int64_t> freqs;
  words.reserve(surviving.size());
  freqs.reserve(surviving.size());
  for (auto& [word, freq] : surviving) {
    words.push_back(std::move(word));
    freqs.push_back(freq);
  }
  return Vocabulary(std::move(words), std::move(freqs), total_tokens);
}

BowDocument vectorize(const Document& doc, const Vocabulary& vocab) {
  BowDocument bow;
  bow.doc_id = doc.id;
  bow.year = doc.year;
  std::map<Index, std::int64_t> counts;
  for (const auto& tok : doc.tokens) {
    if (auto idx = vocab.index_of(tok)) ++counts[*idx];
  }
  bow.counts.assign(counts.begin(), counts.end());
  for (const auto& [idx, c] : bow.counts) {
    (void)idx;
    bow.token_total += c;
  }
  return bow;
}

std::vector<BowDocument> vectorize_all(const std::vector<Document>& docs,
                                       const Vocabulary& vocab, int threads) {
  std::vector<BowDocument> out(docs.size());
  if (threads <= 1 || docs.size() < 2) {
    for (std::size_t i = 0; i < docs.size(); ++i) out[i] = vectorize(docs[i], vocab);
    return out;
  }
  const std::size_t n_chunks = static_cast<std::size_t>(threads);
  std::vector<std::future<void>> futures;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    futures.push_back(std::async(std::launch::async, [&, c] {
      for (std::size_t i = c; i < docs.size(); i += n_chunks) {
        out[i] = vectorize(docs[i], vocab);
      }
    }));
  }
  for (auto& f : futures) f.get();
  return out;
}

std::optional<Index> TimeSlicedCorpus::slice_of_year(int year) const {
  if (year < start_year || year > end_year || granularity < 1) return std::nullopt;
  return static_cast<Index>((year - start_year) / granularity);
}

TimeSlicedCorpus slice_by_year(std::vector<BowDocument> docs, int granularity) {
  if (granularity < 1) throw std::invalid_argument("slice_by_year: granularity must be >= 1");
  if (docs.empty()) throw std::invalid_argument("slice_by_year: no documents");

  int lo = docs.front().year, hi = docs.front().year;
  for (const auto& d : docs) {
    lo = std::min(lo, d.year);
    hi = std::max(hi, d.year);
  }

  TimeSlicedCorpus out;
  out.granularity = granularity;
  out.start_year = lo;
  out.end_year = hi;
  const int n_slices = (hi - lo) / granularity + 1;
  out.slices.resize(static_cast<std::size_t>(n_slices));
  for (int s = 0; s < n_slices; ++s) {
    TimeSlice& slice = out.slices[static_cast<std::size_t>(s)];
    slice.first_year = lo + s * granularity;
    slice.last_year = std::min(hi, slice.first_year + granularity - 1);
    slice.label = granularity == 1 ? std::to_string(slice.first_year)
                                   : std::to_string(slice.first_year) + "-" +
                                         std::to_string(slice.last_year);
  }
  for (auto& d : docs) {
    const int s = (d.year - lo) / granularity;
    out.slices[static_cast<std::size_t>(s)].docs.push_back(std::move(d));
  }
  for (const auto& slice : out.slices) {
    if (slice.docs.empty()) {
      throw std::runtime_error("slice_by_year: slice " + slice.label +
                               " is empty; every slice needs documents");
    }
  }
  return out;
}

std::vector<YearStats> corpus_stats(const std::vector<BowDocument>& docs) {
  std::map<int, YearStats> by_year;
  for (const auto& d : docs) {
    auto& st = by_year[d.year];
    st.year = d.year;
    st.tokens += d.token_total;
    st.articles += 1;
  }
  std::vector<YearStats> out;
  out.reserve(by_year.size());
  for (const auto& [year, st] : by_year) {
    (void)year;
    out.push_back(st);
  }
  return out;
}

}  // namespace diatom

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
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "diatom/types.hpp"

namespace diatom {

// A timestamped article reduced to its surviving lowercase tokens. Documents
// that lose every token during preprocessing stay in the ingest output so
// callers can report them, but they must be excluded from model training.
struct Document {
  std::string id;
  int year = 0;
  std::vector<std::string> tokens;

  bool empty() const { return tokens.empty(); }
};

struct IngestConfig {
  std::size_t min_token_len = 2;
  std::unordered_set<std::string> stopwords;
  // Optional collection span; records dated outside it are skipped.
  std::optional<int> start_year;
  std::optional<int> end_year;
};

struct IngestReport {
  struct Warning {
    std::size_t line = 0;
    std::string message;
  };
  std::vector<Warning> warnings;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
};

// Splits on ASCII non-alphanumerics, lowercases ASCII letters, keeps
// multi-byte UTF-8 sequences intact, then applies the length and stopword
// filters.
std::vector<std::string> tokenize(const std::string& text, const IngestConfig& cfg);

// Accepts ISO-8601 "YYYY", "YYYY-MM" or "YYYY-MM-DD" (a time suffix after the
// day is tolerated) and returns the year. Anything else is rejected.
std::optional<int> parse_iso_year(const std::string& date);

// Reads line-delimited JSON records {id, date, text|tokens}. Malformed
// records produce a warning with the 1-based line number and are skipped;
// documents come back in file order.
std::vector<Document> ingest(std::istream& in, const IngestConfig& cfg,
                             IngestReport* report = nullptr);
std::vector<Document> ingest_file(const std::string& path, const IngestConfig& cfg,
                                  IngestReport* report = nullptr);

// Dense word <-> index map. Index order is (doc_freq descending, word
// ascending), fixed at construction.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::vector<std::int64_t> doc_freq,
             std::int64_t total_tokens);

  Index size() const { return static_cast<Index>(words_.size()); }
  const std::string& word(Index i) const { return words_.at(static_cast<std::size_t>(i)); }
  std::optional<Index> index_of(const std::string& w) const;
  std::int64_t doc_freq(Index i) const { return doc_freq_.at(static_cast<std::size_t>(i)); }
  std::int64_t total_tokens() const { return total_tokens_; }
  const std::vector<std::string>& words() const { return words_; }

  // FNV-1a over the word list; binds trained models to their vocabulary.
  std::uint64_t hash() const { return hash_; }

 private:
  std::vector<std::string> words_;
  std::vector<std::int64_t> doc_freq_;
  std::unordered_map<std::string, Index> index_;
  std::int64_t total_tokens_ = 0;
  std::uint64_t hash_ = 0;
};

// Keeps words with doc_freq >= min_df and doc_freq/|docs| <= max_df_ratio;
// if more than max_size survive, the max_size most frequent win, ties broken
// lexicographically. Throws if nothing survives.
Vocabulary build_vocabulary(const std::vector<Document>& docs, std::int64_t min_df,
                            double max_df_ratio, std::size_t max_size);

// Sparse bag of words; counts are sorted by word index.
struct BowDocument {
  std::string doc_id;
  int year = 0;
  std::vector<std::pair<Index, std::int64_t>> counts;
  std::int64_t token_total = 0;

  bool empty() const { return counts.empty(); }
};

// Out-of-vocabulary tokens are dropped; an all-OOV document comes back empty
// (flagged by empty(), not an error).
BowDocument vectorize(const Document& doc, const Vocabulary& vocab);

// Order-preserving parallel map over documents.
std::vector<BowDocument> vectorize_all(const std::vector<Document>& docs,
                                       const Vocabulary& vocab, int threads = 1);

struct TimeSlice {
  std::string label;
  int first_year = 0;
  int last_year = 0;
  std::vector<BowDocument> docs;
};

struct TimeSlicedCorpus {
  std::vector<TimeSlice> slices;
  int granularity = 1;
  int start_year = 0;
  int end_year = 0;

  Index n_slices() const { return static_cast<Index>(slices.size()); }
  // Slice containing the year, or nullopt outside the span.
  std::optional<Index> slice_of_year(int year) const;
};

// Partitions documents into contiguous year blocks of the given width. An
// empty slice inside the span is an error: the chain model downstream needs
// every slice populated.
TimeSlicedCorpus slice_by_year(std::vector<BowDocument> docs, int granularity);

struct YearStats {
  int year = 0;
  std::int64_t tokens = 0;
  std::int64_t articles = 0;

  double mean_length() const {
    return articles == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(articles);
  }
};

// Per-year token/article totals, ascending by year; years without documents
// are absent.
std::vector<YearStats> corpus_stats(const std::vector<BowDocument>& docs);

}  // namespace diatom

//
// Copyright 2026 The dptext Authors.
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
//

#ifndef DPTEXT_TEXT_PIPELINE_H_
#define DPTEXT_TEXT_PIPELINE_H_

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptext/feature_vector.h"

namespace dptext {

struct RawDocument {
  std::string id;
  std::string text;
  std::optional<std::string> label;

  friend bool operator==(const RawDocument&, const RawDocument&) = default;
};

// Cleaned tokens in document order. Duplicates are preserved.
using TokenList = std::vector<std::string>;

class StopwordList {
 public:
  StopwordList() = default;

  // Fails if any entry contains an uppercase letter.
  static absl::StatusOr<StopwordList> Create(std::span<const std::string> words);

  // One word per line; blank lines and lines starting with '#' are skipped,
  // surrounding whitespace is trimmed.
  static absl::StatusOr<StopwordList> Parse(absl::string_view text);
  static absl::StatusOr<StopwordList> Load(const std::string& path);

  // The shipped English list (data/stopwords_en.txt).
  static const StopwordList& Default();

  bool Contains(absl::string_view word) const;
  size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

// Removes every <...> span. A removed tag becomes a single space between the
// surrounding text, but no space is inserted at either end of the output or
// next to existing whitespace. An unclosed '<' leaves the remainder as-is.
std::string StripMarkup(absl::string_view text);

// Splits on every character that is not an ASCII letter or digit, lowercases,
// and drops pieces shorter than 2 characters or containing a digit.
TokenList Tokenize(absl::string_view text);

// Suffix-rule lemmatizer. Rules, first match wins, each requiring the
// remaining stem to be at least 3 letters:
//
//   ies  -> y
//   sses -> ss
//   ing  -> ""   then append "e" if the stem ends in a restore pattern
//   ed   -> ""   same restore rule
//   s    -> ""   unless the word ends in ss, us or is
//
// Words in a small exception table are left unchanged. Rules are reapplied
// until none matches, so Lemmatize(Lemmatize(w)) == Lemmatize(w).
std::string Lemmatize(absl::string_view token);

TokenList RemoveStopwords(const TokenList& tokens, const StopwordList& stops);

// StripMarkup -> Tokenize -> Lemmatize each token -> RemoveStopwords.
TokenList CleanDocument(const RawDocument& doc, const StopwordList& stops);

// Token -> index map over tokens sorted lexicographically, with document
// frequencies.
class Vocabulary {
 public:
  static absl::StatusOr<Vocabulary> Build(std::span<const TokenList> corpus,
                                          size_t min_doc_freq = 1);

  size_t size() const { return tokens_.size(); }
  size_t num_documents() const { return num_documents_; }

  std::optional<size_t> IndexOf(absl::string_view token) const;
  size_t DocumentFrequency(size_t index) const { return doc_freq_[index]; }
  const std::string& Token(size_t index) const { return tokens_[index]; }

  // Tab-separated `token<TAB>index<TAB>doc_freq`, one entry per line sorted
  // by index, preceded by a `#num_documents<TAB>N` line.
  void Write(std::ostream& out) const;
  static absl::StatusOr<Vocabulary> Read(std::istream& in);
  absl::Status Save(const std::string& path) const;
  static absl::StatusOr<Vocabulary> Load(const std::string& path);

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  std::vector<std::string> tokens_;
  std::vector<size_t> doc_freq_;
  std::map<std::string, size_t, std::less<>> index_;
  size_t num_documents_ = 0;
};

absl::StatusOr<Vocabulary> BuildVocabulary(std::span<const TokenList> corpus,
                                           size_t min_doc_freq);

enum class FeatureScheme { kCount, kTfidf };

absl::string_view FeatureSchemeName(FeatureScheme scheme);
std::optional<FeatureScheme> ParseFeatureScheme(absl::string_view name);

// kCount: raw counts of in-vocabulary tokens.
// kTfidf: count * (ln((1 + N) / (1 + df)) + 1), then L2-normalized.
// Out-of-vocabulary tokens are ignored.
FeatureVector Featurize(const TokenList& tokens, const Vocabulary& vocab,
                        FeatureScheme scheme);

}  // namespace dptext

#endif  // DPTEXT_TEXT_PIPELINE_H_

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

#include "dptext/text_pipeline.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "dptext/numeric_text.h"
#include "dptext/status_macros.h"

namespace dptext {
namespace internal {
extern const absl::string_view kDefaultStopwordsText;
}  // namespace internal

namespace {

constexpr size_t kMinStem = 3;

// Stem endings after which a stripped "ing"/"ed" leaves a word that needs its
// final "e" back (arrang -> arrange, describ -> describe).
constexpr std::array<absl::string_view, 46> kRestoreEPatterns = {
    "at",  "iz",  "yz",  "bl",  "pl",  "gl",  "tl",  "kl",  "fl",  "dl",
    "cl",  "zl",  "ib",  "ang", "eng", "rg",  "dg",  "ag",  "uc",  "rc",
    "nc",  "tic", "vic", "ac",  "ov",  "iv",  "av",  "rv",  "lv",  "os",
    "ud",  "vid", "cid", "uir", "sir", "aus", "ut",  "min", "par", "har",
    "tur", "sur", "sum", "vis", "ris", "dul",
};

// Words that the suffix rules would mangle.
constexpr std::array<absl::string_view, 14> kLemmaExceptions = {
    "always",   "anything", "does",      "during",     "everything",
    "news",     "nothing",  "ourselves", "perhaps",    "series",
    "something", "species", "themselves", "yourselves",
};

// Endings that block the plural "s" rule.
constexpr std::array<absl::string_view, 3> kKeepFinalS = {"ss", "us", "is"};

bool IsException(absl::string_view word) {
  return std::find(kLemmaExceptions.begin(), kLemmaExceptions.end(), word) !=
         kLemmaExceptions.end();
}

bool NeedsFinalE(absl::string_view stem) {
  return std::any_of(
      kRestoreEPatterns.begin(), kRestoreEPatterns.end(),
      [stem](absl::string_view pattern) { return absl::EndsWith(stem, pattern); });
}

// Applies the first matching rule. Returns nullopt when no rule matches.
std::optional<std::string> ApplyOneRule(absl::string_view word) {
  if (IsException(word)) return std::nullopt;
  auto stem_of = [word](size_t suffix_len) -> std::optional<absl::string_view> {
    if (word.size() < suffix_len + kMinStem) return std::nullopt;
    return word.substr(0, word.size() - suffix_len);
  };

  if (absl::EndsWith(word, "ies")) {
    if (auto stem = stem_of(3)) return absl::StrCat(*stem, "y");
  }
  if (absl::EndsWith(word, "sses")) {
    if (auto stem = stem_of(4)) return absl::StrCat(*stem, "ss");
  }
  for (absl::string_view suffix : {absl::string_view("ing"),
                                  absl::string_view("ed")}) {
    if (!absl::EndsWith(word, suffix)) continue;
    if (auto stem = stem_of(suffix.size())) {
      return NeedsFinalE(*stem) ? absl::StrCat(*stem, "e") : std::string(*stem);
    }
  }
  if (absl::EndsWith(word, "s") &&
      std::none_of(kKeepFinalS.begin(), kKeepFinalS.end(),
                   [word](absl::string_view e) { return absl::EndsWith(word, e); })) {
    if (auto stem = stem_of(1)) return std::string(*stem);
  }
  return std::nullopt;
}

bool IsWhitespace(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

absl::StatusOr<StopwordList> StopwordList::Create(
    std::span<const std::string> words) {
  StopwordList list;
  for (const std::string& word : words) {
    if (std::any_of(word.begin(), word.end(), [](char c) {
          return std::isupper(static_cast<unsigned char>(c));
        })) {
      return absl::InvalidArgumentError(
          absl::StrCat("stopword '", word, "' is not lowercase"));
    }
    if (!word.empty()) list.words_.insert(word);
  }
  return list;
}

absl::StatusOr<StopwordList> StopwordList::Parse(absl::string_view text) {
  std::vector<std::string> words;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    words.emplace_back(line);
  }
  return Create(words);
}

absl::StatusOr<StopwordList> StopwordList::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const StopwordList& StopwordList::Default() {
  static const StopwordList* const list = [] {
    auto parsed = Parse(internal::kDefaultStopwordsText);
    return new StopwordList(parsed.ok() ? *std::move(parsed) : StopwordList());
  }();
  return *list;
}

bool StopwordList::Contains(absl::string_view word) const {
  return words_.find(word) != words_.end();
}

std::string StripMarkup(absl::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<') {
      const size_t close = text.find('>', i + 1);
      if (close == absl::string_view::npos) {
        // Unclosed bracket: the rest is literal text.
        if (pending_space && !out.empty() && !IsWhitespace(out.back())) {
          out.push_back(' ');
        }
        absl::StrAppend(&out, text.substr(i));
        return out;
      }
      pending_space = true;
      i = close + 1;
      continue;
    }
    if (pending_space && !out.empty() && !IsWhitespace(out.back()) &&
        !IsWhitespace(text[i])) {
      out.push_back(' ');
    }
    pending_space = false;
    out.push_back(text[i]);
    ++i;
  }
  return out;
}

TokenList Tokenize(absl::string_view text) {
  TokenList tokens;
  std::string piece;
  bool has_digit = false;
  auto flush = [&] {
    if (piece.size() >= 2 && !has_digit) tokens.push_back(piece);
    piece.clear();
    has_digit = false;
  };
  for (const char c : text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::isalpha(u)) {
      piece.push_back(static_cast<char>(std::tolower(u)));
    } else if (u < 0x80 && std::isdigit(u)) {
      piece.push_back(c);
      has_digit = true;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string Lemmatize(absl::string_view token) {
  std::string word(token);
  // Every rule shortens the word, so this terminates.
  while (auto next = ApplyOneRule(word)) word = *std::move(next);
  return word;
}

TokenList RemoveStopwords(const TokenList& tokens, const StopwordList& stops) {
  TokenList kept;
  kept.reserve(tokens.size());
  for (const std::string& token : tokens) {
    if (!stops.Contains(token)) kept.push_back(token);
  }
  return kept;
}

TokenList CleanDocument(const RawDocument& doc, const StopwordList& stops) {
  TokenList tokens = Tokenize(StripMarkup(doc.text));
  for (std::string& token : tokens) token = Lemmatize(token);
  return RemoveStopwords(tokens, stops);
}

absl::StatusOr<Vocabulary> Vocabulary::Build(std::span<const TokenList> corpus,
                                             size_t min_doc_freq) {
  if (corpus.empty()) return absl::InvalidArgumentError("empty corpus");
  if (min_doc_freq == 0) {
    return absl::InvalidArgumentError("min_doc_freq must be positive");
  }
  std::map<std::string, size_t, std::less<>> df;
  for (const TokenList& doc : corpus) {
    std::set<absl::string_view> seen(doc.begin(), doc.end());
    for (absl::string_view token : seen) {
      auto it = df.find(token);
      if (it == df.end()) {
        df.emplace(std::string(token), 1);
      } else {
        ++it->second;
      }
    }
  }
  Vocabulary vocab;
  vocab.num_documents_ = corpus.size();
  for (const auto& [token, count] : df) {
    if (count < min_doc_freq) continue;
    vocab.index_.emplace(token, vocab.tokens_.size());
    vocab.tokens_.push_back(token);
    vocab.doc_freq_.push_back(count);
  }
  if (vocab.tokens_.empty()) {
    return absl::FailedPreconditionError(absl::StrCat(
        "vocabulary is empty after filtering with min_doc_freq=",
        min_doc_freq));
  }
  return vocab;
}

absl::StatusOr<Vocabulary> BuildVocabulary(std::span<const TokenList> corpus,
                                           size_t min_doc_freq) {
  return Vocabulary::Build(corpus, min_doc_freq);
}

std::optional<size_t> Vocabulary::IndexOf(absl::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::Write(std::ostream& out) const {
  out << "#num_documents\t" << num_documents_ << '\n';
  for (size_t i = 0; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\t' << i << '\t' << doc_freq_[i] << '\n';
  }
}

absl::StatusOr<Vocabulary> Vocabulary::Read(std::istream& in) {
  Vocabulary vocab;
  std::string line;
  size_t line_no = 0;
  bool have_num_documents = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<absl::string_view> fields = absl::StrSplit(line, '\t');
    if (line.front() == '#') {
      if (fields.size() == 2 && fields[0] == "#num_documents") {
        const auto n = ParseUint64(fields[1]);
        if (!n || *n == 0) {
          return absl::DataLossError(absl::StrCat(
              "vocabulary line ", line_no, ": bad document count"));
        }
        vocab.num_documents_ = *n;
        have_num_documents = true;
      }
      continue;
    }
    const auto index = fields.size() == 3 ? ParseUint64(fields[1]) : std::nullopt;
    const auto df = fields.size() == 3 ? ParseUint64(fields[2]) : std::nullopt;
    if (!index || !df || fields[0].empty()) {
      return absl::DataLossError(absl::StrCat(
          "vocabulary line ", line_no,
          ": expected token<TAB>index<TAB>doc_freq, got '", line, "'"));
    }
    if (*index != vocab.tokens_.size()) {
      return absl::DataLossError(
          absl::StrCat("vocabulary line ", line_no, ": index ", *index,
                       " out of sequence (expected ", vocab.tokens_.size(),
                       ")"));
    }
    if (!vocab.tokens_.empty() && !(vocab.tokens_.back() < fields[0])) {
      return absl::DataLossError(absl::StrCat(
          "vocabulary line ", line_no, ": tokens not in sorted order"));
    }
    vocab.index_.emplace(std::string(fields[0]), vocab.tokens_.size());
    vocab.tokens_.emplace_back(fields[0]);
    vocab.doc_freq_.push_back(*df);
  }
  if (vocab.tokens_.empty()) return absl::DataLossError("empty vocabulary");
  if (!have_num_documents) {
    return absl::DataLossError("vocabulary missing #num_documents header");
  }
  for (size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.doc_freq_[i] == 0 || vocab.doc_freq_[i] > vocab.num_documents_) {
      return absl::DataLossError(absl::StrCat(
          "vocabulary token '", vocab.tokens_[i], "' has doc_freq ",
          vocab.doc_freq_[i], " outside [1, ", vocab.num_documents_, "]"));
    }
  }
  return vocab;
}

absl::Status Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  Write(out);
  out.flush();
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Vocabulary> Vocabulary::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return Read(in);
}

absl::string_view FeatureSchemeName(FeatureScheme scheme) {
  return scheme == FeatureScheme::kCount ? "count" : "tfidf";
}

std::optional<FeatureScheme> ParseFeatureScheme(absl::string_view name) {
  if (name == "count") return FeatureScheme::kCount;
  if (name == "tfidf") return FeatureScheme::kTfidf;
  return std::nullopt;
}

FeatureVector Featurize(const TokenList& tokens, const Vocabulary& vocab,
                        FeatureScheme scheme) {
  std::map<uint32_t, double> counts;
  for (const std::string& token : tokens) {
    if (const auto index = vocab.IndexOf(token)) {
      counts[static_cast<uint32_t>(*index)] += 1.0;
    }
  }
  FeatureVector features;
  features.num_features = vocab.size();
  features.entries.assign(counts.begin(), counts.end());
  if (scheme == FeatureScheme::kTfidf) {
    const double n = static_cast<double>(vocab.num_documents());
    for (auto& [index, weight] : features.entries) {
      const double df = static_cast<double>(vocab.DocumentFrequency(index));
      weight *= std::log((1.0 + n) / (1.0 + df)) + 1.0;
    }
    const double norm = features.L2Norm();
    if (norm > 0.0) {
      for (auto& [index, weight] : features.entries) weight /= norm;
    }
  }
  return features;
}

}  // namespace dptext

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

#include "dptext/synthetic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "dptext/random.h"

namespace dptext {
namespace {

using WordList = std::array<const char*, 8>;

// Disjoint after cleaning.
constexpr std::array<WordList, 4> kIndicators = {{
    {"consent", "disclosures", "tracking", "encryption", "retention",
     "identifiers", "surveillance", "anonymity"},
    {"borrowing", "books", "catalog", "shelves", "lending", "manuscripts",
     "archive", "periodicals"},
    {"payments", "invoice", "credit", "banking", "loans", "accounting", "tax",
     "budget"},
    {"patients", "clinical", "diagnosis", "hospital", "treatment",
     "medication", "nurses", "therapy"},
}};

constexpr std::array<const char*, 12> kFiller = {
    "policy",  "section",   "public",     "provisions", "general", "term",
    "annual",  "office",    "statement",  "regulation", "federal", "agency"};

constexpr std::array<const char*, 6> kStopwords = {"the", "of",  "and",
                                                   "for", "is", "with"};

size_t Between(RandomStream& rng, size_t lo, size_t hi) {
  return lo + static_cast<size_t>(rng.NextIndex(hi - lo + 1));
}

}  // namespace

std::vector<RawDocument> GenerateSyntheticCorpus(
    const SyntheticCorpusOptions& options) {
  const size_t k_count = std::clamp<size_t>(options.num_classes, 2, 4);
  const size_t min_ind = std::max<size_t>(1, options.min_indicators);
  const size_t max_ind = std::max(min_ind, options.max_indicators);
  const size_t pool = std::clamp<size_t>(options.indicator_pool, 1, 8);
  const size_t max_fill = std::max(options.min_filler, options.max_filler);

  RandomStream rng(options.seed);
  std::vector<RawDocument> docs;
  docs.reserve(options.num_documents);
  for (size_t i = 0; i < options.num_documents; ++i) {
    const size_t cls = i % k_count;
    std::vector<std::string> words;
    const size_t n_ind = Between(rng, min_ind, max_ind);
    for (size_t j = 0; j < n_ind; ++j) {
      words.emplace_back(kIndicators[cls][rng.NextIndex(pool)]);
    }
    const size_t n_fill = Between(rng, options.min_filler, max_fill);
    for (size_t j = 0; j < n_fill; ++j) {
      words.emplace_back(kFiller[rng.NextIndex(kFiller.size())]);
    }
    const size_t n_stop = Between(rng, 1, 4);
    for (size_t j = 0; j < n_stop; ++j) {
      words.emplace_back(kStopwords[rng.NextIndex(kStopwords.size())]);
    }
    Shuffle(std::span<std::string>(words), rng);
    words.front()[0] = static_cast<char>(
        std::toupper(static_cast<unsigned char>(words.front()[0])));

    RawDocument doc;
    doc.id = absl::StrFormat("doc-%05d", i);
    doc.label = absl::StrCat("class_", std::string(1, static_cast<char>('a' + cls)));
    doc.text = absl::StrCat("<p>Section ", 100 + rng.NextIndex(900), ". ",
                            absl::StrJoin(words, " "), ".</p>");
    docs.push_back(std::move(doc));
  }
  return docs;
}

}  // namespace dptext

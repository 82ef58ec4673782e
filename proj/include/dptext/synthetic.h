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

#ifndef DPTEXT_SYNTHETIC_H_
#define DPTEXT_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dptext/text_pipeline.h"

namespace dptext {

struct SyntheticCorpusOptions {
  size_t num_documents = 500;
  size_t num_classes = 2;  // At most 4.
  uint64_t seed = 0;
  // Size of each class's indicator pool (1 to 8).
  size_t indicator_pool = 3;
  // Indicator words per document, drawn from the document's class; at least 1.
  size_t min_indicators = 8;
  size_t max_indicators = 12;
  // Filler words per document, drawn from a pool shared by all classes.
  size_t min_filler = 1;
  size_t max_filler = 3;
};

// Policy-style documents whose classes use disjoint indicator vocabularies,
// so the cleaned corpus is linearly separable. Text carries paragraph markup,
// mixed case, plural and -ing forms, stopwords and section numbers so that
// every cleaning stage has work to do. Labels are "class_a", "class_b", ...
// and classes are assigned round-robin.
std::vector<RawDocument> GenerateSyntheticCorpus(
    const SyntheticCorpusOptions& options);

}  // namespace dptext

#endif  // DPTEXT_SYNTHETIC_H_

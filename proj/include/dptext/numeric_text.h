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

#ifndef DPTEXT_NUMERIC_TEXT_H_
#define DPTEXT_NUMERIC_TEXT_H_

#include <cstdint>
#include <optional>
#include <string>
#include "absl/strings/string_view.h"

namespace dptext {

// Shortest decimal text that parses back to exactly `value`. Infinities are
// written as "inf" / "-inf".
std::string FormatDouble(double value);

// Parses a full-string decimal (or "inf", "-inf", "nan"). Surrounding
// whitespace is not accepted.
std::optional<double> ParseDouble(absl::string_view text);
std::optional<uint64_t> ParseUint64(absl::string_view text);
std::optional<bool> ParseBool(absl::string_view text);

}  // namespace dptext

#endif  // DPTEXT_NUMERIC_TEXT_H_

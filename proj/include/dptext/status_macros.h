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

#ifndef DPTEXT_STATUS_MACROS_H_
#define DPTEXT_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPTEXT_STATUS_CONCAT_INNER_(a, b) a##b
#define DPTEXT_STATUS_CONCAT_(a, b) DPTEXT_STATUS_CONCAT_INNER_(a, b)

// Evaluates an expression returning absl::Status and returns early on error.
#define RETURN_IF_ERROR(expr)                  \
  do {                                         \
    const absl::Status _dptext_status = (expr); \
    if (!_dptext_status.ok()) {                \
      return _dptext_status;                   \
    }                                          \
  } while (0)

#define ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                           \
  if (!statusor.ok()) {                              \
    return std::move(statusor).status();             \
  }                                                  \
  lhs = std::move(statusor).value()

// Evaluates an expression returning absl::StatusOr<T>; on success moves the
// value into `lhs`, otherwise returns the error from the enclosing function.
#define ASSIGN_OR_RETURN(lhs, rexpr) \
  ASSIGN_OR_RETURN_IMPL_(            \
      DPTEXT_STATUS_CONCAT_(_dptext_statusor_, __LINE__), lhs, rexpr)

#endif  // DPTEXT_STATUS_MACROS_H_

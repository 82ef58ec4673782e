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

#ifndef DPTEXT_CLI_H_
#define DPTEXT_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace dptext {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDataError = 2;

// Entry point of the `dptext` tool. `args[0]` is the program name.
// Subcommands: clean, vocab, train, evaluate, sweep, synth.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace dptext

#endif  // DPTEXT_CLI_H_

// Copyright 2026 The mlrl Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

namespace mlrl::cli {

// Exit codes: 0 success, 1 runtime error, 2 usage error.
inline constexpr int kSuccess = 0;
inline constexpr int kRuntimeError = 1;
inline constexpr int kUsageError = 2;

// `mlrl [run] --data ... ` or `mlrl compare A.json B.json`.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace mlrl::cli

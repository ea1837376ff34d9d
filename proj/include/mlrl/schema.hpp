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

#include <string>
#include <vector>

namespace mlrl {

enum class AttributeKind { numerical, nominal };

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::numerical;
  // Category dictionary of a nominal attribute; feature values store the
  // index into this list.
  std::vector<std::string> categories;

  bool operator==(const Attribute&) const = default;
};

}  // namespace mlrl

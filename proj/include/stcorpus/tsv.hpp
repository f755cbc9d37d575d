// Copyright 2026 The stcorpus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string_view>

namespace stcorpus {

/// Comment lines in the tab-separated inputs start with "#" followed by
/// whitespace (or nothing). A leading hashtag such as "#sardine" is data.
inline bool is_comment_line(std::string_view line) {
  return !line.empty() && line[0] == '#' &&
         (line.size() == 1 || line[1] == ' ' || line[1] == '\t');
}

}  // namespace stcorpus

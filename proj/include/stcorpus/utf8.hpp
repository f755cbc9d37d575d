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

#include <cstddef>
#include <string>
#include <string_view>

// Minimal UTF-8 handling for Latin-script social media text.
namespace stcorpus::utf8 {

/// Decodes the code point at `pos` and advances it. Invalid sequences yield
/// U+FFFD and consume one byte.
char32_t next(std::string_view s, std::size_t& pos);

void append(std::string& out, char32_t cp);

/// Simple case mapping for Latin-1, Latin Extended-A, Greek and Cyrillic.
char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

/// Lowercases and strips diacritics ("Città" -> "citta", "Ærø" -> "aero").
std::string fold(std::string_view s);

bool is_space(char32_t cp);

}  // namespace stcorpus::utf8

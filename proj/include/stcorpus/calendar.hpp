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

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace stcorpus {

using Instant = std::chrono::sys_seconds;
using Day = std::chrono::sys_days;

/// Accepts ISO-8601 ("2020-03-10T08:00:00Z", optional fraction, "Z" or
/// "+hh:mm"/"+hhmm" offset, ' ' allowed instead of 'T'), the classic
/// Twitter form ("Tue Mar 10 08:00:00 +0000 2020") and bare epoch seconds.
std::optional<Instant> parse_instant(std::string_view text);

/// "YYYY-MM-DD" only.
std::optional<Day> parse_date(std::string_view text);

std::string format_instant(Instant t);
std::string format_date(Day d);

inline Day utc_day(Instant t) { return std::chrono::floor<std::chrono::days>(t); }

/// "YYYY-MM" of the UTC date.
std::string month_key(Instant t);

}  // namespace stcorpus

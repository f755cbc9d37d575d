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

#include "stcorpus/calendar.hpp"

#include <array>
#include <cstdio>

namespace stcorpus {
namespace {

using namespace std::chrono;

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return done() ? '\0' : s_[pos_]; }
  void skip() { ++pos_; }

  bool eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  // Exactly `width` digits.
  std::optional<int> digits(int width) {
    if (pos_ + width > s_.size()) return std::nullopt;
    int v = 0;
    for (int i = 0; i < width; ++i) {
      char c = s_[pos_ + i];
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    pos_ += width;
    return v;
  }

  std::string_view word(std::size_t n) {
    if (pos_ + n > s_.size()) return {};
    auto w = s_.substr(pos_, n);
    pos_ += n;
    return w;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

std::optional<Day> make_day(int y, int m, int d) {
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

std::optional<Instant> make_instant(Day d, int hh, int mm, int ss) {
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  return Instant{d} + hours{hh} + minutes{mm} + seconds{ss};
}

// "Z", "+hh:mm", "+hhmm", "+hh" or nothing (UTC). Returns offset seconds.
std::optional<long> parse_offset(Cursor& c) {
  if (c.done()) return 0;
  if (c.eat('Z') || c.eat('z')) return 0;
  int sign = 0;
  if (c.eat('+'))
    sign = 1;
  else if (c.eat('-'))
    sign = -1;
  else
    return std::nullopt;
  auto h = c.digits(2);
  if (!h) return std::nullopt;
  int m = 0;
  if (!c.done()) {
    c.eat(':');
    auto mm = c.digits(2);
    if (!mm) return std::nullopt;
    m = *mm;
  }
  return sign * (*h * 3600L + m * 60L);
}

std::optional<Instant> parse_iso(std::string_view text) {
  Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d) return std::nullopt;
  auto day = make_day(*y, *mo, *d);
  if (!day) return std::nullopt;
  if (c.done()) return Instant{*day};
  if (!c.eat('T') && !c.eat(' ')) return std::nullopt;
  auto hh = c.digits(2);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mm = c.digits(2);
  if (!mm) return std::nullopt;
  int ss = 0;
  if (c.eat(':')) {
    auto s = c.digits(2);
    if (!s) return std::nullopt;
    ss = *s;
  }
  if (c.eat('.')) {
    bool any = false;
    while (c.peek() >= '0' && c.peek() <= '9') {
      c.skip();
      any = true;
    }
    if (!any) return std::nullopt;
  }
  auto off = parse_offset(c);
  if (!off || !c.done()) return std::nullopt;
  auto t = make_instant(*day, *hh, *mm, ss);
  if (!t) return std::nullopt;
  return *t - seconds{*off};
}

constexpr std::array<std::string_view, 12> kMonths = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// "Tue Mar 10 08:00:00 +0000 2020"
std::optional<Instant> parse_twitter(std::string_view text) {
  if (text.size() != 30) return std::nullopt;
  Cursor c(text);
  c.word(3);
  if (!c.eat(' ')) return std::nullopt;
  auto mon = c.word(3);
  int month_index = 0;
  while (month_index < 12 && kMonths[month_index] != mon) ++month_index;
  if (month_index == 12 || !c.eat(' ')) return std::nullopt;
  auto d = c.digits(2);
  if (!d || !c.eat(' ')) return std::nullopt;
  auto hh = c.digits(2);
  if (!hh || !c.eat(':')) return std::nullopt;
  auto mm = c.digits(2);
  if (!mm || !c.eat(':')) return std::nullopt;
  auto ss = c.digits(2);
  if (!ss || !c.eat(' ')) return std::nullopt;
  int sign = c.eat('+') ? 1 : (c.eat('-') ? -1 : 0);
  if (sign == 0) return std::nullopt;
  auto oh = c.digits(2);
  auto om = c.digits(2);
  if (!oh || !om || !c.eat(' ')) return std::nullopt;
  auto y = c.digits(4);
  if (!y || !c.done()) return std::nullopt;
  auto day = make_day(*y, month_index + 1, *d);
  if (!day) return std::nullopt;
  auto t = make_instant(*day, *hh, *mm, *ss);
  if (!t) return std::nullopt;
  return *t - seconds{sign * (*oh * 3600L + *om * 60L)};
}

std::optional<Instant> parse_epoch(std::string_view text) {
  if (text.empty() || text.size() > 12) return std::nullopt;
  long long v = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + (ch - '0');
  }
  return Instant{seconds{v}};
}

}  // namespace

std::optional<Instant> parse_instant(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto t = parse_iso(text)) return t;
  if (auto t = parse_twitter(text)) return t;
  return parse_epoch(text);
}

std::optional<Day> parse_date(std::string_view text) {
  Cursor c(text);
  auto y = c.digits(4);
  if (!y || !c.eat('-')) return std::nullopt;
  auto m = c.digits(2);
  if (!m || !c.eat('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d || !c.done()) return std::nullopt;
  return make_day(*y, *m, *d);
}

std::string format_date(Day d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

std::string format_instant(Instant t) {
  auto d = utc_day(t);
  hh_mm_ss<seconds> tod{t - d};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(d).c_str(),
                int(tod.hours().count()), int(tod.minutes().count()),
                int(tod.seconds().count()));
  return buf;
}

std::string month_key(Instant t) { return format_date(utc_day(t)).substr(0, 7); }

}  // namespace stcorpus

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
#include <filesystem>
#include <fstream>
#include <string>

#include "stcorpus/calendar.hpp"
#include "stcorpus/error.hpp"

namespace testutil {

inline stcorpus::Instant at(const char* iso) { return *stcorpus::parse_instant(iso); }
inline stcorpus::Day day(const char* ymd) { return *stcorpus::parse_date(ymd); }

inline std::filesystem::path data_dir() { return STCORPUS_DATA_DIR; }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("stcorpus_unit_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

template <class F>
stcorpus::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const stcorpus::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected an stcorpus::Error");
}

}  // namespace testutil

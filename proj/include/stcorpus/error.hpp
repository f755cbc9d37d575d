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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stcorpus {

enum class ErrorCode {
  MalformedRecord,
  MissingField,
  BadTimestamp,
  BadWindow,
  EmptyScores,
  ZeroCount,
  UnknownRegion,
  EmptyWindow,
  OutOfRange,
  BadK,
  BadAssignment,
  EmptyCorpus,
  MissingLabel,
  EmptyInput,
  BadCodebook,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `line()` is set for errors that
/// originate from a specific input line (1-based).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> line() const noexcept { return line_; }

 protected:
  struct Verbatim {};
  Error(Verbatim, ErrorCode code, const std::string& what,
        std::optional<std::size_t> line);

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
};

/// Raised by the pipeline driver; wraps the first module error and names
/// the stage that produced it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace stcorpus

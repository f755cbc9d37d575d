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

#include "stcorpus/error.hpp"

namespace stcorpus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::BadTimestamp: return "BadTimestamp";
    case ErrorCode::BadWindow: return "BadWindow";
    case ErrorCode::EmptyScores: return "EmptyScores";
    case ErrorCode::ZeroCount: return "ZeroCount";
    case ErrorCode::UnknownRegion: return "UnknownRegion";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::BadAssignment: return "BadAssignment";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadCodebook: return "BadCodebook";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(decorate(code, message, line)),
      code_(code),
      line_(line) {}

Error::Error(Verbatim, ErrorCode code, const std::string& what,
             std::optional<std::size_t> line)
    : std::runtime_error(what), code_(code), line_(line) {}

StageError::StageError(std::string stage, const Error& cause)
    : Error(Verbatim{}, cause.code(),
            "stage '" + stage + "' failed: " + cause.what(), cause.line()),
      stage_(std::move(stage)) {}

}  // namespace stcorpus

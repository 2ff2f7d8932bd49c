// Copyright 2026 The mpiforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mpiforge/error.h"

namespace mpiforge {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidRange:
      return "invalid-range";
    case ErrorCode::kSingularHomography:
      return "singular-homography";
    case ErrorCode::kEmptyInput:
      return "empty-input";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kRange:
      return "range";
    case ErrorCode::kMembership:
      return "membership";
    case ErrorCode::kFormat:
      return "format";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kInsufficientViews:
      return "insufficient-views";
    case ErrorCode::kValidation:
      return "validation";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

FormatError::FormatError(std::size_t offset, const std::string& message)
    : Error(ErrorCode::kFormat,
            message + " (at byte " + std::to_string(offset) + ")"),
      offset_(offset) {}

}  // namespace mpiforge

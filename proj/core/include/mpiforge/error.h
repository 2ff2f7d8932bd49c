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

#ifndef MPIFORGE_ERROR_H_
#define MPIFORGE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpiforge {

enum class ErrorCode {
  kInvalidRange,
  kSingularHomography,
  kEmptyInput,
  kShape,
  kNumeric,
  kRange,
  kMembership,
  kFormat,
  kIo,
  kInsufficientViews,
  kValidation,
};

const char* ErrorCodeName(ErrorCode code);

// All domain failures surface as this exception type; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the container decoder. offset() is the byte position at which
// decoding stopped.
class FormatError : public Error {
 public:
  FormatError(std::size_t offset, const std::string& message);

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace mpiforge

#endif  // MPIFORGE_ERROR_H_

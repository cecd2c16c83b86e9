// Copyright 2026 The testprio Authors.
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

#ifndef TESTPRIO_ERROR_H_
#define TESTPRIO_ERROR_H_

#include <stdexcept>
#include <string>

namespace testprio {

enum class ErrorCode {
  kInvalidArgument,  // bad configuration or precondition violation
  kFormat,           // malformed or inconsistent file contents
  kIo,               // open/read/write failure
  kEvaluation,       // metric undefined for the given inputs (e.g. k = 0)
};

// The single exception type thrown by the library. Callers that need to map
// failures onto exit statuses switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace testprio

#endif  // TESTPRIO_ERROR_H_

// Copyright 2026 The PPBA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PPBA_ERRORS_HPP_
#define PPBA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace ppba {

// Bad arguments, shapes, or configuration. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The victim could not produce a score vector. Maps to CLI exit code 2.
class VictimError : public std::runtime_error {
 public:
  enum class Kind {
    kTimeout,
    kTransport,
    kHttpStatus,
    kMalformedResponse,
    kInvalidScores,
  };

  VictimError(Kind kind, const std::string& what, int status = 0,
              std::string code = {})
      : std::runtime_error(what), kind_(kind), status_(status),
        code_(std::move(code)) {}

  Kind kind() const noexcept { return kind_; }
  // HTTP status for kHttpStatus, 0 otherwise.
  int status() const noexcept { return status_; }
  // Machine-readable error code from the service body ("bad_shape", ...), if any.
  const std::string& code() const noexcept { return code_; }

 private:
  Kind kind_;
  int status_;
  std::string code_;
};

// Filesystem or serialization failure. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
 public:
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(path) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ppba

#endif  // PPBA_ERRORS_HPP_

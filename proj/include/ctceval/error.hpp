// Copyright 2026 The ctceval Authors
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

#ifndef CTCEVAL_ERROR_HPP_
#define CTCEVAL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctceval {

// Broad failure classes. The CLI maps these onto process exit codes.
enum class ErrorKind {
  kConfig,     // undefined CTC combination, bad manifest
  kArgument,   // caller violated a precondition
  kFit,        // interpolation could not be constructed
  kDomain,     // evaluation outside the fitted range
  kOverlap,    // no usable quality overlap between curves
  kExclusion,  // curve unusable after saturated-point removal
  kParse,      // malformed input text
  kIo,         // filesystem or process failure
  kRange,      // sample value out of range for its bit depth
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kFit: return "fit";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kOverlap: return "overlap";
    case ErrorKind::kExclusion: return "exclusion";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kRange: return "range";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace ctceval

#endif  // CTCEVAL_ERROR_HPP_

// core/include/lexforge/error.h

// Copyright 2026  The lexforge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXFORGE_ERROR_H_
#define LEXFORGE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexforge {

enum class ErrorCode {
  kParse,
  kDuplicatePhone,
  kMissingDiphthongComponents,
  kMissingCounterpart,
  kUnknownPhone,
  kDuplicateRule,
  kModeConflict,
  kInvalidCap,
  kConflictingCanonical,
  kUnknownWord,
  kInvalidOrder,
  kEmptyVocab,
  kEmptyCorpus,
  kEmptyNBest,
  kInvalidConversation,
  kEmptyResults,
  kInvalidArgument,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

/// All data and contract failures raised by the library. `line()` is the
/// 1-based input line for parse failures and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, std::size_t line = 0);

  ErrorCode code() const { return code_; }
  std::size_t line() const { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace lexforge

#endif  // LEXFORGE_ERROR_H_

// core/src/error.cc

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

#include "lexforge/error.h"

namespace lexforge {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kDuplicatePhone: return "DuplicatePhone";
    case ErrorCode::kMissingDiphthongComponents: return "MissingDiphthongComponents";
    case ErrorCode::kMissingCounterpart: return "MissingCounterpart";
    case ErrorCode::kUnknownPhone: return "UnknownPhone";
    case ErrorCode::kDuplicateRule: return "DuplicateRule";
    case ErrorCode::kModeConflict: return "ModeConflict";
    case ErrorCode::kInvalidCap: return "InvalidCap";
    case ErrorCode::kConflictingCanonical: return "ConflictingCanonical";
    case ErrorCode::kUnknownWord: return "UnknownWord";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kEmptyVocab: return "EmptyVocab";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kEmptyNBest: return "EmptyNBest";
    case ErrorCode::kInvalidConversation: return "InvalidConversation";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

static std::string Decorate(ErrorCode code, const std::string &message,
                            std::size_t line) {
  std::string out = ErrorCodeName(code);
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorCode code, const std::string &message, std::size_t line)
    : std::runtime_error(Decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace lexforge

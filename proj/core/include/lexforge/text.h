// core/include/lexforge/text.h

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

// Small string and file helpers shared by the readers and writers.

#ifndef LEXFORGE_TEXT_H_
#define LEXFORGE_TEXT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

std::vector<std::string> SplitWhitespace(std::string_view s);
std::vector<std::string> SplitChar(std::string_view s, char sep);
std::string_view Trim(std::string_view s);
std::string Join(const std::vector<std::string> &parts, std::string_view sep);

/// Splits text into lines; a trailing newline does not produce an empty line
/// and '\r' before '\n' is dropped.
std::vector<std::string_view> SplitLines(std::string_view text);

std::optional<double> ParseDouble(std::string_view s);
std::optional<long long> ParseInt(std::string_view s);

/// Shortest decimal form that parses back to exactly the same double.
std::string FormatDouble(double v);
/// printf-style fixed formatting, e.g. FormatFixed(0.5, 2) == "0.50".
std::string FormatFixed(double v, int digits);

/// Lowercases ASCII and the German uppercase letters in UTF-8; other bytes
/// pass through untouched.
std::string Utf8Lower(std::string_view s);

/// 64-bit FNV-1a; stable across platforms, used for manifests.
std::uint64_t Fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string Hex64(std::uint64_t v);

std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, std::string_view contents);

}  // namespace lexforge

#endif  // LEXFORGE_TEXT_H_

// Copyright (C) 2026 The simulst Authors
// SPDX-License-Identifier: Apache-2.0
//

#ifndef SIMULST_TEXT_UTIL_H_
#define SIMULST_TEXT_UTIL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simulst {

std::string_view Trim(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::vector<std::string> SplitWhitespace(std::string_view s);

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v);
std::optional<double> ParseDouble(std::string_view s);
std::optional<std::size_t> ParseSize(std::string_view s);

// Decodes UTF-8 to scalar values; malformed bytes decode to U+FFFD.
std::u32string DecodeUtf8(std::string_view s);

}  // namespace simulst

#endif  // SIMULST_TEXT_UTIL_H_

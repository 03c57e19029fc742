// Copyright 2026 The afkit Authors
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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace afkit::csv {

using Row = std::vector<std::string>;

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> lines;  // 1-based source line of each row

  /// Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180: comma separated, optional double quotes with "" escapes, LF or
/// CRLF line ends, blank lines skipped. Every row must have as many fields as
/// the header. Throws SchemaError(source, line, ...).
Table parse(std::string_view text, const std::string& source = "<csv>");

/// Throws kFileNotFound, or SchemaError from parse.
Table read(const std::filesystem::path& path);

/// Quotes a field when it holds a comma, quote, CR or LF.
std::string escape(std::string_view field);

/// Header and rows, LF line ends.
std::string format(const Table& table);

/// Throws kUnwritablePath.
void write_file(const std::filesystem::path& path, std::string_view text);

/// Fixed-point rendering, or the shortest exact form when decimals < 0.
/// Infinities print as "inf"/"-inf", NaN as "n/a".
std::string number(double v, int decimals);

/// Inverse of number(). Throws kInvalidArgument.
double parse_number(std::string_view s);

}  // namespace afkit::csv

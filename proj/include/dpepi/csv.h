//
// Copyright 2026 The dpepi Authors
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
//

#ifndef DPEPI_CSV_H_
#define DPEPI_CSV_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpepi::csv {

// Streams the records of a CSV document (header included) to `visit`,
// together with the 1-based line each record starts on. Blank lines are
// skipped. The span is only valid during the call.
void ForEachRecord(
    std::string_view text,
    const std::function<void(std::span<const std::string>, std::size_t)>&
        visit);

// A parsed comma-separated document with a mandatory header row. Fields
// follow RFC 4180 quoting: a quoted field may contain commas, newlines and
// doubled quotes.
class Table {
 public:
  // Throws ParameterError on an empty document or an unterminated quote.
  static Table Parse(std::string_view text);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  // 1-based source line of data row `i` (the header is line 1).
  std::size_t line_of(std::size_t i) const { return lines_[i]; }

  std::optional<std::size_t> FindColumn(std::string_view name) const;
  // Like FindColumn but throws SchemaError naming the column.
  std::size_t RequireColumn(std::string_view name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

// Appends `field` to `out`, quoting only when needed.
void AppendField(std::string& out, std::string_view field);

// Joins fields into one line terminated by '\n'.
std::string FormatRow(const std::vector<std::string>& fields);

// Parses a headerless numeric matrix (one row per line).
std::vector<std::vector<double>> ParseMatrix(std::string_view text);
std::string FormatMatrix(const std::vector<std::vector<double>>& rows);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace dpepi::csv

#endif  // DPEPI_CSV_H_

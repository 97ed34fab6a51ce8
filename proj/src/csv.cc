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

#include "dpepi/csv.h"

#include <charconv>
#include <fstream>
#include <span>
#include <sstream>

#include <fmt/format.h>

#include "dpepi/error.h"

namespace dpepi::csv {
namespace {

// Walks the document record by record. `visit` receives the fields of each
// non-blank record and the line the record started on.
template <typename Visit>
void VisitRecords(std::string_view text, Visit&& visit) {
  std::vector<std::string> fields;
  std::size_t nfields = 0;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto current = [&]() -> std::string& {
    if (nfields == fields.size()) fields.emplace_back();
    return fields[nfields];
  };
  current().clear();
  auto end_field = [&] {
    ++nfields;
    field_started = false;
    current().clear();
  };
  auto end_record = [&] {
    end_field();
    // Skip blank lines entirely.
    if (!(nfields == 1 && fields[0].empty())) {
      visit(std::span<const std::string>(fields.data(), nfields), record_line);
    }
    nfields = 0;
    current().clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          current().push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        current().push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started) in_quotes = true;
        else current().push_back(c);
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        current().push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ParameterError("unterminated quoted CSV field");
  if (field_started || nfields > 0) end_record();
}

}  // namespace

void ForEachRecord(
    std::string_view text,
    const std::function<void(std::span<const std::string>, std::size_t)>&
        visit) {
  // Tolerate a UTF-8 byte-order mark.
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  VisitRecords(text, visit);
}

Table Table::Parse(std::string_view text) {
  Table t;
  bool have_header = false;
  ForEachRecord(text, [&](std::span<const std::string> fields,
                          std::size_t line) {
    if (!have_header) {
      t.header_.assign(fields.begin(), fields.end());
      have_header = true;
      return;
    }
    t.rows_.emplace_back(fields.begin(), fields.end());
    t.lines_.push_back(line);
  });
  if (!have_header) throw ParameterError("CSV document has no header row");
  return t;
}

std::optional<std::size_t> Table::FindColumn(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Table::RequireColumn(std::string_view name) const {
  auto idx = FindColumn(name);
  if (!idx) throw SchemaError(std::string(name));
  return *idx;
}

void AppendField(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

std::string FormatRow(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    AppendField(out, fields[i]);
  }
  out.push_back('\n');
  return out;
}

std::vector<std::vector<double>> ParseMatrix(std::string_view text) {
  std::vector<std::vector<double>> rows;
  VisitRecords(text, [&](std::span<const std::string> fields,
                         std::size_t line) {
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      double v = 0;
      std::string_view s = f;
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw RowError(line, "not a number: '" + f + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw RowError(line, "ragged matrix row");
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

std::string FormatMatrix(const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out.push_back(',');
      fmt::format_to(std::back_inserter(out), "{}", row[j]);
    }
    out.push_back('\n');
  }
  return out;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParameterError("cannot write file: " + path);
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ParameterError("short write: " + path);
}

}  // namespace dpepi::csv

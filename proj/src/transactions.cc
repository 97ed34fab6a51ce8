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

#include "dpepi/transactions.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iterator>
#include <span>

#include <fmt/format.h>

#include "dpepi/csv.h"
#include "dpepi/error.h"

namespace dpepi {
namespace {

template <typename T>
T ParseNumber(const std::string& cell, std::size_t line,
              std::string_view column) {
  T v{};
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw RowError(line, "bad " + std::string(column) + " value '" + cell + "'");
  }
  return v;
}

}  // namespace

std::string_view TransactionTypeName(TransactionType t) {
  return t == TransactionType::kOnline ? "ONLINE" : "OFFLINE";
}

std::optional<std::uint16_t> TransactionTable::CategoryIndex(
    std::string_view name) const {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    if (categories[i] == name) return static_cast<std::uint16_t>(i);
  }
  return std::nullopt;
}

std::uint16_t TransactionTable::InternCategory(std::string_view name) {
  if (auto idx = CategoryIndex(name)) return *idx;
  categories.emplace_back(name);
  return static_cast<std::uint16_t>(categories.size() - 1);
}

std::string FormatTransactionsCsv(const TransactionTable& table) {
  std::vector<std::string> quoted;
  quoted.reserve(table.categories.size());
  for (const auto& c : table.categories) {
    std::string q;
    csv::AppendField(q, c);
    quoted.push_back(std::move(q));
  }
  std::string out;
  out.reserve(64 + table.rows.size() * 80);
  out.append(kTransactionsHeader);
  out.push_back('\n');
  auto it = std::back_inserter(out);
  for (const auto& r : table.rows) {
    fmt::format_to(it, "{},{},{},{},", r.id, r.merchant_id, r.date.ToString(),
                   quoted[r.category]);
    csv::AppendField(out, r.postal_code);
    fmt::format_to(it, ",{},{:.2f},{}\n", TransactionTypeName(r.type),
                   r.spendamt, r.nb_transactions);
  }
  return out;
}

TransactionTable ParseTransactionsCsv(std::string_view text) {
  static constexpr std::array<std::string_view, 8> kColumns = {
      "id",           "merchant_id",       "date",
      "merch_category", "merch_postal_code", "transaction_type",
      "spendamt",     "nb_transactions"};
  // Position of each canonical column within the file's header.
  std::array<std::size_t, 8> at{};
  std::size_t width = 0;
  bool have_header = false;

  TransactionTable table;
  table.rows.reserve(text.size() / 80);
  csv::ForEachRecord(text, [&](std::span<const std::string> row,
                               std::size_t line) {
    if (!have_header) {
      for (std::size_t c = 0; c < kColumns.size(); ++c) {
        auto it = std::find(row.begin(), row.end(), kColumns[c]);
        if (it == row.end()) throw SchemaError(std::string(kColumns[c]));
        at[c] = static_cast<std::size_t>(it - row.begin());
      }
      width = row.size();
      have_header = true;
      return;
    }
    if (row.size() != width) throw RowError(line, "wrong number of fields");
    TransactionRecord r;
    r.id = ParseNumber<std::int32_t>(row[at[0]], line, "id");
    r.merchant_id = ParseNumber<std::int32_t>(row[at[1]], line, "merchant_id");
    try {
      r.date = Date::Parse(row[at[2]]);
    } catch (const ParameterError& e) {
      throw RowError(line, e.what());
    }
    r.category = table.InternCategory(row[at[3]]);
    r.postal_code = row[at[4]];
    const std::string& type = row[at[5]];
    if (type == "ONLINE") {
      r.type = TransactionType::kOnline;
    } else if (type == "OFFLINE") {
      r.type = TransactionType::kOffline;
    } else {
      throw RowError(line, "bad transaction_type '" + type + "'");
    }
    r.spendamt = ParseNumber<double>(row[at[6]], line, "spendamt");
    r.nb_transactions =
        ParseNumber<std::int64_t>(row[at[7]], line, "nb_transactions");
    table.rows.push_back(std::move(r));
  });
  if (!have_header) throw ParameterError("CSV document has no header row");
  return table;
}

}  // namespace dpepi

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

#ifndef DPEPI_TRANSACTIONS_H_
#define DPEPI_TRANSACTIONS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dpepi/date.h"

namespace dpepi {

enum class TransactionType : std::uint8_t { kOnline, kOffline };

std::string_view TransactionTypeName(TransactionType t);

// One merchant-week aggregate. The category is an index into the owning
// table's `categories` list.
struct TransactionRecord {
  std::int32_t id = 0;
  std::int32_t merchant_id = 0;
  Date date;
  std::uint16_t category = 0;
  std::string postal_code;
  TransactionType type = TransactionType::kOffline;
  double spendamt = 0;
  std::int64_t nb_transactions = 0;

  bool operator==(const TransactionRecord&) const = default;
};

struct TransactionTable {
  std::vector<std::string> categories;
  std::vector<TransactionRecord> rows;

  std::optional<std::uint16_t> CategoryIndex(std::string_view name) const;
  // Appends the name if unseen.
  std::uint16_t InternCategory(std::string_view name);

  bool operator==(const TransactionTable&) const = default;
};

inline constexpr std::string_view kTransactionsHeader =
    "id,merchant_id,date,merch_category,merch_postal_code,transaction_type,"
    "spendamt,nb_transactions";

// Canonical CSV: header above, ISO dates, spendamt with two decimals.
std::string FormatTransactionsCsv(const TransactionTable& table);

// Accepts the canonical columns in any order. Negative nb_transactions are
// kept as-is so validation can report them.
TransactionTable ParseTransactionsCsv(std::string_view text);

}  // namespace dpepi

#endif  // DPEPI_TRANSACTIONS_H_

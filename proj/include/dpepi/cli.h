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

#ifndef DPEPI_CLI_H_
#define DPEPI_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dpepi::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudgetExceeded = 3;
inline constexpr int kExitError = 4;

// Runs one subcommand. `args` excludes the program name. Human-readable
// output goes to `out`, diagnostics and usage text to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace dpepi::cli

#endif  // DPEPI_CLI_H_

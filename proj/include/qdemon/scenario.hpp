// Copyright 2026 The qdemon Authors
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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdemon/config.hpp"
#include "qdemon/ledger.hpp"

namespace qdemon {

struct ScenarioResult {
    LedgerRow row;
    /// Per-branch records, flags and mode-specific extras.
    nlohmann::json detail;
};

/// Deterministic for a fixed config. Library errors are rethrown with the
/// scenario id prepended to the message.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// One row per value, in input order. `path` is a dotted key path to an
/// existing numeric field of the config document (array indices allowed);
/// anything else throws UnknownParameter. Points run on `threads` workers
/// (0: hardware concurrency).
std::vector<LedgerRow> sweep(const ScenarioConfig& config, std::string_view path,
                             const std::vector<double>& values, unsigned threads = 0);

struct ValidationSummary {
    bool ok = true;
    std::vector<std::string> lines;
};

/// Runs every validator on a config and reports residuals. Never throws.
ValidationSummary validate_config_text(std::string_view text);

}  // namespace qdemon

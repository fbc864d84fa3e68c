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

// Flat per-scenario ledger rows and their CSV/JSON forms.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qdemon {

struct LedgerRow {
    std::string scenario_id;
    std::string mode;
    std::size_t dim = 0;
    double T = 0.0;
    double E = 0.0;
    double S = 0.0;
    double F = 0.0;
    std::size_t n_outcomes = 0;
    double delta_E_meas = 0.0;
    double delta_S_meas = 0.0;
    double shannon_outcomes = 0.0;
    double work_total = 0.0;
    double work_fb = 0.0;
    double delta_F = 0.0;
    double delta_S_tot = 0.0;
    double closure_distance = 0.0;
    bool efficiency_flag = false;
    bool clamp_flag = false;

    bool operator==(const LedgerRow&) const = default;
};

inline constexpr std::array<std::string_view, 18> kLedgerColumns = {
    "scenario_id",  "mode",         "dim",          "T",
    "E",            "S",            "F",            "n_outcomes",
    "delta_E_meas", "delta_S_meas", "shannon_outcomes", "work_total",
    "work_fb",      "delta_F",      "delta_S_tot",  "closure_distance",
    "efficiency_flag", "clamp_flag"};

enum class LedgerFormat { Csv, Json };

LedgerFormat parse_format(std::string_view name);

/// Floats with 12 significant digits, booleans as true/false.
std::string to_csv(const std::vector<LedgerRow>& rows);
/// Array of objects keyed by column name; doubles round-trip exactly.
std::string to_json(const std::vector<LedgerRow>& rows);

/// Returns bytes written. Throws IoError if the stream fails.
std::size_t emit(const std::vector<LedgerRow>& rows, LedgerFormat format, std::ostream& out);
std::size_t emit(const std::vector<LedgerRow>& rows, LedgerFormat format, const std::string& path);

/// Throws ParseError on a malformed header or row.
std::vector<LedgerRow> rows_from_csv(std::string_view text);
std::vector<LedgerRow> rows_from_json(std::string_view text);

/// Plain-text table with second-law verdicts.
std::string summarize(const std::vector<LedgerRow>& rows);

}  // namespace qdemon

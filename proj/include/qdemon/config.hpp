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

// Scenario configuration files (JSON). See README for the key tree.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qdemon/feedback.hpp"
#include "qdemon/matrix.hpp"
#include "qdemon/measurement.hpp"

namespace qdemon {

enum class RunMode { Cycle, Transform, Continuous, Controller };

std::string_view to_string(RunMode mode) noexcept;

inline constexpr std::uint64_t kDefaultSeed = 20260101;
/// Environment variable replacing kDefaultSeed for configs without "seed".
inline constexpr const char* kSeedEnvVar = "QDEMON_SEED";

struct ScenarioConfig {
    std::string id;
    std::size_t dim = 0;
    ComplexMatrix hamiltonian;
    double temperature = 1.0;
    double bath_entropy = 0.0;
    double k = 1.0;
    /// "bare", "efficient", "inefficient", "weak" or "random-{efficient,bare,inefficient,commuting}".
    std::string measurement_kind;
    std::optional<MeasurementModel> model;
    RunMode mode = RunMode::Cycle;
    std::optional<ComplexMatrix> h2;
    std::size_t steps = 1;
    ProtocolOptions options;
    double tolerance = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    /// The document the config was read from, for sweeps.
    nlohmann::json source;
};

/// Parse and validate. ParseError carries line and column, ValidationError the
/// key path of the offending field. Unknown keys are a ValidationError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig config_from_json(const nlohmann::json& doc);

/// Structural parse only: the measurement model is built but not checked for
/// completeness and the Hamiltonian is kept as given, Hermitian or not.
/// Used by the validate command to report residuals instead of failing early.
ScenarioConfig parse_config_unchecked(std::string_view text);

/// Seed used when the config does not set one.
std::uint64_t default_seed();

/// Matrix from nested [re, im] pairs (bare numbers accepted as real entries).
ComplexMatrix matrix_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

}  // namespace qdemon

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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qdemon {

enum class ErrorCode {
    NotHermitian,
    NoConvergence,
    DomainError,
    DimensionMismatch,
    InvalidState,
    NonPositiveTemperature,
    NotADistribution,
    InvalidModel,
    IncompleteModel,
    DegenerateState,
    PlanMismatch,
    NonUnitaryBlock,
    BranchMismatch,
    ParseError,
    ValidationError,
    UnknownParameter,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status for an error: 1 validation, 2 numerical, 3 I/O.
int exit_code_for(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` says which contract was broken.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace qdemon

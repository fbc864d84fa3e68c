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

#include "qdemon/error.hpp"

namespace qdemon {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorCode::NotADistribution: return "NotADistribution";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::IncompleteModel: return "IncompleteModel";
    case ErrorCode::DegenerateState: return "DegenerateState";
    case ErrorCode::PlanMismatch: return "PlanMismatch";
    case ErrorCode::NonUnitaryBlock: return "NonUnitaryBlock";
    case ErrorCode::BranchMismatch: return "BranchMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::DegenerateState:
    case ErrorCode::BranchMismatch:
        return 2;
    case ErrorCode::IoError:
        return 3;
    default:
        return 1;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace qdemon

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

// Measurement models and the measured quantities ΔE_meas and ΔS_meas.
//
// Every model is reduced to the same shape for application: outcome n owns a
// list of Kraus operators {A_nj}, one for efficient models and several for
// inefficient ones, and ρ_n = Σ_j A_nj ρ A_nj† / p_n.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qdemon/linalg.hpp"
#include "qdemon/matrix.hpp"
#include "qdemon/random.hpp"
#include "qdemon/thermo.hpp"

namespace qdemon {

enum class MeasurementKind { BarePositive, Efficient, Inefficient, Weak };

std::string_view to_string(MeasurementKind kind) noexcept;

class MeasurementModel {
public:
    /// Positive operators with Σ P_n² = I.
    static MeasurementModel bare(std::vector<ComplexMatrix> operators);
    /// Arbitrary operators with Σ A_n†A_n = I.
    static MeasurementModel efficient(std::vector<ComplexMatrix> operators);
    /// Operators grouped by outcome with Σ_nj A_nj†A_nj = I.
    static MeasurementModel inefficient(std::vector<std::vector<ComplexMatrix>> groups);
    /// Two outcomes P_± = sqrt((I ± εB)/2). Needs B Hermitian, ‖B‖ ≤ 1, ε ∈ (0, 1);
    /// throws InvalidModel otherwise.
    static MeasurementModel weak(const ComplexMatrix& generator, double epsilon);

    MeasurementKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t outcome_count() const noexcept { return groups_.size(); }
    /// Kraus operators for outcome n (weak models: the expanded P_±).
    const std::vector<ComplexMatrix>& kraus(std::size_t outcome) const { return groups_.at(outcome); }
    const std::vector<std::vector<ComplexMatrix>>& groups() const noexcept { return groups_; }

    /// Weak models only.
    const ComplexMatrix& generator() const noexcept { return generator_; }
    double epsilon() const noexcept { return epsilon_; }

    /// One operator per outcome (bare, efficient, weak).
    bool is_efficient() const noexcept { return kind_ != MeasurementKind::Inefficient; }

private:
    MeasurementModel(MeasurementKind kind, std::vector<std::vector<ComplexMatrix>> groups);

    MeasurementKind kind_ = MeasurementKind::Efficient;
    std::size_t dim_ = 0;
    std::vector<std::vector<ComplexMatrix>> groups_;
    ComplexMatrix generator_;
    double epsilon_ = 0.0;
};

struct OperatorViolation {
    std::size_t outcome = 0;
    std::size_t index = 0;
    std::string what;
    double value = 0.0;
};

struct ValidationReport {
    bool ok = true;
    /// max_ij |(Σ A†A - I)_ij|
    double completeness_residual = 0.0;
    std::vector<OperatorViolation> violations;
};

/// Completeness and positivity checks; reports, never throws.
ValidationReport validate(const MeasurementModel& model, double tolerance = 1e-10);

/// Polar split A = U·P: P is the bare measurement, U a feedback-absorbable unitary.
PolarFactors bare_part(const ComplexMatrix& a);

/// Bare model {P_n} made of the positive polar factors of an efficient model.
MeasurementModel bare_model_of(const MeasurementModel& efficient);

struct OutcomeRecord {
    std::size_t outcome = 0;
    double probability = 0.0;
    DensityMatrix state;
    double entropy = 0.0;
    double energy = 0.0;
};

struct MeasurementResult {
    std::vector<OutcomeRecord> records;
    /// Outcomes with p_n < p_floor were removed and the rest renormalized.
    bool dropped_outcomes = false;
    /// Some post-measurement state needed an eigenvalue clamp.
    bool clamped = false;
};

inline constexpr double kDefaultProbabilityFloor = 1e-14;

/// Throws DimensionMismatch, or InvalidModel when `validate` fails.
MeasurementResult apply(const MeasurementModel& model, const DensityMatrix& rho,
                        const Hamiltonian& h, double p_floor = kDefaultProbabilityFloor);

/// Σ p_n ρ_n
DensityMatrix average_post_state(const std::vector<OutcomeRecord>& records);

/// Σ p_n E_n - E
double measurement_energy_cost(const std::vector<OutcomeRecord>& records, double initial_energy);

/// S - Σ p_n S_n
double entropy_reduction(const std::vector<OutcomeRecord>& records, double initial_entropy);

std::vector<double> probabilities(const std::vector<OutcomeRecord>& records);

namespace sampling {

/// A_n = G_n·(Σ G_m†G_m)^{-1/2} for Ginibre G_n.
MeasurementModel random_efficient_model(std::size_t dim, std::size_t outcomes, Rng& rng);
/// P_n = sqrt(S^{-1/2}·G_n†G_n·S^{-1/2}).
MeasurementModel random_bare_model(std::size_t dim, std::size_t outcomes, Rng& rng);
/// `outcomes` groups of `per_outcome` Kraus operators from one random efficient model.
MeasurementModel random_inefficient_model(std::size_t dim, std::size_t outcomes,
                                          std::size_t per_outcome, Rng& rng);
/// Bare model diagonal in the energy eigenbasis of h (commutes with every thermal state of h).
MeasurementModel random_commuting_model(const Hamiltonian& h, std::size_t outcomes, Rng& rng);

}  // namespace sampling

}  // namespace qdemon

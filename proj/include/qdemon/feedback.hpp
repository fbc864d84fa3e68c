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

// Work extraction by measurement plus feedback.
//
// Per outcome n the controller (i) rotates the eigenbasis of ρ_n onto the
// energy eigenbasis of H, (ii) with populations ordered to decrease with
// energy, (iii) moves the levels to ε_nj = -kT ln λ_nj so the state is thermal
// at T, and (iv) shifts all levels so the mean energy is back to E. An
// isothermal quasi-static change of the Hamiltonian then brings the system to
// the target thermal state. Work is always reported as work *extracted*.

#include <cstddef>
#include <vector>

#include "qdemon/matrix.hpp"
#include "qdemon/measurement.hpp"
#include "qdemon/thermo.hpp"

namespace qdemon {

struct ProtocolOptions {
    double k = 1.0;
    /// Populations below this are raised to it before taking logarithms.
    double lambda_floor = 1e-12;
    double p_floor = kDefaultProbabilityFloor;
};

struct FeedbackPlan {
    std::size_t outcome = 0;
    /// Steps (i)+(ii): U = Σ_j |e_j⟩⟨v_j|, v_j the eigenvectors of ρ_n by descending
    /// population, e_j the energy eigenvectors of H by ascending energy.
    ComplexMatrix basis_unitary;
    /// Columns e_j.
    ComplexMatrix energy_basis;
    /// λ_nj as measured, descending.
    std::vector<double> populations;
    /// λ_nj after the floor clamp and renormalization.
    std::vector<double> equilibrium_populations;
    /// ε_nj = -kT ln λ_nj (clamped populations), ascending.
    std::vector<double> level_energies;
    /// Σ_j ε_nj |e_j⟩⟨e_j|
    ComplexMatrix target_hamiltonian;
    /// Step (iv) offset c_n restoring the mean energy.
    double shift = 0.0;
    bool clamped = false;

    /// target_hamiltonian + shift·I
    ComplexMatrix final_hamiltonian() const;
};

/// Throws DegenerateState if every population is below the floor.
FeedbackPlan plan_feedback(const OutcomeRecord& record, const Hamiltonian& h, double temperature,
                           double initial_energy, const ProtocolOptions& options = {});

struct ExecutionResult {
    /// Thermal state of `hamiltonian` at T up to the population clamp.
    DensityMatrix state;
    ComplexMatrix hamiltonian;
    /// E_n - E, as the negated sum of the three step works below.
    double work_extracted = 0.0;
    /// Work done on the system: Tr[Hρ'] - Tr[Hρ_n] at fixed H.
    double rotation_work = 0.0;
    /// Tr[(H_target - H)ρ'] at fixed ρ'.
    double level_work = 0.0;
    /// shift·Tr ρ'
    double shift_work = 0.0;
    /// Trace distance from `state` to thermal_state(hamiltonian, T).
    double equilibrium_distance = 0.0;
};

/// Throws PlanMismatch when the plan was made for another outcome or dimension.
ExecutionResult execute_plan(const OutcomeRecord& record, const FeedbackPlan& plan,
                             const Hamiltonian& h, double temperature,
                             const ProtocolOptions& options = {});

/// k·T·(S_target - S_n)
double isothermal_work(double target_entropy, double branch_entropy, double temperature,
                       double k = 1.0);

/// Riemann sum of the work extracted along H(s) = (1-s)·H_start + s·H_end,
/// re-thermalizing at every step. Converges to F(H_start) - F(H_end) as O(1/N).
double quasi_static_work(const Hamiltonian& start, const Hamiltonian& end, double temperature,
                         std::size_t steps, double k = 1.0);

struct BranchLedger {
    std::size_t outcome = 0;
    double probability = 0.0;
    double entropy = 0.0;
    double energy = 0.0;
    /// ΔE_n = E_n - E from the executed steps (i)-(iv).
    double delta_energy = 0.0;
    double isothermal_work = 0.0;
    /// ΔW_n = isothermal_work + delta_energy
    double work = 0.0;
    double equilibrium_distance = 0.0;
    double closure_distance = 0.0;
    double hamiltonian_residual = 0.0;
    bool clamped = false;
    /// Pre-expansion Hamiltonian H_n + c_n.
    ComplexMatrix branch_hamiltonian;
};

struct CycleLedger {
    double temperature = 0.0;
    double k = 1.0;
    double energy = 0.0;
    double entropy = 0.0;
    double free_energy = 0.0;
    std::vector<BranchLedger> branches;

    double delta_E_meas = 0.0;
    double delta_S_meas = 0.0;
    double outcome_entropy = 0.0;
    /// T(S - Σ p S_n) + Σ p ΔE_n, generalised to F-differences for transforms.
    double work_total = 0.0;
    /// work_total - ΔE_meas
    double work_fb = 0.0;
    /// F_1 - F_2; zero for closed cycles.
    double delta_F = 0.0;
    /// S({p_n}) - ΔS_meas
    double delta_S_tot = 0.0;
    double heat_from_bath = 0.0;

    bool clamped = false;
    bool dropped_outcomes = false;
    /// Largest branch distance from equilibrium before expansion or from the target after.
    double closure_distance = 0.0;
    double hamiltonian_residual = 0.0;
};

CycleLedger run_cycle(const Hamiltonian& h, double temperature, const MeasurementModel& model,
                      const ProtocolOptions& options = {});

struct TransformResult {
    double free_energy_initial = 0.0;
    double free_energy_final = 0.0;
    double delta_F = 0.0;
    double work_fb = 0.0;
    CycleLedger ledger;
};

/// Start thermal for `initial`, end thermal for `final` at the same temperature.
TransformResult run_transform(const Hamiltonian& initial, const Hamiltonian& final,
                              double temperature, const MeasurementModel& model,
                              const ProtocolOptions& options = {});

struct ContinuousReport {
    double epsilon = 0.0;
    std::size_t steps = 0;
    CycleLedger step;
    double cumulative_work_total = 0.0;
    double cumulative_work_fb = 0.0;
    double cumulative_entropy_reduction = 0.0;
    double cumulative_entropy_production = 0.0;
    /// ΔS_meas(ε) / ε²
    double scaled_entropy_reduction = 0.0;
};

/// Repeated weak-measurement cycles. Rejects ε outside [1e-6, 0.5] and zero steps.
ContinuousReport run_continuous(const Hamiltonian& h, double temperature,
                                const ComplexMatrix& generator, double epsilon, std::size_t steps,
                                const ProtocolOptions& options = {});

}  // namespace qdemon

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

// Measurement-free formulation of the feedback cycle.
//
// An N-level controller C (N = number of outcomes) is correlated with the
// system S by the isometry V = Σ_n |n⟩ ⊗ P_n, feedback is the block-diagonal
// unitary Σ_n |n⟩⟨n| ⊗ U_n, and the isothermal stage decoheres C in its
// |n⟩ basis. The bath is kept as an entropy ledger only. Ordering of the joint
// space is controller-major: index n·d + i.

#include <cstddef>
#include <vector>

#include "qdemon/feedback.hpp"
#include "qdemon/matrix.hpp"
#include "qdemon/measurement.hpp"
#include "qdemon/thermo.hpp"

namespace qdemon {

class JointState {
public:
    JointState(DensityMatrix state, std::size_t controller_dim, std::size_t system_dim);

    const DensityMatrix& state() const noexcept { return state_; }
    std::size_t controller_dim() const noexcept { return controller_dim_; }
    std::size_t system_dim() const noexcept { return system_dim_; }

    /// Block ⟨n|ρ|m⟩ acting on the system: p_n ρ_n on the diagonal, σ_nm off it.
    ComplexMatrix block(std::size_t n, std::size_t m) const;
    /// max over n≠m of ‖σ_nm - σ_mn†‖_max
    double block_hermiticity_residual() const;

private:
    DensityMatrix state_;
    std::size_t controller_dim_;
    std::size_t system_dim_;
};

/// V ρ V† with V = Σ_n |n⟩ ⊗ A_n. Throws InvalidModel for inefficient models and
/// IncompleteModel when the operators are not complete.
JointState correlate(const DensityMatrix& rho, const MeasurementModel& model);

/// Σ_n |n⟩⟨n| ⊗ U_n. Throws NonUnitaryBlock if any U_n misses unitarity by more than 1e-10.
ComplexMatrix feedback_unitary(const std::vector<ComplexMatrix>& unitaries);

JointState apply_unitary(const JointState& joint, const ComplexMatrix& u);

/// Zero the off-diagonal controller blocks.
JointState decohere_controller(const JointState& joint);

/// Same map built explicitly: generalized CNOT onto an N-level auxiliary
/// prepared in |0⟩, then trace the auxiliary out.
JointState decohere_controller_via_ancilla(const JointState& joint);

struct BathLedger {
    double initial_entropy = 0.0;
    std::vector<double> branch_probabilities;
    /// S_B - (S - S_n) per controller branch.
    std::vector<double> branch_entropies;
    /// Entropy dumped into the bath by controller resets.
    double reset_additions = 0.0;

    /// Σ_n p_n S_n^bath + reset_additions
    double mean_entropy() const;
};

struct BranchFinalization {
    JointState joint;
    DensityMatrix controller;
    DensityMatrix system;
    BathLedger bath;
    std::vector<double> probabilities;
    std::vector<double> branch_entropies;
    /// Trace distance between the joint state and controller ⊗ system.
    double factorization_distance = 0.0;
};

/// Replace each branch's system state by the endpoint of its isothermal
/// expansion to `final_hamiltonian`.
///
/// `branch_hamiltonians[n]` is the Hamiltonian each branch is in equilibrium
/// with after feedback. Throws BranchMismatch if a branch is not in
/// equilibrium at mean energy `energy`, or if the endpoint does not have the
/// initial entropy and energy (all within 1e-8). Branches lighter than
/// `p_floor` are ignored.
BranchFinalization finalize_branches(const JointState& joint,
                                     const std::vector<ComplexMatrix>& branch_hamiltonians,
                                     const Hamiltonian& final_hamiltonian, double temperature,
                                     double entropy, double energy, double bath_entropy = 0.0,
                                     const ProtocolOptions& options = {});

/// S({p_n}) + Σ p_n S_n + S_B
double total_entropy(const std::vector<double>& p, const std::vector<double>& branch_entropies,
                     double bath_entropy);

/// Same quantity read off the assembled final state: S(ρ_CS) of the
/// controller⊗system matrix plus the bath ledger's mean entropy, the bath
/// branches being classically distinguishable.
double total_entropy_assembled(const DensityMatrix& controller_system, const BathLedger& bath);

struct SecondLawReport {
    double outcome_entropy = 0.0;
    double delta_S_meas = 0.0;
    double delta_S_tot = 0.0;
    /// ΔS_tot ≥ -1e-9
    bool pass = false;
    /// ΔS_tot < 1e-8
    bool efficient = false;
};

SecondLawReport second_law_verdict(const std::vector<double>& p, double delta_S_meas);

struct ResetResult {
    DensityMatrix controller;
    BathLedger bath;
};

/// Swap the controller with a fresh |0⟩ register and dump that register into
/// the bath. Throws InvalidState if the controller is not diagonal.
ResetResult reset_controller(const DensityMatrix& controller, const BathLedger& bath);

struct ControllerCycleReport {
    CycleLedger ledger;
    SecondLawReport second_law;
    BathLedger bath;
    /// max |diag block_n - p_n ρ_n| against measurement::apply
    double equivalence_residual = 0.0;
    /// dephasing vs explicit ancilla construction
    double decoherence_route_residual = 0.0;
    double factorization_distance = 0.0;
    double system_closure_distance = 0.0;
    double controller_reset_distance = 0.0;
    double initial_total_entropy = 0.0;
    double final_total_entropy = 0.0;
    double final_total_entropy_assembled = 0.0;
    /// Bath mean entropy after reset minus S_B.
    double bath_entropy_increase = 0.0;
};

/// Full cycle: correlate, feedback unitary, decohere, isothermal finalization,
/// entropy ledger and reset. Needs an efficient model.
ControllerCycleReport run_controller_cycle(const Hamiltonian& h, double temperature,
                                           const MeasurementModel& model,
                                           double bath_entropy = 0.0,
                                           const ProtocolOptions& options = {});

}  // namespace qdemon

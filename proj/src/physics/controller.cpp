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

#include "qdemon/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qdemon/error.hpp"
#include "qdemon/linalg.hpp"

namespace qdemon {

namespace {

constexpr double kBranchTolerance = 1e-8;

ComplexMatrix block_diagonal(const std::vector<ComplexMatrix>& blocks) {
    const std::size_t d = blocks.front().dim();
    ComplexMatrix out(blocks.size() * d);
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out(n * d + i, n * d + j) = blocks[n](i, j);
            }
        }
    }
    return out;
}

ComplexMatrix diagonal_projector(std::size_t dim, std::size_t index) {
    return ComplexMatrix::unit(dim, index, index);
}

}  // namespace

JointState::JointState(DensityMatrix state, std::size_t controller_dim, std::size_t system_dim)
    : state_(std::move(state)), controller_dim_(controller_dim), system_dim_(system_dim) {
    if (controller_dim_ * system_dim_ != state_.dim()) {
        raise(ErrorCode::DimensionMismatch, "joint state dim " + std::to_string(state_.dim()) +
                                                " is not " + std::to_string(controller_dim_) +
                                                "x" + std::to_string(system_dim_));
    }
}

ComplexMatrix JointState::block(std::size_t n, std::size_t m) const {
    ComplexMatrix out(system_dim_);
    const ComplexMatrix& rho = state_.matrix();
    for (std::size_t i = 0; i < system_dim_; ++i) {
        for (std::size_t j = 0; j < system_dim_; ++j) {
            out(i, j) = rho(n * system_dim_ + i, m * system_dim_ + j);
        }
    }
    return out;
}

double JointState::block_hermiticity_residual() const {
    double r = 0.0;
    for (std::size_t n = 0; n < controller_dim_; ++n) {
        for (std::size_t m = n + 1; m < controller_dim_; ++m) {
            r = std::max(r, max_abs_diff(block(n, m), block(m, n).adjoint()));
        }
    }
    return r;
}

JointState correlate(const DensityMatrix& rho, const MeasurementModel& model) {
    if (!model.is_efficient()) {
        raise(ErrorCode::InvalidModel, "controller dilation needs one operator per outcome");
    }
    if (model.dim() != rho.dim()) {
        raise(ErrorCode::DimensionMismatch, "model and state differ in dimension");
    }
    const ValidationReport report = validate(model);
    if (!report.ok) {
        raise(ErrorCode::IncompleteModel, "completeness residual " +
                                              std::to_string(report.completeness_residual));
    }
    const std::size_t n_out = model.outcome_count();
    const std::size_t d = rho.dim();
    std::vector<ComplexMatrix> left;  // A_n ρ
    for (std::size_t n = 0; n < n_out; ++n) {
        left.push_back(model.kraus(n).front() * rho.matrix());
    }
    ComplexMatrix joint(n_out * d);
    for (std::size_t n = 0; n < n_out; ++n) {
        for (std::size_t m = 0; m < n_out; ++m) {
            const ComplexMatrix blk = left[n] * model.kraus(m).front().adjoint();
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    joint(n * d + i, m * d + j) = blk(i, j);
                }
            }
        }
    }
    return JointState(DensityMatrix::from_matrix(joint), n_out, d);
}

ComplexMatrix feedback_unitary(const std::vector<ComplexMatrix>& unitaries) {
    if (unitaries.empty()) {
        raise(ErrorCode::NonUnitaryBlock, "no feedback blocks");
    }
    for (std::size_t n = 0; n < unitaries.size(); ++n) {
        if (unitaries[n].dim() != unitaries.front().dim()) {
            raise(ErrorCode::DimensionMismatch, "feedback blocks differ in dimension");
        }
        const double r = unitarity_residual(unitaries[n]);
        if (r > 1e-10) {
            raise(ErrorCode::NonUnitaryBlock,
                  "block " + std::to_string(n) + " unitarity residual " + std::to_string(r));
        }
    }
    return block_diagonal(unitaries);
}

JointState apply_unitary(const JointState& joint, const ComplexMatrix& u) {
    if (u.dim() != joint.state().dim()) {
        raise(ErrorCode::DimensionMismatch, "unitary and joint state differ in dimension");
    }
    return JointState(DensityMatrix::from_matrix(sandwich(u, joint.state().matrix()).hermitian_part()),
                      joint.controller_dim(), joint.system_dim());
}

JointState decohere_controller(const JointState& joint) {
    const std::vector<std::size_t> sizes(joint.controller_dim(), joint.system_dim());
    return JointState(DensityMatrix::from_matrix(dephase_blocks(joint.state().matrix(), sizes)),
                      joint.controller_dim(), joint.system_dim());
}

JointState decohere_controller_via_ancilla(const JointState& joint) {
    const std::size_t n_c = joint.controller_dim();
    const std::size_t d = joint.system_dim();
    const std::size_t n_a = n_c;
    const ComplexMatrix with_ancilla = tensor(joint.state().matrix(), diagonal_projector(n_a, 0));

    // |n, i, a⟩ → |n, i, (a + n) mod N⟩
    const std::size_t total = n_c * d * n_a;
    ComplexMatrix cnot(total);
    for (std::size_t n = 0; n < n_c; ++n) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t a = 0; a < n_a; ++a) {
                const std::size_t from = (n * d + i) * n_a + a;
                const std::size_t to = (n * d + i) * n_a + (a + n) % n_a;
                cnot(to, from) = 1.0;
            }
        }
    }
    const ComplexMatrix entangled = sandwich(cnot, with_ancilla);
    const ComplexMatrix reduced = partial_trace(entangled, n_c * d, n_a, Subsystem::B);
    return JointState(DensityMatrix::from_matrix(reduced), n_c, d);
}

double BathLedger::mean_entropy() const {
    if (branch_entropies.empty()) {
        return initial_entropy + reset_additions;
    }
    double s = 0.0;
    for (std::size_t n = 0; n < branch_entropies.size(); ++n) {
        s += branch_probabilities[n] * branch_entropies[n];
    }
    return s + reset_additions;
}

BranchFinalization finalize_branches(const JointState& joint,
                                     const std::vector<ComplexMatrix>& branch_hamiltonians,
                                     const Hamiltonian& final_hamiltonian, double temperature,
                                     double entropy, double energy, double bath_entropy,
                                     const ProtocolOptions& options) {
    const std::size_t n_c = joint.controller_dim();
    const std::size_t d = joint.system_dim();
    if (branch_hamiltonians.size() != n_c || final_hamiltonian.dim() != d) {
        raise(ErrorCode::DimensionMismatch, "branch Hamiltonians do not match the joint state");
    }

    BathLedger bath;
    bath.initial_entropy = bath_entropy;
    std::vector<double> weights(n_c, 0.0);
    std::vector<ComplexMatrix> final_blocks(n_c, ComplexMatrix(d));
    std::vector<double> kept_p;
    std::vector<double> kept_s;

    for (std::size_t n = 0; n < n_c; ++n) {
        const ComplexMatrix blk = joint.block(n, n);
        const double p = blk.trace().real();
        if (p < options.p_floor) {
            continue;
        }
        const DensityMatrix branch = DensityMatrix::from_matrix(blk * cplx(1.0 / p));
        const Hamiltonian branch_h(branch_hamiltonians[n]);
        const double eq = trace_distance(branch, thermal_state(branch_h, temperature, options.k));
        if (eq > kBranchTolerance) {
            raise(ErrorCode::BranchMismatch, "branch " + std::to_string(n) +
                                                 " is not in equilibrium (distance " +
                                                 std::to_string(eq) + ")");
        }
        const double e_branch = average_energy(branch, branch_h);
        if (std::abs(e_branch - energy) > kBranchTolerance) {
            raise(ErrorCode::BranchMismatch, "branch " + std::to_string(n) + " has energy " +
                                                 std::to_string(e_branch) + ", expected " +
                                                 std::to_string(energy));
        }
        const double s_n = von_neumann_entropy(branch);

        const DensityMatrix endpoint = thermal_state(final_hamiltonian, temperature, options.k);
        const double s_end = von_neumann_entropy(endpoint);
        const double e_end = average_energy(endpoint, final_hamiltonian);
        if (std::abs(s_end - entropy) > kBranchTolerance ||
            std::abs(e_end - energy) > kBranchTolerance) {
            raise(ErrorCode::BranchMismatch,
                  "isothermal endpoint of branch " + std::to_string(n) +
                      " does not restore the initial entropy and energy");
        }

        weights[n] = p;
        final_blocks[n] = endpoint.matrix() * cplx(p);
        kept_p.push_back(p);
        kept_s.push_back(s_n);
    }
    if (kept_p.empty()) {
        raise(ErrorCode::BranchMismatch, "no branch above the probability floor");
    }
    const double total = std::accumulate(kept_p.begin(), kept_p.end(), 0.0);
    for (auto& p : kept_p) {
        p /= total;
    }
    for (auto& w : weights) {
        w /= total;
    }
    for (auto& b : final_blocks) {
        b *= cplx(1.0 / total);
    }
    for (std::size_t i = 0; i < kept_p.size(); ++i) {
        bath.branch_probabilities.push_back(kept_p[i]);
        bath.branch_entropies.push_back(bath_entropy - (entropy - kept_s[i]));
    }

    const ComplexMatrix joint_final = block_diagonal(final_blocks);
    const DensityMatrix controller =
        DensityMatrix::from_matrix(partial_trace(joint_final, n_c, d, Subsystem::B));
    const DensityMatrix system =
        DensityMatrix::from_matrix(partial_trace(joint_final, n_c, d, Subsystem::A));
    const DensityMatrix final_state = DensityMatrix::from_matrix(joint_final);
    const DensityMatrix product =
        DensityMatrix::from_matrix(tensor(controller.matrix(), system.matrix()));

    BranchFinalization out{JointState(final_state, n_c, d), controller, system, std::move(bath),
                           std::move(kept_p), std::move(kept_s), 0.0};
    out.factorization_distance = trace_distance(final_state, product);
    return out;
}

double total_entropy(const std::vector<double>& p, const std::vector<double>& branch_entropies,
                     double bath_entropy) {
    if (p.size() != branch_entropies.size()) {
        raise(ErrorCode::DimensionMismatch, "probabilities and branch entropies differ in length");
    }
    double mean = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        mean += p[n] * branch_entropies[n];
    }
    return shannon_entropy(p) + mean + bath_entropy;
}

double total_entropy_assembled(const DensityMatrix& controller_system, const BathLedger& bath) {
    return von_neumann_entropy(controller_system) + bath.mean_entropy();
}

SecondLawReport second_law_verdict(const std::vector<double>& p, double delta_S_meas) {
    SecondLawReport r;
    r.outcome_entropy = shannon_entropy(p);
    r.delta_S_meas = delta_S_meas;
    r.delta_S_tot = r.outcome_entropy - delta_S_meas;
    r.pass = r.delta_S_tot >= -1e-9;
    r.efficient = r.delta_S_tot < 1e-8;
    return r;
}

ResetResult reset_controller(const DensityMatrix& controller, const BathLedger& bath) {
    const ComplexMatrix& m = controller.matrix();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (i != j && std::abs(m(i, j)) > kStateTolerance) {
                raise(ErrorCode::InvalidState, "controller must be diagonal in its pointer basis");
            }
        }
    }
    ResetResult out{DensityMatrix::from_matrix(diagonal_projector(controller.dim(), 0)), bath};
    out.bath.reset_additions += von_neumann_entropy(controller);
    return out;
}

ControllerCycleReport run_controller_cycle(const Hamiltonian& h, double temperature,
                                           const MeasurementModel& model, double bath_entropy,
                                           const ProtocolOptions& options) {
    const DensityMatrix rho = thermal_state(h, temperature, options.k);
    const double energy = average_energy(rho, h);
    const double entropy = von_neumann_entropy(rho);
    const std::size_t n_c = model.outcome_count();
    const std::size_t d = h.dim();

    ControllerCycleReport report;
    report.ledger = run_cycle(h, temperature, model, options);

    const MeasurementResult measured = apply(model, rho, h, options.p_floor);
    const JointState joint = correlate(rho, model);

    std::vector<ComplexMatrix> unitaries(n_c, ComplexMatrix::identity(d));
    std::vector<ComplexMatrix> branch_hamiltonians(n_c, h.matrix());
    std::vector<bool> seen(n_c, false);
    double raw_total = 0.0;
    for (std::size_t n = 0; n < n_c; ++n) {
        raw_total += joint.block(n, n).trace().real();
    }
    for (const auto& rec : measured.records) {
        seen[rec.outcome] = true;
        const ComplexMatrix expected = rec.state.matrix() * cplx(rec.probability * raw_total);
        report.equivalence_residual = std::max(
            report.equivalence_residual, max_abs_diff(joint.block(rec.outcome, rec.outcome), expected));
        const FeedbackPlan plan = plan_feedback(rec, h, temperature, energy, options);
        unitaries[rec.outcome] = plan.basis_unitary;
        branch_hamiltonians[rec.outcome] = plan.final_hamiltonian();
    }
    for (std::size_t n = 0; n < n_c; ++n) {
        if (!seen[n]) {
            report.equivalence_residual =
                std::max(report.equivalence_residual, joint.block(n, n).max_abs());
        }
    }

    const JointState after_feedback = apply_unitary(joint, feedback_unitary(unitaries));
    const JointState decohered = decohere_controller(after_feedback);
    const JointState decohered_explicit = decohere_controller_via_ancilla(after_feedback);
    report.decoherence_route_residual =
        max_abs_diff(decohered.state().matrix(), decohered_explicit.state().matrix());

    const BranchFinalization fin = finalize_branches(decohered, branch_hamiltonians, h, temperature,
                                                     entropy, energy, bath_entropy, options);
    report.factorization_distance = fin.factorization_distance;
    report.system_closure_distance = trace_distance(fin.system, rho);

    double mean_branch_entropy = 0.0;
    for (std::size_t i = 0; i < fin.probabilities.size(); ++i) {
        mean_branch_entropy += fin.probabilities[i] * fin.branch_entropies[i];
    }
    report.second_law = second_law_verdict(fin.probabilities, entropy - mean_branch_entropy);
    report.initial_total_entropy = entropy + bath_entropy;
    report.final_total_entropy = total_entropy(fin.probabilities, fin.branch_entropies, bath_entropy);
    report.final_total_entropy_assembled = total_entropy_assembled(fin.joint.state(), fin.bath);

    const ResetResult reset = reset_controller(fin.controller, fin.bath);
    report.controller_reset_distance =
        trace_distance(reset.controller, DensityMatrix::from_matrix(diagonal_projector(n_c, 0)));
    report.bath = reset.bath;
    report.bath_entropy_increase = reset.bath.mean_entropy() - bath_entropy;
    return report;
}

}  // namespace qdemon

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

#include "qdemon/feedback.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qdemon/error.hpp"

namespace qdemon {

ComplexMatrix FeedbackPlan::final_hamiltonian() const {
    return target_hamiltonian + ComplexMatrix::identity(target_hamiltonian.dim()) * cplx(shift);
}

FeedbackPlan plan_feedback(const OutcomeRecord& record, const Hamiltonian& h, double temperature,
                           double initial_energy, const ProtocolOptions& options) {
    const std::size_t n = h.dim();
    if (record.state.dim() != n) {
        raise(ErrorCode::DimensionMismatch, "outcome state and Hamiltonian differ in dimension");
    }
    if (!(temperature > 0.0)) {
        raise(ErrorCode::NonPositiveTemperature, "feedback needs T > 0");
    }

    FeedbackPlan plan;
    plan.outcome = record.outcome;
    const EnergyBasis basis = h.energy_basis();
    const EigenDecomposition& spec = record.state.spectrum();
    plan.energy_basis = basis.vectors;
    plan.populations = spec.eigenvalues;

    // largest population onto the lowest level, and so on
    plan.basis_unitary = basis.vectors * spec.eigenvectors.adjoint();

    plan.equilibrium_populations = plan.populations;
    for (auto& l : plan.equilibrium_populations) {
        if (l < options.lambda_floor) {
            l = options.lambda_floor;
            plan.clamped = true;
        }
    }
    const double total = std::accumulate(plan.equilibrium_populations.begin(),
                                         plan.equilibrium_populations.end(), 0.0);
    if (!(plan.populations.front() >= options.lambda_floor)) {
        raise(ErrorCode::DegenerateState, "every population is below the floor");
    }
    for (auto& l : plan.equilibrium_populations) {
        l /= total;
    }

    const double kt = options.k * temperature;
    plan.level_energies.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        plan.level_energies[j] = -kt * std::log(plan.equilibrium_populations[j]);
    }

    ComplexMatrix scaled = basis.vectors;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            scaled(i, j) *= plan.level_energies[j];
        }
    }
    plan.target_hamiltonian = (scaled * basis.vectors.adjoint()).hermitian_part();

    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        mean += plan.populations[j] * plan.level_energies[j];
    }
    plan.shift = initial_energy - mean;
    return plan;
}

ExecutionResult execute_plan(const OutcomeRecord& record, const FeedbackPlan& plan,
                             const Hamiltonian& h, double temperature,
                             const ProtocolOptions& options) {
    if (plan.outcome != record.outcome || plan.basis_unitary.dim() != record.state.dim() ||
        plan.target_hamiltonian.dim() != h.dim()) {
        raise(ErrorCode::PlanMismatch, "plan for outcome " + std::to_string(plan.outcome) +
                                           " applied to outcome " +
                                           std::to_string(record.outcome));
    }
    const ComplexMatrix rotated = sandwich(plan.basis_unitary, record.state.matrix()).hermitian_part();
    const DensityMatrix state = DensityMatrix::from_matrix(rotated);

    const double e_before = average_energy(record.state, h);
    const double e_rotated = average_energy(state, h);
    const Hamiltonian target(plan.target_hamiltonian);
    const double e_levels = average_energy(state, target);

    ExecutionResult out;
    out.rotation_work = e_rotated - e_before;
    out.level_work = e_levels - e_rotated;
    out.shift_work = plan.shift * rotated.trace().real();
    out.work_extracted = -(out.rotation_work + out.level_work + out.shift_work);
    out.hamiltonian = plan.final_hamiltonian();
    out.equilibrium_distance =
        trace_distance(state, thermal_state(Hamiltonian(out.hamiltonian), temperature, options.k));
    out.state = state;
    return out;
}

double isothermal_work(double target_entropy, double branch_entropy, double temperature, double k) {
    return k * temperature * (target_entropy - branch_entropy);
}

double quasi_static_work(const Hamiltonian& start, const Hamiltonian& end, double temperature,
                         std::size_t steps, double k) {
    if (steps == 0) {
        raise(ErrorCode::ValidationError, "quasi-static integration needs at least one step");
    }
    if (!(temperature > 0.0)) {
        raise(ErrorCode::NonPositiveTemperature, "quasi-static work needs T > 0");
    }
    const ComplexMatrix step = (end.matrix() - start.matrix()) * cplx(1.0 / static_cast<double>(steps));
    const Hamiltonian increment(step);
    double work = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        const double s = static_cast<double>(j) / static_cast<double>(steps);
        const Hamiltonian hs(start.matrix() * cplx(1.0 - s) + end.matrix() * cplx(s));
        work -= average_energy(thermal_state(hs, temperature, k), increment);
    }
    return work;
}

namespace {

TransformResult run_protocol(const Hamiltonian& initial, const Hamiltonian& final,
                             double temperature, const MeasurementModel& model,
                             const ProtocolOptions& options) {
    const DensityMatrix rho = thermal_state(initial, temperature, options.k);
    const DensityMatrix target = thermal_state(final, temperature, options.k);
    const double kt = options.k * temperature;

    CycleLedger ledger;
    ledger.temperature = temperature;
    ledger.k = options.k;
    ledger.energy = average_energy(rho, initial);
    ledger.entropy = von_neumann_entropy(rho);
    ledger.free_energy = ledger.energy - kt * ledger.entropy;
    const double target_free_energy = free_energy(target, final, temperature, options.k);

    const MeasurementResult measured = apply(model, rho, initial, options.p_floor);
    ledger.dropped_outcomes = measured.dropped_outcomes;
    ledger.clamped = measured.clamped;

    for (const auto& rec : measured.records) {
        const FeedbackPlan plan = plan_feedback(rec, initial, temperature, ledger.energy, options);
        const ExecutionResult exec = execute_plan(rec, plan, initial, temperature, options);

        // Quasi-static isothermal path from the branch Hamiltonian to `final`;
        // work = F_start - F_end with F_start taken on the executed state.
        const Hamiltonian branch_h(exec.hamiltonian);
        const double f_start = free_energy(exec.state, branch_h, temperature, options.k);
        const ComplexMatrix path_end = final.matrix();
        const DensityMatrix end_state = thermal_state(Hamiltonian(path_end), temperature, options.k);

        BranchLedger b;
        b.outcome = rec.outcome;
        b.probability = rec.probability;
        b.entropy = rec.entropy;
        b.energy = rec.energy;
        b.delta_energy = exec.work_extracted;
        b.isothermal_work = f_start - target_free_energy;
        b.work = b.isothermal_work + b.delta_energy;
        b.equilibrium_distance = exec.equilibrium_distance;
        b.closure_distance = std::max(exec.equilibrium_distance, trace_distance(end_state, target));
        b.hamiltonian_residual = max_abs_diff(path_end, final.matrix());
        b.clamped = plan.clamped;
        b.branch_hamiltonian = exec.hamiltonian;
        ledger.branches.push_back(std::move(b));
    }

    const std::vector<double> p = probabilities(measured.records);
    ledger.delta_E_meas = measurement_energy_cost(measured.records, ledger.energy);
    ledger.delta_S_meas = entropy_reduction(measured.records, ledger.entropy);
    ledger.outcome_entropy = shannon_entropy(p);
    for (const auto& b : ledger.branches) {
        ledger.work_total += b.probability * b.work;
        ledger.clamped = ledger.clamped || b.clamped;
        ledger.closure_distance = std::max(ledger.closure_distance, b.closure_distance);
        ledger.hamiltonian_residual = std::max(ledger.hamiltonian_residual, b.hamiltonian_residual);
    }
    ledger.work_fb = ledger.work_total - ledger.delta_E_meas;
    ledger.delta_F = ledger.free_energy - target_free_energy;
    ledger.delta_S_tot = ledger.outcome_entropy - ledger.delta_S_meas;
    ledger.heat_from_bath = kt * ledger.delta_S_meas;

    TransformResult result;
    result.free_energy_initial = ledger.free_energy;
    result.free_energy_final = target_free_energy;
    result.delta_F = ledger.delta_F;
    result.work_fb = ledger.work_fb;
    result.ledger = std::move(ledger);
    return result;
}

}  // namespace

CycleLedger run_cycle(const Hamiltonian& h, double temperature, const MeasurementModel& model,
                      const ProtocolOptions& options) {
    CycleLedger ledger = run_protocol(h, h, temperature, model, options).ledger;
    ledger.delta_F = 0.0;
    return ledger;
}

TransformResult run_transform(const Hamiltonian& initial, const Hamiltonian& final,
                              double temperature, const MeasurementModel& model,
                              const ProtocolOptions& options) {
    if (initial.dim() != final.dim()) {
        raise(ErrorCode::DimensionMismatch, "transform endpoints differ in dimension");
    }
    return run_protocol(initial, final, temperature, model, options);
}

ContinuousReport run_continuous(const Hamiltonian& h, double temperature,
                                const ComplexMatrix& generator, double epsilon, std::size_t steps,
                                const ProtocolOptions& options) {
    if (!(epsilon >= 1e-6 && epsilon <= 0.5)) {
        raise(ErrorCode::InvalidModel,
              "continuous feedback strength must lie in [1e-6, 0.5], got " + std::to_string(epsilon));
    }
    if (steps == 0) {
        raise(ErrorCode::ValidationError, "continuous feedback needs at least one step");
    }
    const MeasurementModel model = MeasurementModel::weak(generator, epsilon);
    ContinuousReport report;
    report.epsilon = epsilon;
    report.steps = steps;
    for (std::size_t i = 0; i < steps; ++i) {
        // every cycle restarts from the same thermal state
        CycleLedger step = run_cycle(h, temperature, model, options);
        report.cumulative_work_total += step.work_total;
        report.cumulative_work_fb += step.work_fb;
        report.cumulative_entropy_reduction += step.delta_S_meas;
        report.cumulative_entropy_production += step.delta_S_tot;
        report.step = std::move(step);
    }
    report.scaled_entropy_reduction = report.step.delta_S_meas / (epsilon * epsilon);
    return report;
}

}  // namespace qdemon

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

#include "qdemon/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdemon/error.hpp"

namespace qdemon {

namespace {

double safe_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

std::size_t common_dim(const std::vector<std::vector<ComplexMatrix>>& groups) {
    if (groups.empty() || groups.front().empty()) {
        raise(ErrorCode::InvalidModel, "measurement needs at least one operator");
    }
    const std::size_t dim = groups.front().front().dim();
    for (const auto& g : groups) {
        if (g.empty()) {
            raise(ErrorCode::InvalidModel, "outcome without Kraus operators");
        }
        for (const auto& op : g) {
            if (op.dim() != dim || dim == 0) {
                raise(ErrorCode::DimensionMismatch, "measurement operators differ in dimension");
            }
        }
    }
    return dim;
}

std::vector<std::vector<ComplexMatrix>> singletons(std::vector<ComplexMatrix> ops) {
    std::vector<std::vector<ComplexMatrix>> groups;
    groups.reserve(ops.size());
    for (auto& op : ops) {
        groups.push_back({std::move(op)});
    }
    return groups;
}

}  // namespace

std::string_view to_string(MeasurementKind kind) noexcept {
    switch (kind) {
    case MeasurementKind::BarePositive: return "bare";
    case MeasurementKind::Efficient: return "efficient";
    case MeasurementKind::Inefficient: return "inefficient";
    case MeasurementKind::Weak: return "weak";
    }
    return "unknown";
}

MeasurementModel::MeasurementModel(MeasurementKind kind,
                                   std::vector<std::vector<ComplexMatrix>> groups)
    : kind_(kind), dim_(common_dim(groups)), groups_(std::move(groups)) {}

MeasurementModel MeasurementModel::bare(std::vector<ComplexMatrix> operators) {
    return MeasurementModel(MeasurementKind::BarePositive, singletons(std::move(operators)));
}

MeasurementModel MeasurementModel::efficient(std::vector<ComplexMatrix> operators) {
    return MeasurementModel(MeasurementKind::Efficient, singletons(std::move(operators)));
}

MeasurementModel MeasurementModel::inefficient(std::vector<std::vector<ComplexMatrix>> groups) {
    return MeasurementModel(MeasurementKind::Inefficient, std::move(groups));
}

MeasurementModel MeasurementModel::weak(const ComplexMatrix& generator, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        raise(ErrorCode::InvalidModel,
              "weak measurement strength must lie in (0, 1), got " + std::to_string(epsilon));
    }
    if (!generator.is_hermitian(1e-10)) {
        raise(ErrorCode::InvalidModel, "weak measurement generator is not Hermitian");
    }
    const EigenDecomposition eig = eig_hermitian(generator);
    const double norm = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    if (norm > 1.0 + 1e-12) {
        raise(ErrorCode::InvalidModel,
              "weak measurement generator norm " + std::to_string(norm) + " exceeds 1");
    }
    // P_± share the generator's eigenbasis: eigenvalue b maps to sqrt((1 ± εb)/2)
    std::vector<ComplexMatrix> ops;
    for (double sign : {1.0, -1.0}) {
        ops.push_back(matrix_function(
            eig, [&](double b) { return safe_sqrt((1.0 + sign * epsilon * b) / 2.0); }));
    }
    MeasurementModel model(MeasurementKind::Weak, singletons(std::move(ops)));
    model.generator_ = generator.hermitian_part();
    model.epsilon_ = epsilon;
    return model;
}

ValidationReport validate(const MeasurementModel& model, double tolerance) {
    ValidationReport report;
    const std::size_t dim = model.dim();
    ComplexMatrix sum(dim);
    for (std::size_t n = 0; n < model.outcome_count(); ++n) {
        const auto& group = model.kraus(n);
        for (std::size_t j = 0; j < group.size(); ++j) {
            const ComplexMatrix& a = group[j];
            sum += a.adjoint() * a;
            if (model.kind() != MeasurementKind::BarePositive) {
                continue;
            }
            const double herm = a.hermiticity_residual();
            if (herm > tolerance) {
                report.violations.push_back({n, j, "operator is not Hermitian", herm});
                continue;
            }
            try {
                const double min_eig = eig_hermitian(a).eigenvalues.back();
                if (min_eig < -tolerance) {
                    report.violations.push_back({n, j, "operator is not positive", min_eig});
                }
            } catch (const Error& e) {
                report.violations.push_back({n, j, e.what(), 0.0});
            }
        }
    }
    report.completeness_residual = max_abs_diff(sum, ComplexMatrix::identity(dim));
    if (report.completeness_residual > tolerance) {
        report.violations.push_back(
            {0, 0, "completeness condition violated", report.completeness_residual});
    }
    report.ok = report.violations.empty();
    return report;
}

PolarFactors bare_part(const ComplexMatrix& a) { return polar_decompose(a); }

MeasurementModel bare_model_of(const MeasurementModel& efficient) {
    if (!efficient.is_efficient()) {
        raise(ErrorCode::InvalidModel, "bare part is defined per outcome for efficient models only");
    }
    std::vector<ComplexMatrix> ops;
    for (std::size_t n = 0; n < efficient.outcome_count(); ++n) {
        ops.push_back(bare_part(efficient.kraus(n).front()).positive);
    }
    return MeasurementModel::bare(std::move(ops));
}

MeasurementResult apply(const MeasurementModel& model, const DensityMatrix& rho,
                        const Hamiltonian& h, double p_floor) {
    if (model.dim() != rho.dim() || rho.dim() != h.dim()) {
        raise(ErrorCode::DimensionMismatch,
              "model dim " + std::to_string(model.dim()) + ", state dim " +
                  std::to_string(rho.dim()) + ", Hamiltonian dim " + std::to_string(h.dim()));
    }
    const ValidationReport report = validate(model);
    if (!report.ok) {
        raise(ErrorCode::InvalidModel, report.violations.front().what + " (" +
                                           std::to_string(report.violations.front().value) + ")");
    }

    struct Kept {
        std::size_t outcome;
        double raw_probability;
        ComplexMatrix numerator;
    };
    std::vector<Kept> kept;
    MeasurementResult result;
    double kept_total = 0.0;
    for (std::size_t n = 0; n < model.outcome_count(); ++n) {
        ComplexMatrix numerator(rho.dim());
        for (const auto& a : model.kraus(n)) {
            numerator += sandwich(a, rho.matrix());
        }
        numerator = numerator.hermitian_part();
        const double p = numerator.trace().real();
        if (p < p_floor) {
            result.dropped_outcomes = true;
            continue;
        }
        kept_total += p;
        kept.push_back({n, p, std::move(numerator)});
    }
    if (kept.empty()) {
        raise(ErrorCode::InvalidModel, "every outcome has probability below the floor");
    }

    for (auto& k : kept) {
        OutcomeRecord rec;
        rec.outcome = k.outcome;
        rec.probability = k.raw_probability / kept_total;
        rec.state = DensityMatrix::from_matrix(k.numerator * cplx(1.0 / k.raw_probability));
        rec.entropy = von_neumann_entropy(rec.state);
        rec.energy = average_energy(rec.state, h);
        result.clamped = result.clamped || rec.state.clamped();
        result.records.push_back(std::move(rec));
    }
    return result;
}

DensityMatrix average_post_state(const std::vector<OutcomeRecord>& records) {
    if (records.empty()) {
        raise(ErrorCode::InvalidModel, "no outcome records");
    }
    ComplexMatrix avg(records.front().state.dim());
    for (const auto& r : records) {
        avg += r.state.matrix() * cplx(r.probability);
    }
    return DensityMatrix::from_matrix(avg);
}

double measurement_energy_cost(const std::vector<OutcomeRecord>& records, double initial_energy) {
    double e = 0.0;
    for (const auto& r : records) {
        e += r.probability * r.energy;
    }
    return e - initial_energy;
}

double entropy_reduction(const std::vector<OutcomeRecord>& records, double initial_entropy) {
    double s = 0.0;
    for (const auto& r : records) {
        s += r.probability * r.entropy;
    }
    return initial_entropy - s;
}

std::vector<double> probabilities(const std::vector<OutcomeRecord>& records) {
    std::vector<double> p;
    p.reserve(records.size());
    for (const auto& r : records) {
        p.push_back(r.probability);
    }
    return p;
}

namespace sampling {

namespace {
std::vector<ComplexMatrix> normalized_efficient_ops(std::size_t dim, std::size_t count, Rng& rng) {
    std::vector<ComplexMatrix> gs;
    ComplexMatrix total(dim);
    for (std::size_t n = 0; n < count; ++n) {
        gs.push_back(ginibre(dim, rng));
        total += gs.back().adjoint() * gs.back();
    }
    const ComplexMatrix inv_sqrt =
        matrix_function(total.hermitian_part(), [](double x) { return 1.0 / std::sqrt(x); });
    for (auto& g : gs) {
        g = g * inv_sqrt;
    }
    return gs;
}
}  // namespace

MeasurementModel random_efficient_model(std::size_t dim, std::size_t outcomes, Rng& rng) {
    return MeasurementModel::efficient(normalized_efficient_ops(dim, outcomes, rng));
}

MeasurementModel random_bare_model(std::size_t dim, std::size_t outcomes, Rng& rng) {
    std::vector<ComplexMatrix> ops;
    for (auto& a : normalized_efficient_ops(dim, outcomes, rng)) {
        // S^{-1/2} G†G S^{-1/2} = A†A
        ops.push_back(matrix_function((a.adjoint() * a).hermitian_part(), safe_sqrt));
    }
    return MeasurementModel::bare(std::move(ops));
}

MeasurementModel random_inefficient_model(std::size_t dim, std::size_t outcomes,
                                          std::size_t per_outcome, Rng& rng) {
    auto ops = normalized_efficient_ops(dim, outcomes * per_outcome, rng);
    std::vector<std::vector<ComplexMatrix>> groups(outcomes);
    for (std::size_t i = 0; i < ops.size(); ++i) {
        groups[i / per_outcome].push_back(std::move(ops[i]));
    }
    return MeasurementModel::inefficient(std::move(groups));
}

MeasurementModel random_commuting_model(const Hamiltonian& h, std::size_t outcomes, Rng& rng) {
    const EnergyBasis basis = h.energy_basis();
    const std::size_t dim = h.dim();
    std::vector<std::vector<double>> weights(outcomes, std::vector<double>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        double total = 0.0;
        for (std::size_t n = 0; n < outcomes; ++n) {
            weights[n][j] = 0.05 + rng.uniform();
            total += weights[n][j];
        }
        for (std::size_t n = 0; n < outcomes; ++n) {
            weights[n][j] /= total;
        }
    }
    std::vector<ComplexMatrix> ops;
    const ComplexMatrix w_adj = basis.vectors.adjoint();
    for (std::size_t n = 0; n < outcomes; ++n) {
        ComplexMatrix scaled = basis.vectors;
        for (std::size_t j = 0; j < dim; ++j) {
            for (std::size_t i = 0; i < dim; ++i) {
                scaled(i, j) *= std::sqrt(weights[n][j]);
            }
        }
        ops.push_back((scaled * w_adj).hermitian_part());
    }
    return MeasurementModel::bare(std::move(ops));
}

}  // namespace sampling

}  // namespace qdemon

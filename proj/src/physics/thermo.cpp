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

#include "qdemon/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qdemon/error.hpp"
#include "qdemon/kernels.hpp"

namespace qdemon {

namespace {

constexpr double kRoundingFloor = 64.0 * std::numeric_limits<double>::epsilon();

void require_temperature(double temperature, double k) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        raise(ErrorCode::NonPositiveTemperature,
              "temperature must be positive, got " + std::to_string(temperature));
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        raise(ErrorCode::NonPositiveTemperature,
              "Boltzmann constant must be positive, got " + std::to_string(k));
    }
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& m) {
    if (m.empty()) {
        raise(ErrorCode::InvalidState, "empty density matrix");
    }
    const double herm = m.hermiticity_residual();
    if (herm > kStateTolerance) {
        raise(ErrorCode::InvalidState, "not Hermitian (residual " + std::to_string(herm) + ")");
    }
    ComplexMatrix h = m.hermitian_part();
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kStateTolerance) {
        raise(ErrorCode::InvalidState, "trace " + std::to_string(tr) + " is not 1");
    }
    EigenDecomposition eig = eig_hermitian(h);
    const double min_eig = eig.eigenvalues.back();
    if (min_eig < -kStateTolerance) {
        raise(ErrorCode::InvalidState,
              "negative eigenvalue " + std::to_string(min_eig) + " below -1e-10");
    }
    bool clamped = false;
    if (min_eig < 0.0) {
        for (auto& l : eig.eigenvalues) {
            l = std::max(l, 0.0);
        }
        if (min_eig < -kRoundingFloor) {
            clamped = true;
            const double sum =
                std::accumulate(eig.eigenvalues.begin(), eig.eigenvalues.end(), 0.0);
            for (auto& l : eig.eigenvalues) {
                l /= sum;
            }
            h = eig.reconstruct();
        }
    }
    return DensityMatrix(std::move(h), std::move(eig), clamped);
}

DensityMatrix DensityMatrix::pure(std::span<const cplx> psi) {
    ComplexMatrix m(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        for (std::size_t j = 0; j < psi.size(); ++j) {
            m(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    return from_matrix(m);
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return from_matrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)));
}

Hamiltonian::Hamiltonian(const ComplexMatrix& m) : spectrum_(eig_hermitian(m)) {
    matrix_ = m.hermitian_part();
}

Hamiltonian Hamiltonian::diagonal(std::span<const double> levels) {
    return Hamiltonian(ComplexMatrix::diagonal(levels));
}

Hamiltonian Hamiltonian::diagonal(std::initializer_list<double> levels) {
    return Hamiltonian(ComplexMatrix::diagonal(levels));
}

EnergyBasis Hamiltonian::energy_basis() const {
    const std::size_t n = dim();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spectrum_.eigenvalues[a] < spectrum_.eigenvalues[b];
    });
    EnergyBasis basis{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t j = 0; j < n; ++j) {
        basis.levels[j] = spectrum_.eigenvalues[order[j]];
        for (std::size_t i = 0; i < n; ++i) {
            basis.vectors(i, j) = spectrum_.eigenvectors(i, order[j]);
        }
    }
    return basis;
}

double log_partition(const Hamiltonian& h, double temperature, double k) {
    require_temperature(temperature, k);
    const auto& levels = h.spectrum().eigenvalues;
    const double ground = levels.back();
    const double beta = 1.0 / (k * temperature);
    double z = 0.0;
    for (double e : levels) {
        z += std::exp(-beta * (e - ground));
    }
    return -beta * ground + std::log(z);
}

DensityMatrix thermal_state(const Hamiltonian& h, double temperature, double k) {
    require_temperature(temperature, k);
    const auto& levels = h.spectrum().eigenvalues;
    const double ground = levels.back();
    const double beta = 1.0 / (k * temperature);
    double z = 0.0;
    for (double e : levels) {
        z += std::exp(-beta * (e - ground));
    }
    return DensityMatrix::from_matrix(matrix_function(
        h.spectrum(), [&](double e) { return std::exp(-beta * (e - ground)) / z; }));
}

double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double l : rho.spectrum().eigenvalues) {
        if (l > 1.0 + kStateTolerance) {
            raise(ErrorCode::InvalidState, "eigenvalue above 1: " + std::to_string(l));
        }
        s -= xlogx(std::clamp(l, 0.0, 1.0));
    }
    return s;
}

double average_energy(const DensityMatrix& rho, const Hamiltonian& h) {
    if (rho.dim() != h.dim()) {
        raise(ErrorCode::DimensionMismatch, "state dim " + std::to_string(rho.dim()) +
                                                " vs Hamiltonian dim " + std::to_string(h.dim()));
    }
    // H is Hermitian, so Tr[Hρ] = Σ conj(H_ij)·ρ_ij
    const cplx e = kernels::active().dotc(h.matrix().entries().size(), h.matrix().data(),
                                          rho.matrix().data());
    if (std::abs(e.imag()) > kStateTolerance * std::max(1.0, h.matrix().max_abs())) {
        raise(ErrorCode::InvalidState, "Tr[H rho] has imaginary part " + std::to_string(e.imag()));
    }
    return e.real();
}

double free_energy(const DensityMatrix& rho, const Hamiltonian& h, double temperature, double k) {
    require_temperature(temperature, k);
    return average_energy(rho, h) - k * temperature * von_neumann_entropy(rho);
}

double shannon_entropy(std::span<const double> p) {
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= -1e-12)) {
            raise(ErrorCode::NotADistribution, "negative probability " + std::to_string(x));
        }
        sum += std::max(x, 0.0);
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        raise(ErrorCode::NotADistribution, "probabilities sum to " + std::to_string(sum));
    }
    double s = 0.0;
    for (double x : p) {
        s -= xlogx(std::max(x, 0.0) / sum);
    }
    return s;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) {
        raise(ErrorCode::DimensionMismatch, "trace distance between dims " +
                                                std::to_string(rho.dim()) + " and " +
                                                std::to_string(sigma.dim()));
    }
    const EigenDecomposition eig = eig_hermitian((rho.matrix() - sigma.matrix()).hermitian_part());
    double d = 0.0;
    for (double l : eig.eigenvalues) {
        d += std::abs(l);
    }
    return 0.5 * d;
}

ThermoReading read_thermo(const DensityMatrix& rho, const Hamiltonian& h,
                          std::optional<double> temperature, double k) {
    ThermoReading r;
    r.energy = average_energy(rho, h);
    r.entropy = von_neumann_entropy(rho);
    if (temperature) {
        require_temperature(*temperature, k);
        r.temperature = temperature;
        r.free_energy = r.energy - k * *temperature * r.entropy;
    }
    return r;
}

}  // namespace qdemon

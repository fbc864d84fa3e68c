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

// States, Hamiltonians and the thermodynamic functionals E, S, F.
//
// Units: k_B = 1 unless a Boltzmann constant `k` is passed. Entropies are in
// nats; energies and k·T share whatever energy unit the Hamiltonian uses.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qdemon/linalg.hpp"
#include "qdemon/matrix.hpp"

namespace qdemon {

inline constexpr double kStateTolerance = 1e-10;

/// Hermitian, PSD, unit-trace matrix with its spectrum cached.
///
/// Eigenvalues in [-1e-10, 0) are clamped to zero. If a clamp exceeds rounding
/// level (64 ulp of 1) the matrix is rebuilt from the clamped spectrum,
/// renormalized, and `clamped()` reports it.
class DensityMatrix {
public:
    /// Empty placeholder (dim 0); every real state comes from a factory.
    DensityMatrix() = default;

    /// Throws InvalidState (or NotHermitian) when the invariants fail.
    static DensityMatrix from_matrix(const ComplexMatrix& m);
    /// Pure state |ψ⟩⟨ψ| of a normalized vector.
    static DensityMatrix pure(std::span<const cplx> psi);
    static DensityMatrix maximally_mixed(std::size_t dim);

    std::size_t dim() const noexcept { return matrix_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    /// Eigenvalues are non-negative after clamping.
    const EigenDecomposition& spectrum() const noexcept { return spectrum_; }
    bool clamped() const noexcept { return clamped_; }

private:
    DensityMatrix(ComplexMatrix m, EigenDecomposition e, bool clamped)
        : matrix_(std::move(m)), spectrum_(std::move(e)), clamped_(clamped) {}

    ComplexMatrix matrix_;
    EigenDecomposition spectrum_;
    bool clamped_ = false;
};

/// Energy eigenbasis with levels sorted ascending (stable in the solver's order).
struct EnergyBasis {
    std::vector<double> levels;
    /// Column j is the eigenvector of levels[j].
    ComplexMatrix vectors;
};

class Hamiltonian {
public:
    /// Throws NotHermitian.
    explicit Hamiltonian(const ComplexMatrix& m);
    static Hamiltonian diagonal(std::span<const double> levels);
    static Hamiltonian diagonal(std::initializer_list<double> levels);

    std::size_t dim() const noexcept { return matrix_.dim(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    const EigenDecomposition& spectrum() const noexcept { return spectrum_; }
    EnergyBasis energy_basis() const;

private:
    ComplexMatrix matrix_;
    EigenDecomposition spectrum_;
};

/// E and S of a state; F and T only when the reading is taken at a bath temperature.
struct ThermoReading {
    double energy = 0.0;
    double entropy = 0.0;
    std::optional<double> free_energy;
    std::optional<double> temperature;
};

/// exp(-H/(kT)) / Z. Throws NonPositiveTemperature for T ≤ 0 or k ≤ 0.
DensityMatrix thermal_state(const Hamiltonian& h, double temperature, double k = 1.0);

/// ln Z with Z = Tr exp(-H/(kT)), computed with the ground level factored out.
double log_partition(const Hamiltonian& h, double temperature, double k = 1.0);

/// -Σ λ ln λ in nats, 0·ln 0 = 0.
double von_neumann_entropy(const DensityMatrix& rho);

/// Re Tr[Hρ]; throws DimensionMismatch, or InvalidState if the imaginary part exceeds 1e-10.
double average_energy(const DensityMatrix& rho, const Hamiltonian& h);

/// E - k·T·S
double free_energy(const DensityMatrix& rho, const Hamiltonian& h, double temperature,
                   double k = 1.0);

/// -Σ p ln p. Entries ≥ -1e-12 are clamped, then renormalized if the sum is within 1e-9 of 1.
/// Throws NotADistribution otherwise.
double shannon_entropy(std::span<const double> p);

/// ½ Σ |eig(ρ - σ)|
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

ThermoReading read_thermo(const DensityMatrix& rho, const Hamiltonian& h,
                          std::optional<double> temperature = std::nullopt, double k = 1.0);

}  // namespace qdemon

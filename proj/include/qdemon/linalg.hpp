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

// Hermitian eigensolver and the matrix operations built on it.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qdemon/matrix.hpp"

namespace qdemon {

/// Spectral decomposition M = V·diag(λ)·V† of a Hermitian matrix.
///
/// Eigenvalues are sorted non-increasing (stable with respect to the Jacobi
/// diagonal order). Each column of `eigenvectors` is phase-fixed so that its
/// largest-magnitude component (first one on ties) is real and positive.
/// Inside a degenerate cluster the basis is not canonical; compare spectral
/// projectors rather than columns there.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
    int sweeps = 0;

    ComplexMatrix reconstruct() const;
    /// Column j as a vector.
    std::vector<cplx> eigenvector(std::size_t j) const;
};

struct EigOptions {
    /// Hermiticity tolerance, relative to max(1, ‖M‖_max).
    double hermitian_tol = 1e-10;
    /// Converged when off-diagonal Frobenius norm < tol·‖M‖_F.
    double off_diagonal_tol = 1e-14;
    int max_sweeps = 100;
};

/// Cyclic complex Jacobi. Throws NotHermitian or NoConvergence.
EigenDecomposition eig_hermitian(const ComplexMatrix& m, const EigOptions& options = {});

/// V·diag(f(λ))·V†. Throws DomainError if f returns a non-finite value.
ComplexMatrix matrix_function(const ComplexMatrix& m, const std::function<double(double)>& f);
ComplexMatrix matrix_function(const EigenDecomposition& eig,
                              const std::function<double(double)>& f);

/// Convenience: 0·ln 0 = 0 convention used for entropies.
double xlogx(double x);

struct PolarFactors {
    ComplexMatrix unitary;
    ComplexMatrix positive;
};

/// A = U·P with P = sqrt(A†A).
///
/// On the null space of P, U is completed by Gram–Schmidt over the standard
/// basis vectors e_0, e_1, ... in index order.
PolarFactors polar_decompose(const ComplexMatrix& a);

/// Kronecker product A ⊗ B.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { A, B };

/// Partial trace of M on C^dA ⊗ C^dB over the named factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over);

/// Zero every off-diagonal block of the given block partition.
ComplexMatrix dephase_blocks(const ComplexMatrix& m, std::span<const std::size_t> block_sizes);

}  // namespace qdemon

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

#include "qdemon/random.hpp"

#include <cmath>

#include "qdemon/kernels.hpp"

namespace qdemon::sampling {

ComplexMatrix ginibre(std::size_t dim, Rng& rng) {
    ComplexMatrix g(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            g(i, j) = rng.complex_normal();
        }
    }
    return g;
}

ComplexMatrix random_hermitian(std::size_t dim, Rng& rng) { return ginibre(dim, rng).hermitian_part(); }

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
    // rows of G orthonormalized; a Ginibre matrix is full rank almost surely
    ComplexMatrix q = ginibre(dim, rng);
    const auto& k = kernels::active();
    for (std::size_t r = 0; r < dim; ++r) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < r; ++prev) {
                const cplx proj = k.dotc(dim, q.row(prev).data(), q.row(r).data());
                for (std::size_t i = 0; i < dim; ++i) {
                    q(r, i) -= proj * q(prev, i);
                }
            }
        }
        const double nrm = std::sqrt(k.dotc(dim, q.row(r).data(), q.row(r).data()).real());
        for (std::size_t i = 0; i < dim; ++i) {
            q(r, i) /= nrm;
        }
    }
    return q;
}

ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng) {
    const ComplexMatrix g = ginibre(dim, rng);
    ComplexMatrix rho = (g * g.adjoint()).hermitian_part();
    rho *= 1.0 / rho.trace().real();
    return rho;
}

ComplexMatrix random_pure_state(std::size_t dim, Rng& rng) {
    std::vector<cplx> psi(dim);
    double nrm = 0.0;
    for (auto& z : psi) {
        z = rng.complex_normal();
        nrm += std::norm(z);
    }
    nrm = std::sqrt(nrm);
    ComplexMatrix rho(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            rho(i, j) = psi[i] * std::conj(psi[j]) / (nrm * nrm);
        }
    }
    return rho.hermitian_part();
}

}  // namespace qdemon::sampling

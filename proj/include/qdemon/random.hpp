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

// Seeded random matrices and states for property tests and random scenarios.
// Everything is a pure function of the 64-bit seed fed to Rng.

#include <cstddef>
#include <cstdint>
#include <random>

#include "qdemon/matrix.hpp"

namespace qdemon::sampling {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// Integer in [lo, hi].
    std::size_t uniform_int(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }
    cplx complex_normal() { return {normal(), normal()}; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// i.i.d. complex standard normal entries.
ComplexMatrix ginibre(std::size_t dim, Rng& rng);
/// (G + G†)/2 of a Ginibre matrix.
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);
/// Gram–Schmidt of a Ginibre matrix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);
/// G·G† / Tr, full rank with probability one.
ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng);
/// |ψ⟩⟨ψ| for a random normalized ψ.
ComplexMatrix random_pure_state(std::size_t dim, Rng& rng);

}  // namespace qdemon::sampling

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

// Dense complex kernels used by the matrix layer.
//
// Every kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant. The active table is picked once at startup from CPUID and can be
// pinned with QDEMON_KERNELS=scalar|avx2. Results of the two backends agree to
// rounding (FMA contraction changes the last bits), never bit-for-bit.

#include <complex>
#include <cstddef>
#include <string_view>

namespace qdemon::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

struct KernelTable {
    Backend backend;

    /// c[m×n] = a[m×k] · b[k×n], all row-major and densely packed. c must not alias a or b.
    void (*gemm)(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
                 cplx* c);

    /// Two-row update: x ← a·x + b·y, y ← c·x + d·y (old x on the right-hand side).
    void (*rotate_rows)(std::size_t len, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d);

    /// Σ conj(x_i)·y_i.
    cplx (*dotc)(std::size_t len, const cplx* x, const cplx* y);
};

bool supported(Backend backend) noexcept;
std::string_view name(Backend backend) noexcept;

/// Table for a specific backend; throws std::invalid_argument if the CPU lacks it.
const KernelTable& table(Backend backend);

/// Table used by the library.
const KernelTable& active() noexcept;

/// Process-wide switch of the active table (tests and benchmarks).
void set_active(Backend backend);

namespace detail {
extern const KernelTable scalar_table;
#if defined(QDEMON_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace qdemon::kernels

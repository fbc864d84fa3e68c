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

// Compiled with -mavx2 -mfma; only reached when CPUID reports both.

#include "qdemon/kernels.hpp"

#include <immintrin.h>

namespace qdemon::kernels {
namespace {

// A __m256d holds two interleaved complex numbers [re0, im0, re1, im1].
//
// Complex products are accumulated as two real streams, re-part of the scalar
// times the vector and im-part times the lane-swapped vector, and folded with
// one addsub at the end: (ar + i ai)(br + i bi) = [ar·br - ai·bi, ar·bi + ai·br].

inline __m256d load2(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// s·v for complex scalar s broadcast over both lanes.
inline __m256d cmul(__m256d s_re, __m256d s_im, __m256d v) {
    return _mm256_fmaddsub_pd(s_re, v, _mm256_mul_pd(s_im, swap_re_im(v)));
}

void gemm_avx2(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
               cplx* c) {
    const std::size_t n2 = n & ~std::size_t{1};
    for (std::size_t i = 0; i < m; ++i) {
        const cplx* arow = a + i * k;
        cplx* crow = c + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n2; j += 4) {
            __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
            __m256d re1 = _mm256_setzero_pd(), im1 = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m256d ar = _mm256_set1_pd(arow[p].real());
                const __m256d ai = _mm256_set1_pd(arow[p].imag());
                const __m256d b0 = load2(b + p * n + j);
                const __m256d b1 = load2(b + p * n + j + 2);
                re0 = _mm256_fmadd_pd(ar, b0, re0);
                im0 = _mm256_fmadd_pd(ai, swap_re_im(b0), im0);
                re1 = _mm256_fmadd_pd(ar, b1, re1);
                im1 = _mm256_fmadd_pd(ai, swap_re_im(b1), im1);
            }
            store2(crow + j, _mm256_addsub_pd(re0, im0));
            store2(crow + j + 2, _mm256_addsub_pd(re1, im1));
        }
        for (; j < n2; j += 2) {
            __m256d re0 = _mm256_setzero_pd(), im0 = _mm256_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m256d ar = _mm256_set1_pd(arow[p].real());
                const __m256d ai = _mm256_set1_pd(arow[p].imag());
                const __m256d b0 = load2(b + p * n + j);
                re0 = _mm256_fmadd_pd(ar, b0, re0);
                im0 = _mm256_fmadd_pd(ai, swap_re_im(b0), im0);
            }
            store2(crow + j, _mm256_addsub_pd(re0, im0));
        }
        if (j < n) {
            // odd tail column in the low 128-bit lane
            __m128d re = _mm_setzero_pd(), im = _mm_setzero_pd();
            for (std::size_t p = 0; p < k; ++p) {
                const __m128d bv = _mm_loadu_pd(reinterpret_cast<const double*>(b + p * n + j));
                re = _mm_fmadd_pd(_mm_set1_pd(arow[p].real()), bv, re);
                im = _mm_fmadd_pd(_mm_set1_pd(arow[p].imag()), _mm_permute_pd(bv, 0b01), im);
            }
            _mm_storeu_pd(reinterpret_cast<double*>(crow + j), _mm_addsub_pd(re, im));
        }
    }
}

void rotate_rows_avx2(std::size_t len, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
    const __m256d ar = _mm256_set1_pd(a.real()), ai = _mm256_set1_pd(a.imag());
    const __m256d br = _mm256_set1_pd(b.real()), bi = _mm256_set1_pd(b.imag());
    const __m256d cr = _mm256_set1_pd(c.real()), ci = _mm256_set1_pd(c.imag());
    const __m256d dr = _mm256_set1_pd(d.real()), di = _mm256_set1_pd(d.imag());
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        store2(x + i, _mm256_add_pd(cmul(ar, ai, xv), cmul(br, bi, yv)));
        store2(y + i, _mm256_add_pd(cmul(cr, ci, xv), cmul(dr, di, yv)));
    }
    if (i < len) {
        const cplx xv = x[i], yv = y[i];
        x[i] = a * xv + b * yv;
        y[i] = c * xv + d * yv;
    }
}

cplx dotc_avx2(std::size_t len, const cplx* x, const cplx* y) {
    // re = Σ xr·yr + xi·yi, im = Σ xr·yi - xi·yr
    __m256d same = _mm256_setzero_pd();
    __m256d cross = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d xv = load2(x + i);
        const __m256d yv = load2(y + i);
        same = _mm256_fmadd_pd(xv, yv, same);
        cross = _mm256_fmadd_pd(xv, swap_re_im(yv), cross);
    }
    alignas(32) double s[4];
    alignas(32) double q[4];
    _mm256_store_pd(s, same);
    _mm256_store_pd(q, cross);
    double re = (s[0] + s[1]) + (s[2] + s[3]);
    double im = (q[0] - q[1]) + (q[2] - q[3]);
    if (i < len) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

}  // namespace

namespace detail {
const KernelTable avx2_table{Backend::Avx2, &gemm_avx2, &rotate_rows_avx2, &dotc_avx2};
}

}  // namespace qdemon::kernels

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

#include "qdemon/kernels.hpp"

namespace qdemon::kernels {
namespace {

// Plain real arithmetic: std::complex operator* routes through __muldc3 for
// NaN/inf recovery, which we never need here.
inline void mul_acc(double ar, double ai, double br, double bi, double& cr, double& ci) {
    cr += ar * br - ai * bi;
    ci += ar * bi + ai * br;
}

void gemm_scalar(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
                 cplx* c) {
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double cr = 0.0;
            double ci = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                const cplx av = a[i * k + p];
                const cplx bv = b[p * n + j];
                mul_acc(av.real(), av.imag(), bv.real(), bv.imag(), cr, ci);
            }
            c[i * n + j] = {cr, ci};
        }
    }
}

void rotate_rows_scalar(std::size_t len, cplx* x, cplx* y, cplx a, cplx b, cplx c, cplx d) {
    for (std::size_t i = 0; i < len; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        const double yr = y[i].real(), yi = y[i].imag();
        double nxr = 0.0, nxi = 0.0, nyr = 0.0, nyi = 0.0;
        mul_acc(a.real(), a.imag(), xr, xi, nxr, nxi);
        mul_acc(b.real(), b.imag(), yr, yi, nxr, nxi);
        mul_acc(c.real(), c.imag(), xr, xi, nyr, nyi);
        mul_acc(d.real(), d.imag(), yr, yi, nyr, nyi);
        x[i] = {nxr, nxi};
        y[i] = {nyr, nyi};
    }
}

cplx dotc_scalar(std::size_t len, const cplx* x, const cplx* y) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

}  // namespace

namespace detail {
const KernelTable scalar_table{Backend::Scalar, &gemm_scalar, &rotate_rows_scalar, &dotc_scalar};
}

}  // namespace qdemon::kernels

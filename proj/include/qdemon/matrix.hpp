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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qdemon {

using cplx = std::complex<double>;

/// Square dense complex matrix, row-major.
///
/// Equality is always tolerance-based (`approx_equal`); there is deliberately
/// no operator==.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix diagonal(std::initializer_list<double> values);
    /// |i⟩⟨j| in a `dim`-dimensional space.
    static ComplexMatrix unit(std::size_t dim, std::size_t i, std::size_t j);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    cplx& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const cplx& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    cplx* data() noexcept { return data_.data(); }
    const cplx* data() const noexcept { return data_.data(); }
    std::span<const cplx> entries() const noexcept { return data_; }
    std::span<cplx> row(std::size_t r) { return {data_.data() + r * dim_, dim_}; }
    std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * dim_, dim_}; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    /// max_ij |m_ij|
    double max_abs() const;
    double frobenius_norm() const;

    bool is_hermitian(double tol) const;
    /// max_ij |m_ij - conj(m_ji)|
    double hermiticity_residual() const;
    /// (M + M†)/2
    ComplexMatrix hermitian_part() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx s);

private:
    std::size_t dim_ = 0;
    std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij - b_ij|; throws DimensionMismatch on differing dims.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// A · B · A†
ComplexMatrix sandwich(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[A B] for arbitrary A, B.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |(U†U - I)_ij|
double unitarity_residual(const ComplexMatrix& u);

/// [A, B] = AB - BA
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qdemon

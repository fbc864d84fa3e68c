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

#include "qdemon/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qdemon/error.hpp"
#include "qdemon/kernels.hpp"

namespace qdemon {

namespace {

// Complex Jacobi rotation zeroing the (p,q) entry of a 2×2 Hermitian block
// [[a, z], [conj z, b]]. With z = r·e^{iφ} the rotation is
//   J = [[c, s], [-s·e^{-iφ}, c·e^{-iφ}]],
// so J†·block·J = diag(a - t·r, b + t·r).
struct Rotation {
    double c;
    double s;
    double t;
    cplx phase;  // e^{iφ}
};

Rotation jacobi_rotation(double a, double b, cplx z) {
    const double r = std::abs(z);
    const double theta = (b - a) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, t, z / r};
}

// Applies V ← V·J when `rows` stores V transposed (one row per column of V).
void rotate_columns_stored_as_rows(const kernels::KernelTable& k, ComplexMatrix& rows,
                                   std::size_t p, std::size_t q, const Rotation& rot) {
    const cplx conj_phase = std::conj(rot.phase);
    k.rotate_rows(rows.dim(), rows.row(p).data(), rows.row(q).data(), rot.c,
                  -rot.s * conj_phase, rot.s, rot.c * conj_phase);
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

void fix_phase(ComplexMatrix& v, std::size_t col) {
    const std::size_t n = v.dim();
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::abs(v(i, col));
        if (m > best_abs) {
            best_abs = m;
            best = i;
        }
    }
    if (best_abs <= 0.0) {
        return;
    }
    const cplx phase = std::conj(v(best, col)) / best_abs;
    for (std::size_t i = 0; i < n; ++i) {
        v(i, col) *= phase;
    }
    v(best, col) = best_abs;
}

double row_norm(const ComplexMatrix& m, std::size_t r) {
    const auto row = m.row(r);
    return std::sqrt(kernels::active().dotc(row.size(), row.data(), row.data()).real());
}

}  // namespace

ComplexMatrix EigenDecomposition::reconstruct() const {
    return matrix_function(*this, [](double x) { return x; });
}

std::vector<cplx> EigenDecomposition::eigenvector(std::size_t j) const {
    std::vector<cplx> v(eigenvectors.dim());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = eigenvectors(i, j);
    }
    return v;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& m, const EigOptions& options) {
    const std::size_t n = m.dim();
    const double scale = std::max(1.0, m.max_abs());
    const double residual = m.hermiticity_residual();
    if (residual > options.hermitian_tol * scale) {
        raise(ErrorCode::NotHermitian,
              "hermiticity residual " + std::to_string(residual) + " exceeds tolerance");
    }

    const auto& k = kernels::active();
    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix vt = ComplexMatrix::identity(n);  // V transposed
    const double threshold = options.off_diagonal_tol * a.frobenius_norm();

    int sweep = 0;
    for (;; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off == 0.0 || off < threshold) {
            break;
        }
        if (sweep >= options.max_sweeps) {
            raise(ErrorCode::NoConvergence, "Jacobi sweep cap " + std::to_string(options.max_sweeps) +
                                                " reached; off-diagonal norm " + std::to_string(off));
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx z = a(p, q);
                if (z == cplx{0.0, 0.0}) {
                    continue;
                }
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const Rotation rot = jacobi_rotation(app, aqq, z);
                const double r = std::abs(z);

                // rows p, q of J†·A; the (p,q) block and the mirrored columns are set below
                k.rotate_rows(n, a.row(p).data(), a.row(q).data(), rot.c, -rot.s * rot.phase,
                              rot.s, rot.c * rot.phase);
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != p && j != q) {
                        a(j, p) = std::conj(a(p, j));
                        a(j, q) = std::conj(a(q, j));
                    }
                }
                a(p, p) = app - rot.t * r;
                a(q, q) = aqq + rot.t * r;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                rotate_columns_stored_as_rows(k, vt, p, q, rot);
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    EigenDecomposition out;
    out.sweeps = sweep;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.eigenvalues[j] = a(src, src).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, j) = vt(src, i);
        }
        fix_phase(out.eigenvectors, j);
    }
    return out;
}

ComplexMatrix matrix_function(const EigenDecomposition& eig,
                              const std::function<double(double)>& f) {
    const std::size_t n = eig.eigenvectors.dim();
    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t j = 0; j < n; ++j) {
        const double fx = f(eig.eigenvalues[j]);
        if (!std::isfinite(fx)) {
            raise(ErrorCode::DomainError, "function undefined at eigenvalue " +
                                              std::to_string(eig.eigenvalues[j]));
        }
        for (std::size_t i = 0; i < n; ++i) {
            scaled(i, j) *= fx;
        }
    }
    return (scaled * eig.eigenvectors.adjoint()).hermitian_part();
}

ComplexMatrix matrix_function(const ComplexMatrix& m, const std::function<double(double)>& f) {
    return matrix_function(eig_hermitian(m), f);
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

PolarFactors polar_decompose(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    const auto& k = kernels::active();
    const ComplexMatrix ad = a.adjoint();

    // Right singular vectors from the spectrum of A†A, then a few one-sided
    // Jacobi sweeps on the columns of A·V so small singular values come out
    // with absolute accuracy ~eps·‖A‖ instead of sqrt(eps)·‖A‖.
    const EigenDecomposition gram = eig_hermitian((ad * a).hermitian_part());
    ComplexMatrix vt = gram.eigenvectors.transpose();
    ComplexMatrix wt = (a * gram.eigenvectors).transpose();  // row i = A·v_i

    constexpr double orth_tol = 1e-15;
    constexpr int max_refine_sweeps = 30;
    for (int sweep = 0; sweep < max_refine_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double alpha = k.dotc(n, wt.row(p).data(), wt.row(p).data()).real();
                const double beta = k.dotc(n, wt.row(q).data(), wt.row(q).data()).real();
                const cplx gamma = k.dotc(n, wt.row(p).data(), wt.row(q).data());
                const double g = std::abs(gamma);
                if (g <= orth_tol * std::sqrt(alpha * beta) ||
                    g <= std::numeric_limits<double>::min()) {
                    continue;
                }
                const Rotation rot = jacobi_rotation(alpha, beta, gamma);
                rotate_columns_stored_as_rows(k, wt, p, q, rot);
                rotate_columns_stored_as_rows(k, vt, p, q, rot);
                rotated = true;
            }
        }
        if (!rotated) {
            break;
        }
    }

    std::vector<double> sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
        sigma[i] = row_norm(wt, i);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    const double sigma_max = n == 0 ? 0.0 : sigma[order.front()];
    const double rank_tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                            sigma_max;

    // Left vectors u_i as rows; null-space slots filled afterwards.
    std::vector<std::vector<cplx>> left(n);
    std::vector<std::size_t> null_slots;
    std::vector<std::vector<cplx>> basis;
    for (std::size_t idx : order) {
        if (sigma_max > 0.0 && sigma[idx] > rank_tol) {
            std::vector<cplx> u(wt.row(idx).begin(), wt.row(idx).end());
            for (auto& z : u) {
                z /= sigma[idx];
            }
            left[idx] = u;
            basis.push_back(std::move(u));
        } else {
            null_slots.push_back(idx);
        }
    }

    std::size_t next_unit = 0;
    for (std::size_t slot : null_slots) {
        for (; next_unit < n; ++next_unit) {
            std::vector<cplx> e(n, cplx{0.0, 0.0});
            e[next_unit] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : basis) {
                    const cplx proj = k.dotc(n, b.data(), e.data());
                    for (std::size_t i = 0; i < n; ++i) {
                        e[i] -= proj * b[i];
                    }
                }
            }
            const double nrm = std::sqrt(k.dotc(n, e.data(), e.data()).real());
            if (nrm > 1e-6) {
                for (auto& z : e) {
                    z /= nrm;
                }
                left[slot] = e;
                basis.push_back(std::move(e));
                ++next_unit;
                break;
            }
        }
    }

    // U = Σ u_i v_i†, P = Σ σ_i v_i v_i†
    ComplexMatrix u_cols(n), v_cols(n), v_scaled(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < n; ++r) {
            u_cols(r, i) = left[i][r];
            v_cols(r, i) = vt(i, r);
            v_scaled(r, i) = vt(i, r) * sigma[i];
        }
    }
    const ComplexMatrix v_adj = v_cols.adjoint();
    return {u_cols * v_adj, (v_scaled * v_adj).hermitian_part()};
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i) {
        for (std::size_t j = 0; j < da; ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{0.0, 0.0}) {
                continue;
            }
            for (std::size_t k = 0; k < db; ++k) {
                for (std::size_t l = 0; l < db; ++l) {
                    out(i * db + k, j * db + l) = aij * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t dim_a, std::size_t dim_b,
                            Subsystem over) {
    if (dim_a * dim_b != m.dim()) {
        raise(ErrorCode::DimensionMismatch,
              "partial trace dims " + std::to_string(dim_a) + "x" + std::to_string(dim_b) +
                  " do not match matrix dim " + std::to_string(m.dim()));
    }
    if (over == Subsystem::B) {
        ComplexMatrix out(dim_a);
        for (std::size_t i = 0; i < dim_a; ++i) {
            for (std::size_t ip = 0; ip < dim_a; ++ip) {
                cplx s = 0.0;
                for (std::size_t j = 0; j < dim_b; ++j) {
                    s += m(i * dim_b + j, ip * dim_b + j);
                }
                out(i, ip) = s;
            }
        }
        return out;
    }
    ComplexMatrix out(dim_b);
    for (std::size_t j = 0; j < dim_b; ++j) {
        for (std::size_t jp = 0; jp < dim_b; ++jp) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < dim_a; ++i) {
                s += m(i * dim_b + j, i * dim_b + jp);
            }
            out(j, jp) = s;
        }
    }
    return out;
}

ComplexMatrix dephase_blocks(const ComplexMatrix& m, std::span<const std::size_t> block_sizes) {
    const std::size_t total = std::accumulate(block_sizes.begin(), block_sizes.end(), std::size_t{0});
    if (total != m.dim()) {
        raise(ErrorCode::DimensionMismatch, "block sizes sum to " + std::to_string(total) +
                                                ", matrix dim is " + std::to_string(m.dim()));
    }
    std::vector<std::size_t> block_of(m.dim());
    std::size_t pos = 0;
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        for (std::size_t i = 0; i < block_sizes[b]; ++i) {
            block_of[pos++] = b;
        }
    }
    ComplexMatrix out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (block_of[i] == block_of[j]) {
                out(i, j) = m(i, j);
            }
        }
    }
    return out;
}

}  // namespace qdemon

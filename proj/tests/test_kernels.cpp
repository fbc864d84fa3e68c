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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "qdemon/kernels.hpp"
#include "qdemon/matrix.hpp"
#include "qdemon/random.hpp"

using namespace qdemon;
namespace k = qdemon::kernels;

namespace {

std::vector<cplx> random_vec(std::size_t n, sampling::Rng& rng) {
    std::vector<cplx> v(n);
    for (auto& z : v) {
        z = rng.complex_normal();
    }
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

// plain triple loop, independent of both backends
std::vector<cplx> naive_gemm(std::size_t m, std::size_t kk, std::size_t n,
                             const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> c(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t p = 0; p < kk; ++p) {
                s += a[i * kk + p] * b[p * n + j];
            }
            c[i * n + j] = s;
        }
    }
    return c;
}

const k::KernelTable& other_table() {
    return k::supported(k::Backend::Avx2) ? k::table(k::Backend::Avx2) : k::table(k::Backend::Scalar);
}

}  // namespace

TEST_CASE("scalar gemm matches a naive triple loop", "[kernels]") {
    sampling::Rng rng(1);
    const auto& s = k::table(k::Backend::Scalar);
    for (std::size_t m : {1u, 2u, 3u, 7u}) {
        for (std::size_t kk : {1u, 4u, 5u}) {
            for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 9u}) {
                const auto a = random_vec(m * kk, rng);
                const auto b = random_vec(kk * n, rng);
                std::vector<cplx> c(m * n);
                s.gemm(m, kk, n, a.data(), b.data(), c.data());
                REQUIRE(max_diff(c, naive_gemm(m, kk, n, a, b)) < 1e-13);
            }
        }
    }
}

TEST_CASE("AVX2 kernels agree with the scalar reference", "[kernels]") {
    if (!k::supported(k::Backend::Avx2)) {
        SKIP("AVX2 backend not available on this CPU or build");
    }
    const auto& s = k::table(k::Backend::Scalar);
    const auto& v = other_table();
    REQUIRE(v.backend == k::Backend::Avx2);
    sampling::Rng rng(2);

    SECTION("gemm, all tail shapes") {
        for (std::size_t m = 1; m <= 9; ++m) {
            for (std::size_t kk : {1u, 2u, 3u, 6u, 11u}) {
                for (std::size_t n = 1; n <= 11; ++n) {
                    const auto a = random_vec(m * kk, rng);
                    const auto b = random_vec(kk * n, rng);
                    std::vector<cplx> c1(m * n);
                    std::vector<cplx> c2(m * n);
                    s.gemm(m, kk, n, a.data(), b.data(), c1.data());
                    v.gemm(m, kk, n, a.data(), b.data(), c2.data());
                    REQUIRE(max_diff(c1, c2) < 1e-13 * static_cast<double>(kk));
                }
            }
        }
    }
    SECTION("rotate_rows") {
        for (std::size_t len : {1u, 2u, 3u, 4u, 5u, 17u, 64u}) {
            auto x1 = random_vec(len, rng);
            auto y1 = random_vec(len, rng);
            auto x2 = x1;
            auto y2 = y1;
            const cplx a = rng.complex_normal(), b = rng.complex_normal();
            const cplx c = rng.complex_normal(), d = rng.complex_normal();
            s.rotate_rows(len, x1.data(), y1.data(), a, b, c, d);
            v.rotate_rows(len, x2.data(), y2.data(), a, b, c, d);
            REQUIRE(max_diff(x1, x2) < 1e-13);
            REQUIRE(max_diff(y1, y2) < 1e-13);
        }
    }
    SECTION("dotc") {
        for (std::size_t len : {0u, 1u, 2u, 3u, 7u, 8u, 33u, 256u}) {
            const auto x = random_vec(len, rng);
            const auto y = random_vec(len, rng);
            const cplx r1 = s.dotc(len, x.data(), y.data());
            const cplx r2 = v.dotc(len, x.data(), y.data());
            REQUIRE(std::abs(r1 - r2) < 1e-12 * (1.0 + static_cast<double>(len)));
        }
    }
}

TEST_CASE("rotate_rows uses the old x on both rows", "[kernels]") {
    std::vector<cplx> x{1.0, cplx(0, 1)};
    std::vector<cplx> y{2.0, 3.0};
    k::table(k::Backend::Scalar).rotate_rows(2, x.data(), y.data(), 0.0, 1.0, 1.0, 0.0);
    CHECK(x == std::vector<cplx>{2.0, 3.0});
    CHECK(y == std::vector<cplx>{1.0, cplx(0, 1)});
}

TEST_CASE("dotc conjugates its first argument", "[kernels]") {
    const std::vector<cplx> x{cplx(0, 1)};
    const std::vector<cplx> y{cplx(0, 1)};
    CHECK(k::table(k::Backend::Scalar).dotc(1, x.data(), y.data()) == cplx(1.0, 0.0));
}

TEST_CASE("matrix products are backend independent", "[kernels][dispatch]") {
    sampling::Rng rng(3);
    const ComplexMatrix a = sampling::ginibre(7, rng);
    const ComplexMatrix b = sampling::ginibre(7, rng);
    const k::Backend before = k::active().backend;
    k::set_active(k::Backend::Scalar);
    const ComplexMatrix c1 = a * b;
    const cplx t1 = trace_of_product(a, b);
    k::set_active(other_table().backend);
    const ComplexMatrix c2 = a * b;
    const cplx t2 = trace_of_product(a, b);
    k::set_active(before);
    CHECK(max_abs_diff(c1, c2) < 1e-13);
    CHECK(std::abs(t1 - t2) < 1e-13);
}

TEST_CASE("backend names and availability", "[dispatch]") {
    CHECK(k::supported(k::Backend::Scalar));
    CHECK(k::name(k::Backend::Scalar) == "scalar");
    CHECK(k::name(k::Backend::Avx2) == "avx2");
    if (!k::supported(k::Backend::Avx2)) {
        CHECK_THROWS_AS(k::table(k::Backend::Avx2), std::invalid_argument);
    }
}

TEST_CASE("QDEMON_KERNELS pins the startup backend", "[dispatch-env]") {
    const char* env = std::getenv("QDEMON_KERNELS");
    if (env == nullptr || std::string(env) != "scalar") {
        SKIP("run with QDEMON_KERNELS=scalar");
    }
    CHECK(k::active().backend == k::Backend::Scalar);
}

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
#include <vector>

#include "qdemon/error.hpp"
#include "qdemon/random.hpp"
#include "qdemon/thermo.hpp"
#include "test_support.hpp"

using namespace qdemon;
using Catch::Matchers::WithinAbs;

namespace {
// H = diag(0, 1), T = 1, k = 1; Boltzmann weights 1/(1+e^-1), e^-1/(1+e^-1)
constexpr double kGround = 0.7310585786300049;
constexpr double kExcited = 0.2689414213699951;
constexpr double kThermalEntropy = 0.5822031088882179;
constexpr double kThermalFreeEnergy = -0.31326168751822286;  // -ln(1 + e^-1)

const Hamiltonian kTwoLevel = Hamiltonian::diagonal({0.0, 1.0});
}  // namespace

TEST_CASE("thermal_state", "[thermal]") {
    SECTION("degenerate levels give the maximally mixed state") {
        const DensityMatrix rho = thermal_state(Hamiltonian(ComplexMatrix(2)), 3.7);
        CHECK(max_abs_diff(rho.matrix(), ComplexMatrix::identity(2) * cplx(0.5)) < 1e-15);
    }
    SECTION("two-level Boltzmann populations") {
        const DensityMatrix rho = thermal_state(kTwoLevel, 1.0);
        CHECK_THAT(rho.matrix()(0, 0).real(), WithinAbs(kGround, 1e-15));
        CHECK_THAT(rho.matrix()(1, 1).real(), WithinAbs(kExcited, 1e-15));
    }
    SECTION("high temperature limit") {
        const DensityMatrix rho = thermal_state(kTwoLevel, 1e6);
        CHECK_THAT(rho.matrix()(0, 0).real(), WithinAbs(0.5, 1e-6));
        CHECK_THAT(rho.matrix()(1, 1).real(), WithinAbs(0.5, 1e-6));
    }
    SECTION("k scales the temperature") {
        const DensityMatrix a = thermal_state(kTwoLevel, 2.0, 0.5);
        const DensityMatrix b = thermal_state(kTwoLevel, 1.0, 1.0);
        CHECK(max_abs_diff(a.matrix(), b.matrix()) < 1e-15);
    }
    SECTION("large level spacing does not overflow") {
        const DensityMatrix rho = thermal_state(Hamiltonian::diagonal({1000.0, 2000.0}), 1.0);
        CHECK_THAT(rho.matrix()(0, 0).real(), WithinAbs(1.0, 1e-15));
    }
    SECTION("non-positive temperature") {
        for (double t : {0.0, -1.0}) {
            try {
                (void)thermal_state(kTwoLevel, t);
                FAIL("expected NonPositiveTemperature");
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::NonPositiveTemperature);
            }
        }
    }
}

TEST_CASE("von_neumann_entropy", "[entropy]") {
    const std::vector<cplx> psi{cplx(0.6, 0.0), cplx(0.0, 0.8)};
    CHECK_THAT(von_neumann_entropy(DensityMatrix::pure(psi)), WithinAbs(0.0, 1e-14));
    CHECK_THAT(von_neumann_entropy(DensityMatrix::maximally_mixed(2)), WithinAbs(test::kLn2, 1e-15));
    CHECK_THAT(von_neumann_entropy(thermal_state(kTwoLevel, 1.0)), WithinAbs(kThermalEntropy, 1e-15));
}

TEST_CASE("average_energy and free_energy", "[energy]") {
    CHECK_THAT(average_energy(DensityMatrix::maximally_mixed(2), kTwoLevel), WithinAbs(0.5, 1e-15));
    CHECK_THAT(average_energy(thermal_state(kTwoLevel, 1.0), kTwoLevel), WithinAbs(kExcited, 1e-15));

    sampling::Rng rng(1);
    const ComplexMatrix hm = sampling::random_hermitian(4, rng);
    const Hamiltonian h(hm);
    const auto eig = eig_hermitian(hm);
    const DensityMatrix eigenstate = DensityMatrix::pure(eig.eigenvector(2));
    CHECK_THAT(average_energy(eigenstate, h), WithinAbs(eig.eigenvalues[2], 1e-12));

    const std::vector<cplx> ground{1.0, 0.0};
    CHECK_THAT(free_energy(DensityMatrix::pure(ground), kTwoLevel, 1.0), WithinAbs(0.0, 1e-15));
    CHECK_THAT(free_energy(thermal_state(kTwoLevel, 1.0), kTwoLevel, 1.0),
               WithinAbs(kThermalFreeEnergy, 1e-15));
    CHECK_THAT(free_energy(DensityMatrix::maximally_mixed(2), Hamiltonian(ComplexMatrix(2)), 1.0),
               WithinAbs(-test::kLn2, 1e-15));

    try {
        (void)average_energy(DensityMatrix::maximally_mixed(3), kTwoLevel);
        FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DimensionMismatch);
    }
}

TEST_CASE("read_thermo satisfies F = E - kTS", "[energy]") {
    const DensityMatrix rho = thermal_state(kTwoLevel, 2.0, 0.5);
    const ThermoReading r = read_thermo(rho, kTwoLevel, 2.0, 0.5);
    REQUIRE(r.free_energy.has_value());
    CHECK_THAT(*r.free_energy, WithinAbs(r.energy - 0.5 * 2.0 * r.entropy, 1e-12));
    CHECK_FALSE(read_thermo(rho, kTwoLevel).free_energy.has_value());
}

TEST_CASE("shannon_entropy", "[entropy]") {
    CHECK(shannon_entropy(std::vector<double>{1.0, 0.0}) == 0.0);
    CHECK_THAT(shannon_entropy(std::vector<double>{0.5, 0.5}), WithinAbs(test::kLn2, 1e-15));
    CHECK_THAT(shannon_entropy(std::vector<double>{kGround, kExcited}),
               WithinAbs(kThermalEntropy, 1e-15));
    CHECK_THAT(shannon_entropy(std::vector<double>{0.5, 0.5, -1e-13}), WithinAbs(test::kLn2, 1e-12));
    for (const std::vector<double>& bad : {std::vector<double>{0.5, 0.6}, std::vector<double>{1.1, -0.1}}) {
        try {
            (void)shannon_entropy(bad);
            FAIL("expected NotADistribution");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::NotADistribution);
        }
    }
}

TEST_CASE("trace_distance", "[distance]") {
    const DensityMatrix rho = thermal_state(kTwoLevel, 1.0);
    CHECK(trace_distance(rho, rho) < 1e-15);
    const std::vector<cplx> up{1.0, 0.0};
    const std::vector<cplx> down{0.0, 1.0};
    CHECK_THAT(trace_distance(DensityMatrix::pure(up), DensityMatrix::pure(down)), WithinAbs(1.0, 1e-15));
    const DensityMatrix biased = DensityMatrix::from_matrix(ComplexMatrix::diagonal({0.75, 0.25}));
    CHECK_THAT(trace_distance(biased, DensityMatrix::maximally_mixed(2)), WithinAbs(0.25, 1e-15));
}

TEST_CASE("DensityMatrix validation and clamp", "[state]") {
    auto expect = [](const ComplexMatrix& m, ErrorCode code) {
        try {
            (void)DensityMatrix::from_matrix(m);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.code() == code);
        }
    };
    expect(ComplexMatrix::diagonal({0.6, 0.6}), ErrorCode::InvalidState);
    expect(ComplexMatrix::diagonal({1.5, -0.5}), ErrorCode::InvalidState);
    expect(ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}, ErrorCode::InvalidState);

    const DensityMatrix tiny = DensityMatrix::from_matrix(ComplexMatrix::diagonal({1.0 + 5e-11, -5e-11}));
    CHECK(tiny.clamped());
    CHECK(tiny.spectrum().eigenvalues.back() >= 0.0);
    CHECK_THAT(tiny.matrix().trace().real(), WithinAbs(1.0, 1e-15));
    CHECK_FALSE(DensityMatrix::maximally_mixed(3).clamped());
}

TEST_CASE("thermodynamic properties over seeded ensembles", "[property]") {
    sampling::Rng rng(2025);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = rng.uniform_int(2, 8);
        const Hamiltonian h(sampling::random_hermitian(d, rng));
        const DensityMatrix rho_t = thermal_state(h, 1.0);

        // variational principle
        const DensityMatrix rho = DensityMatrix::from_matrix(sampling::random_density_matrix(d, rng));
        REQUIRE(free_energy(rho, h, 1.0) >= free_energy(rho_t, h, 1.0) - 1e-10);

        // [rho_T, H] = 0
        REQUIRE(commutator(rho_t.matrix(), h.matrix()).max_abs() < 1e-10 * h.matrix().max_abs());

        // F = -kT ln Z
        REQUIRE(std::abs(free_energy(rho_t, h, 1.0) + log_partition(h, 1.0)) < 1e-9);

        // unitary invariance of S
        const ComplexMatrix u = sampling::random_unitary(d, rng);
        const DensityMatrix rotated = DensityMatrix::from_matrix(sandwich(u, rho.matrix()).hermitian_part());
        REQUIRE(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)) < 1e-10);
        REQUIRE(std::abs(von_neumann_entropy(rho) - test::spectral_entropy(rho.matrix())) < 1e-12);
    }
}

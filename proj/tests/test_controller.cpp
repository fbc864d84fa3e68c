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

#include "qdemon/controller.hpp"
#include "qdemon/error.hpp"
#include "qdemon/random.hpp"
#include "test_support.hpp"

using namespace qdemon;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kThermalEntropy = 0.5822031088882179;
constexpr double kXbasisProduction = 0.11094407167172737;
constexpr double kWeakCoherence = 0.21650635094610965;  // sqrt(3)/8

const Hamiltonian kTwoLevel = Hamiltonian::diagonal({0.0, 1.0});

MeasurementModel z_projectors() {
    return MeasurementModel::bare({ComplexMatrix::diagonal({1.0, 0.0}), ComplexMatrix::diagonal({0.0, 1.0})});
}

MeasurementModel x_projectors() {
    return MeasurementModel::bare({ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}},
                                   ComplexMatrix{{0.5, -0.5}, {-0.5, 0.5}}});
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
    try {
        f();
        FAIL("expected " << to_string(code));
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

// |n, i, a> -> |n, i, (a + n) mod N>, built entry by entry
ComplexMatrix reference_cnot(std::size_t nc, std::size_t d) {
    const std::size_t dim = nc * d * nc;
    ComplexMatrix u(dim);
    for (std::size_t n = 0; n < nc; ++n) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t a = 0; a < nc; ++a) {
                const std::size_t from = (n * d + i) * nc + a;
                const std::size_t to = (n * d + i) * nc + (a + n) % nc;
                u(to, from) = 1.0;
            }
        }
    }
    return u;
}
}  // namespace

TEST_CASE("correlate: blocks of the joint state", "[correlate]") {
    SECTION("projectors on I/2") {
        const JointState j = correlate(DensityMatrix::maximally_mixed(2), z_projectors());
        CHECK(j.controller_dim() == 2);
        CHECK(j.system_dim() == 2);
        CHECK(max_abs_diff(j.state().matrix(), ComplexMatrix::diagonal({0.5, 0.0, 0.0, 0.5})) < 1e-15);
        CHECK(j.block(0, 1).max_abs() < 1e-15);
    }
    SECTION("weak measurement keeps coherence between outcomes") {
        const JointState j =
            correlate(DensityMatrix::maximally_mixed(2), MeasurementModel::weak(test::pauli_z(), 0.5));
        CHECK(max_abs_diff(j.block(0, 0), ComplexMatrix::diagonal({0.375, 0.125})) < 1e-15);
        CHECK(max_abs_diff(j.block(0, 1), ComplexMatrix::diagonal({kWeakCoherence, kWeakCoherence})) < 1e-15);
        CHECK(j.block_hermiticity_residual() < 1e-15);
    }
    SECTION("conjugate basis on a thermal qubit") {
        const JointState j = correlate(thermal_state(kTwoLevel, 1.0), x_projectors());
        CHECK_THAT(j.block(0, 0).trace().real(), WithinAbs(0.5, 1e-15));
        CHECK_THAT(j.block(1, 1).trace().real(), WithinAbs(0.5, 1e-15));
        CHECK_THAT(j.state().matrix().trace().real(), WithinAbs(1.0, 1e-15));
    }
    SECTION("errors") {
        const double h = std::sqrt(0.5);
        const auto discard = MeasurementModel::inefficient(
            {{ComplexMatrix::diagonal({h, h}), ComplexMatrix{{0.0, h}, {h, 0.0}}}});
        expect_error(ErrorCode::InvalidModel, [&] { (void)correlate(DensityMatrix::maximally_mixed(2), discard); });
        const auto incomplete = MeasurementModel::bare({ComplexMatrix::diagonal({1.0, 0.0})});
        expect_error(ErrorCode::IncompleteModel,
                     [&] { (void)correlate(DensityMatrix::maximally_mixed(2), incomplete); });
        expect_error(ErrorCode::DimensionMismatch,
                     [&] { (void)correlate(DensityMatrix::maximally_mixed(3), z_projectors()); });
    }
}

TEST_CASE("diagonal blocks reproduce the measurement outcomes", "[correlate][property]") {
    sampling::Rng rng(111);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = rng.uniform_int(2, 4);
        const std::size_t n = rng.uniform_int(2, 3);
        const auto model = sampling::random_efficient_model(d, n, rng);
        const DensityMatrix rho = DensityMatrix::from_matrix(sampling::random_density_matrix(d, rng));
        const Hamiltonian h(sampling::random_hermitian(d, rng));
        const JointState j = correlate(rho, model);
        const auto r = apply(model, rho, h);
        for (const auto& rec : r.records) {
            REQUIRE(max_abs_diff(j.block(rec.outcome, rec.outcome),
                                 rec.state.matrix() * cplx(rec.probability)) < 1e-12);
        }
        REQUIRE(j.block_hermiticity_residual() < 1e-12);
    }
}

TEST_CASE("feedback_unitary and apply_unitary", "[feedback-unitary]") {
    const ComplexMatrix u = feedback_unitary({ComplexMatrix::identity(2), test::pauli_x()});
    CHECK(max_abs_diff(u, ComplexMatrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}) < 1e-15);

    // flipping the |1> branch leaves the system in |0> for both outcomes
    const JointState j = correlate(DensityMatrix::maximally_mixed(2), z_projectors());
    const JointState k = apply_unitary(j, u);
    CHECK(max_abs_diff(k.block(1, 1), ComplexMatrix::diagonal({0.5, 0.0})) < 1e-15);

    expect_error(ErrorCode::NonUnitaryBlock,
                 [] { (void)feedback_unitary({ComplexMatrix::identity(2), ComplexMatrix::diagonal({1.0, 0.5})}); });
    expect_error(ErrorCode::NonUnitaryBlock, [] { (void)feedback_unitary({}); });
    expect_error(ErrorCode::DimensionMismatch,
                 [] { (void)feedback_unitary({ComplexMatrix::identity(2), ComplexMatrix::identity(3)}); });
    expect_error(ErrorCode::DimensionMismatch, [&] { (void)apply_unitary(j, ComplexMatrix::identity(3)); });
}

TEST_CASE("controller decoherence", "[decohere]") {
    sampling::Rng rng(222);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t d = rng.uniform_int(2, 3);
        const std::size_t nc = rng.uniform_int(2, 3);
        const auto model = sampling::random_efficient_model(d, nc, rng);
        const JointState j =
            correlate(DensityMatrix::from_matrix(sampling::random_density_matrix(d, rng)), model);

        const JointState a = decohere_controller(j);
        const JointState b = decohere_controller_via_ancilla(j);
        REQUIRE(max_abs_diff(a.state().matrix(), b.state().matrix()) < 1e-13);
        REQUIRE(max_abs_diff(decohere_controller(a).state().matrix(), a.state().matrix()) < 1e-15);
        for (std::size_t n = 0; n < nc; ++n) {
            REQUIRE(max_abs_diff(a.block(n, n), j.block(n, n)) < 1e-15);
            for (std::size_t m = 0; m < nc; ++m) {
                if (m != n) {
                    REQUIRE(a.block(n, m).max_abs() < 1e-15);
                }
            }
        }

        // independent route: explicit permutation on C⊗S⊗A, then trace out A
        const ComplexMatrix anc0 = ComplexMatrix::unit(nc, 0, 0);
        const ComplexMatrix big = sandwich(reference_cnot(nc, d), tensor(j.state().matrix(), anc0));
        REQUIRE(max_abs_diff(partial_trace(big, nc * d, nc, Subsystem::B), a.state().matrix()) < 1e-13);
    }
}

TEST_CASE("finalize_branches: projective measurement of a degenerate qubit", "[finalize]") {
    const Hamiltonian zero(ComplexMatrix(2));
    const DensityMatrix rho = DensityMatrix::maximally_mixed(2);
    const auto measured = apply(z_projectors(), rho, zero);
    std::vector<ComplexMatrix> branch_h;
    std::vector<ComplexMatrix> rotations;
    for (const auto& rec : measured.records) {
        const FeedbackPlan plan = plan_feedback(rec, zero, 1.0, 0.0);
        branch_h.push_back(plan.final_hamiltonian());
        rotations.push_back(plan.basis_unitary);
    }
    const JointState correlated = correlate(rho, z_projectors());
    // branch 1 sits in |1> until the feedback rotation moves it to the low level
    expect_error(ErrorCode::BranchMismatch, [&] {
        (void)finalize_branches(decohere_controller(correlated), branch_h, zero, 1.0, test::kLn2, 0.0);
    });
    const JointState j = decohere_controller(apply_unitary(correlated, feedback_unitary(rotations)));
    const BranchFinalization fin = finalize_branches(j, branch_h, zero, 1.0, test::kLn2, 0.0, 1.0);
    CHECK(max_abs_diff(fin.system.matrix(), rho.matrix()) < 1e-15);
    CHECK(max_abs_diff(fin.controller.matrix(), ComplexMatrix::diagonal({0.5, 0.5})) < 1e-15);
    CHECK(fin.factorization_distance < 1e-15);
    REQUIRE(fin.bath.branch_entropies.size() == 2);
    for (double s : fin.bath.branch_entropies) {
        CHECK_THAT(s, WithinAbs(1.0 - test::kLn2, 1e-10));
    }
    CHECK_THAT(total_entropy(fin.probabilities, fin.branch_entropies, 1.0), WithinAbs(test::kLn2 + 1.0, 1e-10));
    CHECK_THAT(total_entropy_assembled(fin.joint.state(), fin.bath), WithinAbs(test::kLn2 + 1.0, 1e-10));

    // branches are pure, not thermal for the original Hamiltonian
    expect_error(ErrorCode::BranchMismatch, [&] {
        (void)finalize_branches(j, {zero.matrix(), zero.matrix()}, zero, 1.0, test::kLn2, 0.0);
    });
    // endpoint entropy does not match
    expect_error(ErrorCode::BranchMismatch,
                 [&] { (void)finalize_branches(j, branch_h, zero, 1.0, 0.3, 0.0); });
    expect_error(ErrorCode::DimensionMismatch,
                 [&] { (void)finalize_branches(j, {zero.matrix()}, zero, 1.0, test::kLn2, 0.0); });
}

TEST_CASE("entropy bookkeeping helpers", "[entropy]") {
    CHECK_THAT(total_entropy({0.5, 0.5}, {0.0, 0.0}, 0.0), WithinAbs(test::kLn2, 1e-15));
    CHECK_THAT(total_entropy({1.0}, {0.3}, 0.2), WithinAbs(0.5, 1e-15));
    expect_error(ErrorCode::DimensionMismatch, [] { (void)total_entropy({1.0}, {0.0, 0.0}, 0.0); });

    const SecondLawReport tight = second_law_verdict({0.5, 0.5}, test::kLn2);
    CHECK(tight.pass);
    CHECK(tight.efficient);
    const SecondLawReport loose = second_law_verdict({0.5, 0.5}, kThermalEntropy);
    CHECK(loose.pass);
    CHECK_FALSE(loose.efficient);
    CHECK_THAT(loose.delta_S_tot, WithinAbs(kXbasisProduction, 1e-15));
    CHECK_FALSE(second_law_verdict({0.5, 0.5}, 1.0).pass);

    BathLedger bath;
    bath.branch_probabilities = {0.25, 0.75};
    bath.branch_entropies = {1.0, 2.0};
    bath.reset_additions = 0.5;
    CHECK_THAT(bath.mean_entropy(), WithinAbs(2.25, 1e-15));
}

TEST_CASE("reset_controller", "[reset]") {
    BathLedger bath;
    bath.branch_probabilities = {1.0};
    bath.branch_entropies = {0.0};
    const ResetResult r = reset_controller(DensityMatrix::maximally_mixed(3), bath);
    CHECK(max_abs_diff(r.controller.matrix(), ComplexMatrix::unit(3, 0, 0)) < 1e-15);
    CHECK_THAT(r.bath.reset_additions, WithinAbs(std::log(3.0), 1e-14));
    CHECK_THAT(r.bath.mean_entropy(), WithinAbs(std::log(3.0), 1e-14));

    const DensityMatrix coherent = DensityMatrix::from_matrix(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
    expect_error(ErrorCode::InvalidState, [&] { (void)reset_controller(coherent, bath); });
}

TEST_CASE("run_controller_cycle: closed-form cycles", "[cycle]") {
    SECTION("degenerate qubit, projective") {
        const auto r = run_controller_cycle(Hamiltonian(ComplexMatrix(2)), 1.0, z_projectors(), 0.5);
        CHECK(r.second_law.pass);
        CHECK(r.second_law.efficient);
        CHECK_THAT(r.second_law.delta_S_tot, WithinAbs(0.0, 1e-9));
        CHECK_THAT(r.final_total_entropy, WithinAbs(r.initial_total_entropy, 1e-9));
        CHECK_THAT(r.bath_entropy_increase, WithinAbs(0.0, 1e-9));
        CHECK(r.equivalence_residual < 1e-15);
        CHECK(r.system_closure_distance < 1e-9);
    }
    SECTION("thermal qubit, conjugate basis") {
        const auto r = run_controller_cycle(kTwoLevel, 1.0, x_projectors(), 1.0);
        CHECK(r.second_law.pass);
        CHECK_FALSE(r.second_law.efficient);
        CHECK_THAT(r.second_law.delta_S_tot, WithinAbs(kXbasisProduction, 1e-9));
        CHECK_THAT(r.final_total_entropy - r.initial_total_entropy, WithinAbs(kXbasisProduction, 1e-9));
        CHECK_THAT(r.bath_entropy_increase, WithinAbs(kXbasisProduction, 1e-9));
        CHECK_THAT(r.ledger.work_fb, WithinAbs(kThermalEntropy, 1e-9));
    }
    SECTION("needs an efficient model") {
        const double h = std::sqrt(0.5);
        const auto discard = MeasurementModel::inefficient(
            {{ComplexMatrix::diagonal({h, h}), ComplexMatrix{{0.0, h}, {h, 0.0}}}});
        expect_error(ErrorCode::InvalidModel, [&] { (void)run_controller_cycle(kTwoLevel, 1.0, discard); });
    }
}

TEST_CASE("controller cycle invariants over random efficient measurements", "[property]") {
    sampling::Rng rng(333);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = rng.uniform_int(2, 4);
        const std::size_t n = rng.uniform_int(2, 3);
        const Hamiltonian h(sampling::random_hermitian(d, rng));
        const double t = 0.5 + rng.uniform();
        const double sb = rng.uniform();
        const auto model = sampling::random_efficient_model(d, n, rng);
        const auto r = run_controller_cycle(h, t, model, sb);
        REQUIRE(r.equivalence_residual < 1e-12);
        REQUIRE(r.decoherence_route_residual < 1e-12);
        REQUIRE(r.factorization_distance < 1e-10);
        REQUIRE(r.system_closure_distance < 1e-8);
        REQUIRE(r.controller_reset_distance < 1e-15);
        REQUIRE(r.second_law.pass);
        REQUIRE(std::abs(r.second_law.delta_S_tot - r.ledger.delta_S_tot) < 1e-10);
        REQUIRE(std::abs(r.final_total_entropy - r.initial_total_entropy - r.second_law.delta_S_tot) < 1e-10);
        REQUIRE(std::abs(r.final_total_entropy_assembled - r.final_total_entropy) < 1e-10);
        REQUIRE(std::abs(r.bath_entropy_increase - r.second_law.delta_S_tot) < 1e-10);
    }
}

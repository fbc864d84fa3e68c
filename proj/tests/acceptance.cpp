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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qdemon/config.hpp"
#include "qdemon/controller.hpp"
#include "qdemon/feedback.hpp"
#include "qdemon/io.hpp"
#include "qdemon/linalg.hpp"
#include "qdemon/measurement.hpp"
#include "qdemon/random.hpp"
#include "qdemon/scenario.hpp"

using namespace qdemon;

namespace {

// pinned tolerances
constexpr double kSzilardWorkTol = 1e-6;
constexpr double kSzilardEnergyTol = 1e-10;
constexpr double kSzilardRuntime = 1.0;
constexpr double kSaturationTol = 1e-8;
constexpr double kSuiteRuntime = 60.0;
constexpr double kNonNegativeTol = 1e-9;
constexpr double kCommutingEnergyTol = 1e-10;
constexpr double kCommutingProductionTol = 1e-8;
constexpr double kXbasisProduction = 0.1109441;  // ln 2 - S(ρ_T), H = diag(0,1), T = 1
constexpr double kXbasisTol = 1e-6;
constexpr double kClosureTol = 1e-8;
constexpr double kEquivalenceTol = 1e-10;
constexpr double kFactorizationTol = 1e-8;
constexpr double kUniverseTol = 1e-9;
constexpr double kQuasiStaticTol = 1e-3;
constexpr double kScalingAgreement = 0.05;
constexpr double kLedgerTol = 1e-8;
constexpr double kEigTol = 1e-12;
constexpr double kPolarTol = 1e-10;
constexpr int kEnsembleSize = 120;
constexpr std::uint64_t kEnsembleSeed = 20260101;

constexpr double kLn2 = 0.6931471805599453;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& what) {
    std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ScenarioConfig preset(const char* name) {
    return parse_config(read_text_file(std::string(QDEMON_PRESET_DIR) + "/" + name + ".json"));
}

struct Member {
    Hamiltonian h;
    double temperature;
    MeasurementModel model;
};

// Projectors onto a random partition of the energy eigenbasis of h into n groups.
MeasurementModel energy_projective_model(const Hamiltonian& h, std::size_t n, sampling::Rng& rng) {
    const std::size_t d = h.dim();
    n = std::min(n, d);
    std::vector<std::size_t> group(d);
    for (std::size_t j = 0; j < d; ++j) {
        group[j] = j < n ? j : rng.uniform_int(0, n - 1);
    }
    const ComplexMatrix& v = h.spectrum().eigenvectors;
    std::vector<ComplexMatrix> ops(n, ComplexMatrix(d));
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                ops[group[j]](r, c) += v(r, j) * std::conj(v(c, j));
            }
        }
    }
    return MeasurementModel::bare(std::move(ops));
}

std::vector<Member> ensemble(std::uint64_t seed, bool bare) {
    sampling::Rng rng(seed);
    std::vector<Member> out;
    for (int i = 0; i < kEnsembleSize; ++i) {
        const std::size_t d = rng.uniform_int(2, 4);
        const std::size_t n = rng.uniform_int(2, 4);
        Hamiltonian h(sampling::random_hermitian(d, rng));
        const double t = 0.25 + 2.0 * rng.uniform();
        MeasurementModel m = bare ? sampling::random_bare_model(d, n, rng)
                                  : sampling::random_efficient_model(d, n, rng);
        out.push_back({std::move(h), t, std::move(m)});
    }
    return out;
}

void criterion_1() {
    const auto t0 = Clock::now();
    const ScenarioResult r = run_scenario(preset("szilard"));
    const double dt = seconds_since(t0);
    const double werr = std::abs(r.row.work_fb - kLn2);
    const double eerr = std::abs(r.row.delta_E_meas);
    report(1, werr < kSzilardWorkTol && eerr < kSzilardEnergyTol && dt < kSzilardRuntime,
           fmt("Szilard work_fb - ln2 = %.3e, dE_meas = %.3e, %.3f s", r.row.work_fb - kLn2, eerr, dt));
}

void criterion_2_to_5() {
    const auto t0 = Clock::now();
    const auto members = ensemble(kEnsembleSeed, false);
    sampling::Rng rng(kEnsembleSeed + 1);

    double cycle_sat = 0.0, transform_sat = 0.0;
    double min_production = 1e300, closure = 0.0, ham = 0.0;
    for (const auto& m : members) {
        const CycleLedger l = run_cycle(m.h, m.temperature, m.model);
        cycle_sat = std::max(cycle_sat, std::abs(l.work_fb - m.temperature * l.delta_S_meas));
        min_production = std::min(min_production, l.delta_S_tot);
        closure = std::max(closure, l.closure_distance);
        ham = std::max(ham, l.hamiltonian_residual);

        const Hamiltonian h2(sampling::random_hermitian(m.h.dim(), rng));
        const TransformResult tr = run_transform(m.h, h2, m.temperature, m.model);
        transform_sat = std::max(
            transform_sat, std::abs(tr.work_fb - (tr.delta_F + m.temperature * tr.ledger.delta_S_meas)));
    }

    // bare models on thermal states, and energy-basis models
    const auto bare = ensemble(kEnsembleSeed + 2, true);
    double min_energy_cost = 1e300, commuting_energy = 0.0, commuting_production = 0.0;
    for (const auto& m : bare) {
        const CycleLedger l = run_cycle(m.h, m.temperature, m.model);
        min_energy_cost = std::min(min_energy_cost, l.delta_E_meas);
        min_production = std::min(min_production, l.delta_S_tot);
        closure = std::max(closure, l.closure_distance);
        ham = std::max(ham, l.hamiltonian_residual);

        const MeasurementModel c = sampling::random_commuting_model(m.h, m.model.outcome_count(), rng);
        const CycleLedger lc = run_cycle(m.h, m.temperature, c);
        commuting_energy = std::max(commuting_energy, std::abs(lc.delta_E_meas));
        min_production = std::min(min_production, lc.delta_S_tot);
        closure = std::max(closure, lc.closure_distance);
        ham = std::max(ham, lc.hamiltonian_residual);

        // zero production needs projectors as well as commutation
        const MeasurementModel pc = energy_projective_model(m.h, m.model.outcome_count(), rng);
        const CycleLedger lp = run_cycle(m.h, m.temperature, pc);
        commuting_energy = std::max(commuting_energy, std::abs(lp.delta_E_meas));
        commuting_production = std::max(commuting_production, std::abs(lp.delta_S_tot));
        closure = std::max(closure, lp.closure_distance);
        ham = std::max(ham, lp.hamiltonian_residual);
    }
    const double dt = seconds_since(t0);

    report(2, cycle_sat < kSaturationTol && transform_sat < kSaturationTol && dt < kSuiteRuntime,
           fmt("saturation over %d models: cycle %.3e, transform %.3e, %.2f s", kEnsembleSize, cycle_sat,
               transform_sat, dt));
    report(3, min_energy_cost >= -kNonNegativeTol && commuting_energy < kCommutingEnergyTol,
           fmt("bare min dE_meas = %.3e, commuting max |dE_meas| = %.3e", min_energy_cost,
               commuting_energy));

    const ScenarioResult x = run_scenario(preset("xbasis-thermal"));
    const double xs = x.row.delta_S_tot;
    report(4,
           min_production >= -kNonNegativeTol && commuting_production < kCommutingProductionTol &&
               xs > 1e-4 && std::abs(xs - kXbasisProduction) < kXbasisTol,
           fmt("min dS_tot = %.3e, energy-basis projective max %.3e, xbasis dS_tot = %.7f (expect %.7f)", min_production,
               commuting_production, xs, kXbasisProduction));
    report(5, closure < kClosureTol && ham < kClosureTol,
           fmt("max state closure %.3e, max Hamiltonian residual %.3e", closure, ham));
}

void criterion_6() {
    const auto members = ensemble(kEnsembleSeed + 3, false);
    double equiv = 0.0, fact = 0.0, universe = 0.0;
    for (const auto& m : members) {
        const ControllerCycleReport r = run_controller_cycle(m.h, m.temperature, m.model, 0.5);
        equiv = std::max(equiv, r.equivalence_residual);
        fact = std::max(fact, r.factorization_distance);
        universe = std::max(
            {universe,
             std::abs(r.final_total_entropy - r.initial_total_entropy - r.second_law.delta_S_tot),
             std::abs(r.final_total_entropy_assembled - r.final_total_entropy),
             std::abs(r.second_law.delta_S_tot - r.ledger.delta_S_tot),
             std::abs(r.bath_entropy_increase - r.second_law.delta_S_tot)});
    }
    const ScenarioResult preset_run = run_scenario(preset("controller-fullcycle"));
    const double preset_equiv = preset_run.detail["controller"]["equivalence_residual"].get<double>();
    equiv = std::max(equiv, preset_equiv);
    report(6, equiv < kEquivalenceTol && fact < kFactorizationTol && universe < kUniverseTol,
           fmt("block equivalence %.3e, factorization %.3e, universe ledger %.3e", equiv, fact, universe));
}

void criterion_7() {
    const Hamiltonian a = Hamiltonian::diagonal({0.0, 1.0});
    const Hamiltonian b = Hamiltonian::diagonal({0.0, 2.0});
    const double exact = free_energy(thermal_state(a, 1.0), a, 1.0) - free_energy(thermal_state(b, 1.0), b, 1.0);
    const double e1 = quasi_static_work(a, b, 1.0, 10000) - exact;
    const double e2 = quasi_static_work(a, b, 1.0, 20000) - exact;
    const double ratio = e1 / e2;
    report(7, std::abs(e1) < kQuasiStaticTol && ratio > 1.8 && ratio < 2.2,
           fmt("quasi-static error %.3e at N=1e4, doubling ratio %.3f", e1, ratio));
}

void criterion_8() {
    const Hamiltonian zero(ComplexMatrix(2));
    const ComplexMatrix z = ComplexMatrix::diagonal({1.0, -1.0});
    const double s1 = run_continuous(zero, 1.0, z, 0.1, 1).scaled_entropy_reduction;
    const double s2 = run_continuous(zero, 1.0, z, 0.05, 1).scaled_entropy_reduction;
    const double agree = std::abs(s1 - s2) / s2;
    const double limit = std::abs(s2 - 0.5) / 0.5;
    report(8, agree < kScalingAgreement && limit < kScalingAgreement,
           fmt("dS/eps^2 = %.6f (0.1), %.6f (0.05); relative spread %.2e, vs 1/2 %.2e", s1, s2, agree, limit));
}

void criterion_9() {
    const ScenarioResult r = run_scenario(preset("inefficient-dephase"));
    const LedgerRow& row = r.row;
    const double identities =
        std::max({std::abs(row.work_fb - row.T * row.delta_S_meas),
                  std::abs(row.work_total - row.work_fb - row.delta_E_meas),
                  std::abs(row.delta_S_tot - (row.shannon_outcomes - row.delta_S_meas)),
                  std::abs(row.F - (row.E - row.T * row.S)), row.closure_distance});
    report(9, row.delta_S_meas < 0.0 && row.work_fb < 0.0 && identities < kLedgerTol,
           fmt("dS_meas = %.6f, work_fb = %.6f, ledger identities %.3e", row.delta_S_meas, row.work_fb,
               identities));
}

void criterion_10() {
    sampling::Rng rng(kEnsembleSeed + 10);
    double eig_res = 0.0, polar_res = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t d = rng.uniform_int(2, 8);
        const ComplexMatrix m = sampling::random_hermitian(d, rng);
        const EigenDecomposition e = eig_hermitian(m);
        eig_res = std::max({eig_res, max_abs_diff(e.reconstruct(), m), unitarity_residual(e.eigenvectors)});

        ComplexMatrix a = sampling::ginibre(d, rng);
        if (i % 4 == 3) {
            // rank deficient: duplicate a column
            for (std::size_t r = 0; r < d; ++r) {
                a(r, d - 1) = a(r, 0);
            }
        }
        const PolarFactors p = polar_decompose(a);
        const double min_eig = eig_hermitian(p.positive).eigenvalues.back();
        polar_res = std::max({polar_res, max_abs_diff(p.unitary * p.positive, a),
                              unitarity_residual(p.unitary), std::max(0.0, -min_eig)});
    }
    report(10, eig_res < kEigTol && polar_res < kPolarTol,
           fmt("200 matrices: eig residual %.3e, polar residual %.3e", eig_res, polar_res));
}

void guarded(int id, const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, std::string("threw: ") + e.what());
    }
}

}  // namespace

int main() {
    guarded(1, criterion_1);
    guarded(2, criterion_2_to_5);
    guarded(6, criterion_6);
    guarded(7, criterion_7);
    guarded(8, criterion_8);
    guarded(9, criterion_9);
    guarded(10, criterion_10);
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

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

#include "qdemon/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

#include "qdemon/controller.hpp"
#include "qdemon/error.hpp"

namespace qdemon {

using nlohmann::json;

namespace {

constexpr double kEfficiencyThreshold = 1e-8;

LedgerRow row_from_ledger(const ScenarioConfig& cfg, const CycleLedger& l) {
    LedgerRow r;
    r.scenario_id = cfg.id;
    r.mode = std::string(to_string(cfg.mode));
    r.dim = cfg.dim;
    r.T = l.temperature;
    r.E = l.energy;
    r.S = l.entropy;
    r.F = l.free_energy;
    r.n_outcomes = cfg.model->outcome_count();
    r.delta_E_meas = l.delta_E_meas;
    r.delta_S_meas = l.delta_S_meas;
    r.shannon_outcomes = l.outcome_entropy;
    r.work_total = l.work_total;
    r.work_fb = l.work_fb;
    r.delta_F = l.delta_F;
    r.delta_S_tot = l.delta_S_tot;
    r.closure_distance = l.closure_distance;
    r.efficiency_flag = l.delta_S_tot < kEfficiencyThreshold;
    r.clamp_flag = l.clamped;
    return r;
}

json ledger_detail(const CycleLedger& l) {
    json branches = json::array();
    for (const auto& b : l.branches) {
        branches.push_back({{"outcome", b.outcome},
                            {"probability", b.probability},
                            {"entropy", b.entropy},
                            {"energy", b.energy},
                            {"delta_energy", b.delta_energy},
                            {"isothermal_work", b.isothermal_work},
                            {"work", b.work},
                            {"equilibrium_distance", b.equilibrium_distance},
                            {"clamped", b.clamped}});
    }
    return {{"branches", std::move(branches)},
            {"heat_from_bath", l.heat_from_bath},
            {"hamiltonian_residual", l.hamiltonian_residual},
            {"dropped_outcomes", l.dropped_outcomes},
            {"second_law_pass", l.delta_S_tot >= -1e-9}};
}

ScenarioResult run_unwrapped(const ScenarioConfig& cfg) {
    const Hamiltonian h(cfg.hamiltonian);
    const MeasurementModel& model = *cfg.model;
    ScenarioResult out;
    json extra;
    switch (cfg.mode) {
    case RunMode::Cycle: {
        const CycleLedger l = run_cycle(h, cfg.temperature, model, cfg.options);
        out.row = row_from_ledger(cfg, l);
        out.detail = ledger_detail(l);
        break;
    }
    case RunMode::Transform: {
        const TransformResult t = run_transform(h, Hamiltonian(*cfg.h2), cfg.temperature, model,
                                                cfg.options);
        out.row = row_from_ledger(cfg, t.ledger);
        out.detail = ledger_detail(t.ledger);
        extra = {{"free_energy_initial", t.free_energy_initial},
                 {"free_energy_final", t.free_energy_final}};
        break;
    }
    case RunMode::Continuous: {
        const ContinuousReport c = run_continuous(h, cfg.temperature, model.generator(),
                                                  model.epsilon(), cfg.steps, cfg.options);
        // the row is one step; the cumulative totals live in the detail
        out.row = row_from_ledger(cfg, c.step);
        out.detail = ledger_detail(c.step);
        extra = {{"epsilon", c.epsilon},
                 {"steps", c.steps},
                 {"cumulative_work_total", c.cumulative_work_total},
                 {"cumulative_work_fb", c.cumulative_work_fb},
                 {"cumulative_entropy_reduction", c.cumulative_entropy_reduction},
                 {"cumulative_entropy_production", c.cumulative_entropy_production},
                 {"scaled_entropy_reduction", c.scaled_entropy_reduction}};
        break;
    }
    case RunMode::Controller: {
        const ControllerCycleReport c =
            run_controller_cycle(h, cfg.temperature, model, cfg.bath_entropy, cfg.options);
        out.row = row_from_ledger(cfg, c.ledger);
        out.row.closure_distance =
            std::max({c.ledger.closure_distance, c.system_closure_distance,
                      c.factorization_distance, c.controller_reset_distance});
        out.detail = ledger_detail(c.ledger);
        extra = {{"equivalence_residual", c.equivalence_residual},
                 {"decoherence_route_residual", c.decoherence_route_residual},
                 {"factorization_distance", c.factorization_distance},
                 {"system_closure_distance", c.system_closure_distance},
                 {"controller_reset_distance", c.controller_reset_distance},
                 {"initial_total_entropy", c.initial_total_entropy},
                 {"final_total_entropy", c.final_total_entropy},
                 {"final_total_entropy_assembled", c.final_total_entropy_assembled},
                 {"bath_entropy_increase", c.bath_entropy_increase},
                 {"bath_branch_entropies", c.bath.branch_entropies},
                 {"second_law_delta_S_tot", c.second_law.delta_S_tot}};
        break;
    }
    }
    out.detail["scenario_id"] = cfg.id;
    out.detail["mode"] = to_string(cfg.mode);
    out.detail["measurement_kind"] = cfg.measurement_kind;
    out.detail["seed"] = cfg.seed;
    out.detail["k"] = cfg.k;
    if (!extra.is_null()) {
        out.detail[std::string(to_string(cfg.mode))] = std::move(extra);
    }
    return out;
}

json::json_pointer pointer_for(std::string_view path) {
    if (path.empty()) {
        raise(ErrorCode::UnknownParameter, "empty parameter path");
    }
    std::string ptr;
    std::string token;
    auto flush = [&] {
        if (token.empty()) {
            raise(ErrorCode::UnknownParameter, "malformed parameter path '" + std::string(path) + "'");
        }
        ptr += "/" + token;
        token.clear();
    };
    for (std::size_t i = 0; i < path.size(); ++i) {
        const char c = path[i];
        if (c == '.') {
            flush();
        } else if (c == '[') {
            if (!token.empty()) {
                flush();
            }
            const std::size_t close = path.find(']', i);
            if (close == std::string_view::npos || close == i + 1) {
                raise(ErrorCode::UnknownParameter, "malformed parameter path '" + std::string(path) + "'");
            }
            token = std::string(path.substr(i + 1, close - i - 1));
            if (token.find_first_not_of("0123456789") != std::string::npos) {
                raise(ErrorCode::UnknownParameter, "malformed parameter path '" + std::string(path) + "'");
            }
            flush();
            i = close;
            if (i + 1 < path.size() && path[i + 1] == '.') {
                ++i;
            }
        } else if (c == '/' || c == '~') {
            raise(ErrorCode::UnknownParameter, "malformed parameter path '" + std::string(path) + "'");
        } else {
            token += c;
        }
    }
    if (!token.empty()) {
        flush();
    }
    return json::json_pointer(ptr);
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    try {
        return run_unwrapped(config);
    } catch (const Error& e) {
        raise(e.code(), "scenario '" + config.id + "': " + e.detail());
    }
}

std::vector<LedgerRow> sweep(const ScenarioConfig& config, std::string_view path,
                             const std::vector<double>& values, unsigned threads) {
    const json::json_pointer ptr = pointer_for(path);
    bool present = false;
    try {
        present = config.source.contains(ptr);
    } catch (const json::exception&) {
        present = false;
    }
    if (!present || !config.source.at(ptr).is_number()) {
        raise(ErrorCode::UnknownParameter,
              "'" + std::string(path) + "' is not a numeric field of the config");
    }
    const bool integral = config.source.at(ptr).is_number_integer();

    std::vector<json> docs;
    docs.reserve(values.size());
    for (double v : values) {
        json doc = config.source;
        if (integral && std::isfinite(v) && std::floor(v) == v) {
            doc[ptr] = static_cast<std::int64_t>(v);
        } else {
            doc[ptr] = v;
        }
        if (!doc.contains("seed")) {
            doc["seed"] = config.seed;
        }
        docs.push_back(std::move(doc));
    }

    std::vector<LedgerRow> rows(values.size());
    std::vector<std::exception_ptr> errors(values.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < docs.size(); i = next++) {
            try {
                rows[i] = run_scenario(config_from_json(docs[i])).row;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, docs.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return rows;
}

ValidationSummary validate_config_text(std::string_view text) {
    ValidationSummary s;
    auto line = [&](bool ok, const std::string& what) {
        s.lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
        s.ok = s.ok && ok;
    };
    auto residual = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", x);
        return std::string(buf);
    };

    ScenarioConfig cfg;
    try {
        cfg = parse_config_unchecked(text);
    } catch (const std::exception& e) {
        line(false, e.what());
        return s;
    }
    line(true, "scenario '" + cfg.id + "', mode " + std::string(to_string(cfg.mode)) + ", dim " +
                   std::to_string(cfg.dim));
    const double tol = cfg.tolerance;
    const double h_res = cfg.hamiltonian.hermiticity_residual();
    line(h_res <= tol * std::max(1.0, cfg.hamiltonian.max_abs()),
         "system.hamiltonian hermiticity residual " + residual(h_res));
    if (cfg.h2) {
        const double r = cfg.h2->hermiticity_residual();
        line(r <= tol * std::max(1.0, cfg.h2->max_abs()),
             "transform.h2 hermiticity residual " + residual(r));
    }
    line(true, "bath.temperature " + residual(cfg.temperature) + ", constants.k " + residual(cfg.k));

    const ValidationReport report = validate(*cfg.model, tol);
    line(report.completeness_residual <= tol,
         "measurement (" + cfg.measurement_kind + ", " +
             std::to_string(cfg.model->outcome_count()) + " outcomes) completeness residual " +
             residual(report.completeness_residual));
    for (const auto& v : report.violations) {
        if (v.what == "completeness condition violated") {
            continue;
        }
        line(false, "measurement outcome " + std::to_string(v.outcome) + " operator " +
                        std::to_string(v.index) + ": " + v.what + " (" + residual(v.value) + ")");
    }
    if (s.ok) {
        try {
            (void)config_from_json(cfg.source);
        } catch (const std::exception& e) {
            line(false, e.what());
        }
    }
    return s;
}

}  // namespace qdemon

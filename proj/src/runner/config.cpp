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

#include "qdemon/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <string>

#include "qdemon/error.hpp"
#include "qdemon/random.hpp"

namespace qdemon {

using nlohmann::json;

namespace {

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string indexed(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
    raise(ErrorCode::ValidationError, path + ": " + what);
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        invalid(path.empty() ? "<root>" : path, "expected an object");
    }
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            invalid(join(path, item.key()), "unknown key");
        }
    }
}

const json* find(const json& obj, std::string_view key) {
    const auto it = obj.find(std::string(key));
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, std::string_view key) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        invalid(join(path, key), "required key is missing");
    }
    return *v;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        invalid(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        invalid(path, "must be finite");
    }
    return x;
}

std::uint64_t whole(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) {
            invalid(path, "must be non-negative");
        }
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    const double x = number(v, path);
    if (x < 0.0 || std::floor(x) != x) {
        invalid(path, "expected a non-negative integer");
    }
    return static_cast<std::uint64_t>(x);
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string()) {
        invalid(path, "expected a string");
    }
    return v.get<std::string>();
}

cplx entry_from_json(const json& v, const std::string& path) {
    if (v.is_number()) {
        return {number(v, path), 0.0};
    }
    if (!v.is_array() || v.size() != 2) {
        invalid(path, "expected [re, im] or a number");
    }
    return {number(v[0], indexed(path, 0)), number(v[1], indexed(path, 1))};
}

std::string format_entry(cplx z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
    return buf;
}

// Returns the offending path, or empty if Hermitian within tolerance.
std::string hermitian_violation(const ComplexMatrix& m, const std::string& path, double tol) {
    const double scaled = tol * std::max(1.0, m.max_abs());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = i; j < m.dim(); ++j) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > scaled) {
                return indexed(indexed(path, i), j) + ": entry (" + std::to_string(i) + "," +
                       std::to_string(j) + ") = " + format_entry(m(i, j)) +
                       " is not the conjugate of entry (" + std::to_string(j) + "," +
                       std::to_string(i) + ") = " + format_entry(m(j, i));
            }
        }
    }
    return {};
}

ComplexMatrix hamiltonian_from_json(const json& v, const std::string& path, bool checked,
                                    double tol) {
    check_keys(v, path, {"diagonal", "matrix"});
    const json* diag = find(v, "diagonal");
    const json* full = find(v, "matrix");
    if ((diag == nullptr) == (full == nullptr)) {
        invalid(path, "give exactly one of 'diagonal' or 'matrix'");
    }
    if (diag != nullptr) {
        const std::string p = join(path, "diagonal");
        if (!diag->is_array() || diag->empty()) {
            invalid(p, "expected a non-empty list of energies");
        }
        std::vector<double> levels;
        for (std::size_t i = 0; i < diag->size(); ++i) {
            levels.push_back(number((*diag)[i], indexed(p, i)));
        }
        return ComplexMatrix::diagonal(levels);
    }
    const std::string p = join(path, "matrix");
    ComplexMatrix m = matrix_from_json(*full, p);
    if (checked) {
        const std::string bad = hermitian_violation(m, p, tol);
        if (!bad.empty()) {
            raise(ErrorCode::ValidationError, bad + " (Hamiltonian must be Hermitian)");
        }
    }
    return m;
}

std::vector<ComplexMatrix> operator_list(const json& v, const std::string& path, std::size_t dim) {
    if (!v.is_array() || v.empty()) {
        invalid(path, "expected a non-empty list of matrices");
    }
    std::vector<ComplexMatrix> ops;
    for (std::size_t n = 0; n < v.size(); ++n) {
        ops.push_back(matrix_from_json(v[n], indexed(path, n)));
        if (ops.back().dim() != dim) {
            invalid(indexed(path, n), "dimension " + std::to_string(ops.back().dim()) +
                                          " does not match system.dim " + std::to_string(dim));
        }
    }
    return ops;
}

MeasurementModel model_from_json(const json& v, const std::string& path, ScenarioConfig& cfg) {
    check_keys(v, path,
               {"kind", "operators", "groups", "generator", "epsilon", "outcomes", "per_outcome"});
    const std::string kind = text(require(v, path, "kind"), join(path, "kind"));
    cfg.measurement_kind = kind;
    auto forbid_except = [&](std::initializer_list<std::string_view> used) {
        for (std::string_view key : {"operators", "groups", "generator", "epsilon", "outcomes",
                                     "per_outcome"}) {
            if (find(v, key) != nullptr &&
                std::find(used.begin(), used.end(), key) == used.end()) {
                invalid(join(path, key), "not used by measurement kind '" + kind + "'");
            }
        }
    };
    auto count = [&](std::string_view key) {
        const std::string p = join(path, key);
        const std::uint64_t c = whole(require(v, path, key), p);
        if (c == 0 || c > 64) {
            invalid(p, "must lie in [1, 64]");
        }
        return static_cast<std::size_t>(c);
    };

    try {
        if (kind == "bare" || kind == "efficient") {
            forbid_except({"operators"});
            auto ops = operator_list(require(v, path, "operators"), join(path, "operators"), cfg.dim);
            return kind == "bare" ? MeasurementModel::bare(std::move(ops))
                                  : MeasurementModel::efficient(std::move(ops));
        }
        if (kind == "inefficient") {
            forbid_except({"groups"});
            const std::string p = join(path, "groups");
            const json& g = require(v, path, "groups");
            if (!g.is_array() || g.empty()) {
                invalid(p, "expected a non-empty list of operator lists");
            }
            std::vector<std::vector<ComplexMatrix>> groups;
            for (std::size_t n = 0; n < g.size(); ++n) {
                groups.push_back(operator_list(g[n], indexed(p, n), cfg.dim));
            }
            return MeasurementModel::inefficient(std::move(groups));
        }
        if (kind == "weak") {
            forbid_except({"generator", "epsilon"});
            const ComplexMatrix b =
                matrix_from_json(require(v, path, "generator"), join(path, "generator"));
            if (b.dim() != cfg.dim) {
                invalid(join(path, "generator"), "dimension does not match system.dim");
            }
            const double eps = number(require(v, path, "epsilon"), join(path, "epsilon"));
            if (!(eps > 0.0 && eps < 1.0)) {
                invalid(join(path, "epsilon"), "must lie in (0, 1)");
            }
            return MeasurementModel::weak(b, eps);
        }
        sampling::Rng rng(cfg.seed);
        if (kind == "random-efficient" || kind == "random-bare" || kind == "random-commuting") {
            forbid_except({"outcomes"});
            const std::size_t outcomes = count("outcomes");
            if (kind == "random-efficient") {
                return sampling::random_efficient_model(cfg.dim, outcomes, rng);
            }
            if (kind == "random-bare") {
                return sampling::random_bare_model(cfg.dim, outcomes, rng);
            }
            return sampling::random_commuting_model(Hamiltonian(cfg.hamiltonian.hermitian_part()),
                                                    outcomes, rng);
        }
        if (kind == "random-inefficient") {
            forbid_except({"outcomes", "per_outcome"});
            const std::size_t outcomes = count("outcomes");
            const std::size_t per = count("per_outcome");
            return sampling::random_inefficient_model(cfg.dim, outcomes, per, rng);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ValidationError) {
            throw;
        }
        invalid(path, e.detail());
    }
    invalid(join(path, "kind"), "unknown measurement kind '" + kind + "'");
}

RunMode mode_from_string(const std::string& s, const std::string& path) {
    if (s == "cycle") return RunMode::Cycle;
    if (s == "transform") return RunMode::Transform;
    if (s == "continuous") return RunMode::Continuous;
    if (s == "controller") return RunMode::Controller;
    invalid(path, "unknown mode '" + s + "' (cycle, transform, continuous, controller)");
}

ScenarioConfig build(const json& doc, bool checked) {
    check_keys(doc, "", {"id", "scenario_id", "system", "bath", "constants", "measurement", "run",
                         "transform", "continuous", "numerics", "seed"});
    ScenarioConfig cfg;
    cfg.source = doc;

    if (find(doc, "id") != nullptr && find(doc, "scenario_id") != nullptr) {
        invalid("scenario_id", "give either 'id' or 'scenario_id', not both");
    }
    if (const json* id = find(doc, "id")) {
        cfg.id = text(*id, "id");
    } else if (const json* sid = find(doc, "scenario_id")) {
        cfg.id = text(*sid, "scenario_id");
    } else {
        cfg.id = "scenario";
    }
    cfg.seed = default_seed();
    if (const json* seed = find(doc, "seed")) {
        cfg.seed = whole(*seed, "seed");
    }

    if (const json* num = find(doc, "numerics")) {
        check_keys(*num, "numerics", {"lambda_floor", "p_floor", "tolerance"});
        if (const json* v = find(*num, "lambda_floor")) {
            cfg.options.lambda_floor = number(*v, "numerics.lambda_floor");
            if (!(cfg.options.lambda_floor > 0.0 && cfg.options.lambda_floor < 1e-3)) {
                invalid("numerics.lambda_floor", "must lie in (0, 1e-3)");
            }
        }
        if (const json* v = find(*num, "p_floor")) {
            cfg.options.p_floor = number(*v, "numerics.p_floor");
            if (!(cfg.options.p_floor >= 0.0 && cfg.options.p_floor < 1e-3)) {
                invalid("numerics.p_floor", "must lie in [0, 1e-3)");
            }
        }
        if (const json* v = find(*num, "tolerance")) {
            cfg.tolerance = number(*v, "numerics.tolerance");
            if (!(cfg.tolerance > 0.0 && cfg.tolerance < 1e-3)) {
                invalid("numerics.tolerance", "must lie in (0, 1e-3)");
            }
        }
    }

    const json& sys = require(doc, "", "system");
    check_keys(sys, "system", {"dim", "hamiltonian"});
    cfg.dim = whole(require(sys, "system", "dim"), "system.dim");
    if (cfg.dim == 0 || cfg.dim > 64) {
        invalid("system.dim", "must lie in [1, 64]");
    }
    cfg.hamiltonian = hamiltonian_from_json(require(sys, "system", "hamiltonian"),
                                            "system.hamiltonian", checked, cfg.tolerance);
    if (cfg.hamiltonian.dim() != cfg.dim) {
        invalid("system.hamiltonian", "dimension " + std::to_string(cfg.hamiltonian.dim()) +
                                          " does not match system.dim " + std::to_string(cfg.dim));
    }

    const json& bath = require(doc, "", "bath");
    check_keys(bath, "bath", {"temperature", "entropy"});
    cfg.temperature = number(require(bath, "bath", "temperature"), "bath.temperature");
    if (!(cfg.temperature > 0.0)) {
        invalid("bath.temperature", "must be > 0, got " + std::to_string(cfg.temperature));
    }
    if (const json* v = find(bath, "entropy")) {
        cfg.bath_entropy = number(*v, "bath.entropy");
    }

    if (const json* c = find(doc, "constants")) {
        check_keys(*c, "constants", {"k"});
        if (const json* v = find(*c, "k")) {
            cfg.k = number(*v, "constants.k");
            if (!(cfg.k > 0.0)) {
                invalid("constants.k", "must be > 0");
            }
        }
    }
    cfg.options.k = cfg.k;

    if (const json* run = find(doc, "run")) {
        check_keys(*run, "run", {"mode"});
        cfg.mode = mode_from_string(text(require(*run, "run", "mode"), "run.mode"), "run.mode");
    }

    cfg.model = model_from_json(require(doc, "", "measurement"), "measurement", cfg);

    const json* tr = find(doc, "transform");
    if (tr != nullptr) {
        check_keys(*tr, "transform", {"h2"});
        cfg.h2 = hamiltonian_from_json(require(*tr, "transform", "h2"), "transform.h2", checked,
                                       cfg.tolerance);
        if (cfg.h2->dim() != cfg.dim) {
            invalid("transform.h2", "dimension does not match system.dim");
        }
    }
    if (cfg.mode == RunMode::Transform && !cfg.h2) {
        invalid("transform.h2", "required for run.mode = transform");
    }
    if (cfg.mode != RunMode::Transform && tr != nullptr) {
        invalid("transform", "only used with run.mode = transform");
    }

    const json* cont = find(doc, "continuous");
    if (cont != nullptr) {
        check_keys(*cont, "continuous", {"steps"});
        const std::uint64_t steps = whole(require(*cont, "continuous", "steps"), "continuous.steps");
        if (steps == 0 || steps > 1000000) {
            invalid("continuous.steps", "must lie in [1, 1000000]");
        }
        cfg.steps = static_cast<std::size_t>(steps);
    }
    if (cfg.mode == RunMode::Continuous) {
        if (cfg.measurement_kind != "weak") {
            invalid("measurement.kind", "run.mode = continuous needs a weak measurement");
        }
        const double eps = cfg.model->epsilon();
        if (!(eps >= 1e-6 && eps <= 0.5)) {
            invalid("measurement.epsilon", "continuous feedback needs epsilon in [1e-6, 0.5]");
        }
    } else if (cont != nullptr) {
        invalid("continuous", "only used with run.mode = continuous");
    }
    if (cfg.mode == RunMode::Controller && !cfg.model->is_efficient()) {
        invalid("measurement.kind", "run.mode = controller needs one operator per outcome");
    }

    if (checked) {
        const ValidationReport report = validate(*cfg.model, cfg.tolerance);
        if (!report.ok) {
            const OperatorViolation& v = report.violations.front();
            std::string where = "measurement";
            if (v.what != "completeness condition violated") {
                where = cfg.measurement_kind == "inefficient"
                            ? indexed(indexed("measurement.groups", v.outcome), v.index)
                            : indexed("measurement.operators", v.outcome);
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3g", v.value);
            invalid(where, v.what + " (" + buf + ")");
        }
    }
    return cfg;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (const auto pos = what.find("parse error"); pos != std::string::npos) {
            what = what.substr(pos);
        }
        raise(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + what);
    }
}

}  // namespace

std::string_view to_string(RunMode mode) noexcept {
    switch (mode) {
    case RunMode::Cycle: return "cycle";
    case RunMode::Transform: return "transform";
    case RunMode::Continuous: return "continuous";
    case RunMode::Controller: return "controller";
    }
    return "unknown";
}

std::uint64_t default_seed() {
    const char* env = std::getenv(kSeedEnvVar);
    if (env == nullptr || *env == '\0') {
        return kDefaultSeed;
    }
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') {
        raise(ErrorCode::ValidationError,
              std::string(kSeedEnvVar) + ": expected an unsigned integer, got '" + env + "'");
    }
    return static_cast<std::uint64_t>(v);
}

ComplexMatrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        invalid(path, "expected a non-empty list of rows");
    }
    const std::size_t dim = j.size();
    ComplexMatrix m(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        const std::string rp = indexed(path, r);
        if (!j[r].is_array() || j[r].size() != dim) {
            invalid(rp, "expected a row of " + std::to_string(dim) + " entries");
        }
        for (std::size_t c = 0; c < dim; ++c) {
            m(r, c) = entry_from_json(j[r][c], indexed(rp, c));
        }
    }
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.dim(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ScenarioConfig config_from_json(const json& doc) { return build(doc, true); }

ScenarioConfig parse_config(std::string_view text) { return build(parse_json(text), true); }

ScenarioConfig parse_config_unchecked(std::string_view text) {
    return build(parse_json(text), false);
}

}  // namespace qdemon

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

#include "qdemon/ledger.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qdemon/error.hpp"
#include "qdemon/io.hpp"

namespace qdemon {

using nlohmann::json;

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) {
        raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, std::string_view column) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') {
        raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                         std::string(column) + ": not a number: '" + s + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& s, std::size_t line_no, std::string_view column) {
    const double v = parse_double(s, line_no, column);
    if (v < 0.0 || std::floor(v) != v) {
        raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                         std::string(column) + ": not a count: '" + s + "'");
    }
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& s, std::size_t line_no, std::string_view column) {
    if (s == "true") return true;
    if (s == "false") return false;
    raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ", column " +
                                     std::string(column) + ": expected true/false, got '" + s +
                                     "'");
}

json row_to_json(const LedgerRow& r) {
    return json{{"scenario_id", r.scenario_id},
                {"mode", r.mode},
                {"dim", r.dim},
                {"T", r.T},
                {"E", r.E},
                {"S", r.S},
                {"F", r.F},
                {"n_outcomes", r.n_outcomes},
                {"delta_E_meas", r.delta_E_meas},
                {"delta_S_meas", r.delta_S_meas},
                {"shannon_outcomes", r.shannon_outcomes},
                {"work_total", r.work_total},
                {"work_fb", r.work_fb},
                {"delta_F", r.delta_F},
                {"delta_S_tot", r.delta_S_tot},
                {"closure_distance", r.closure_distance},
                {"efficiency_flag", r.efficiency_flag},
                {"clamp_flag", r.clamp_flag}};
}

}  // namespace

LedgerFormat parse_format(std::string_view name) {
    if (name == "csv") return LedgerFormat::Csv;
    if (name == "json") return LedgerFormat::Json;
    raise(ErrorCode::ValidationError, "format must be csv or json, got '" + std::string(name) + "'");
}

std::string to_csv(const std::vector<LedgerRow>& rows) {
    std::string out;
    for (std::size_t i = 0; i < kLedgerColumns.size(); ++i) {
        out += (i ? "," : "");
        out += kLedgerColumns[i];
    }
    out += '\n';
    for (const auto& r : rows) {
        out += csv_field(r.scenario_id) + ',' + csv_field(r.mode) + ',' + std::to_string(r.dim) +
               ',' + fmt(r.T) + ',' + fmt(r.E) + ',' + fmt(r.S) + ',' + fmt(r.F) + ',' +
               std::to_string(r.n_outcomes) + ',' + fmt(r.delta_E_meas) + ',' +
               fmt(r.delta_S_meas) + ',' + fmt(r.shannon_outcomes) + ',' + fmt(r.work_total) +
               ',' + fmt(r.work_fb) + ',' + fmt(r.delta_F) + ',' + fmt(r.delta_S_tot) + ',' +
               fmt(r.closure_distance) + ',' + (r.efficiency_flag ? "true" : "false") + ',' +
               (r.clamp_flag ? "true" : "false") + '\n';
    }
    return out;
}

std::string to_json(const std::vector<LedgerRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back(row_to_json(r));
    }
    return arr.dump(2) + "\n";
}

std::size_t emit(const std::vector<LedgerRow>& rows, LedgerFormat format, std::ostream& out) {
    const std::string text = format == LedgerFormat::Csv ? to_csv(rows) : to_json(rows);
    out << text;
    out.flush();
    if (!out) {
        raise(ErrorCode::IoError, "failed to write ledger");
    }
    return text.size();
}

std::size_t emit(const std::vector<LedgerRow>& rows, LedgerFormat format, const std::string& path) {
    return write_text_file(path, format == LedgerFormat::Csv ? to_csv(rows) : to_json(rows));
}

std::vector<LedgerRow> rows_from_csv(std::string_view text) {
    std::vector<LedgerRow> rows;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        const auto f = split_csv_line(line, line_no);
        if (f.size() != kLedgerColumns.size()) {
            raise(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(kLedgerColumns.size()) +
                                             " fields, found " + std::to_string(f.size()));
        }
        if (!header_seen) {
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f[i] != kLedgerColumns[i]) {
                    raise(ErrorCode::ParseError, "line 1: column " + std::to_string(i + 1) +
                                                     " should be '" +
                                                     std::string(kLedgerColumns[i]) + "'");
                }
            }
            header_seen = true;
            continue;
        }
        auto d = [&](std::size_t i) { return parse_double(f[i], line_no, kLedgerColumns[i]); };
        LedgerRow r;
        r.scenario_id = f[0];
        r.mode = f[1];
        r.dim = parse_count(f[2], line_no, kLedgerColumns[2]);
        r.T = d(3);
        r.E = d(4);
        r.S = d(5);
        r.F = d(6);
        r.n_outcomes = parse_count(f[7], line_no, kLedgerColumns[7]);
        r.delta_E_meas = d(8);
        r.delta_S_meas = d(9);
        r.shannon_outcomes = d(10);
        r.work_total = d(11);
        r.work_fb = d(12);
        r.delta_F = d(13);
        r.delta_S_tot = d(14);
        r.closure_distance = d(15);
        r.efficiency_flag = parse_bool(f[16], line_no, kLedgerColumns[16]);
        r.clamp_flag = parse_bool(f[17], line_no, kLedgerColumns[17]);
        rows.push_back(std::move(r));
    }
    if (!header_seen) {
        raise(ErrorCode::ParseError, "ledger has no header line");
    }
    return rows;
}

std::vector<LedgerRow> rows_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        raise(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_array()) {
        raise(ErrorCode::ParseError, "ledger JSON must be an array");
    }
    std::vector<LedgerRow> rows;
    try {
        for (const auto& o : doc) {
            LedgerRow r;
            r.scenario_id = o.at("scenario_id").get<std::string>();
            r.mode = o.at("mode").get<std::string>();
            r.dim = o.at("dim").get<std::size_t>();
            r.T = o.at("T").get<double>();
            r.E = o.at("E").get<double>();
            r.S = o.at("S").get<double>();
            r.F = o.at("F").get<double>();
            r.n_outcomes = o.at("n_outcomes").get<std::size_t>();
            r.delta_E_meas = o.at("delta_E_meas").get<double>();
            r.delta_S_meas = o.at("delta_S_meas").get<double>();
            r.shannon_outcomes = o.at("shannon_outcomes").get<double>();
            r.work_total = o.at("work_total").get<double>();
            r.work_fb = o.at("work_fb").get<double>();
            r.delta_F = o.at("delta_F").get<double>();
            r.delta_S_tot = o.at("delta_S_tot").get<double>();
            r.closure_distance = o.at("closure_distance").get<double>();
            r.efficiency_flag = o.at("efficiency_flag").get<bool>();
            r.clamp_flag = o.at("clamp_flag").get<bool>();
            rows.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        raise(ErrorCode::ParseError, e.what());
    }
    return rows;
}

std::string summarize(const std::vector<LedgerRow>& rows) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s %-10s %13s %13s %13s %13s  %-8s %s\n", "scenario", "mode",
                  "work_fb", "dS_meas", "S({p})", "dS_tot", "verdict", "efficient");
    out << buf;
    std::size_t failed = 0;
    for (const auto& r : rows) {
        const bool pass = r.delta_S_tot >= -1e-9;
        failed += pass ? 0 : 1;
        std::snprintf(buf, sizeof buf, "%-24s %-10s %13.6g %13.6g %13.6g %13.6g  %-8s %s%s\n",
                      r.scenario_id.c_str(), r.mode.c_str(), r.work_fb, r.delta_S_meas,
                      r.shannon_outcomes, r.delta_S_tot, pass ? "PASS" : "FAIL",
                      r.efficiency_flag ? "yes" : "no", r.clamp_flag ? " (clamped)" : "");
        out << buf;
    }
    out << rows.size() << " row(s), " << (rows.size() - failed) << " satisfy the second law";
    if (failed) {
        out << ", " << failed << " violate it";
    }
    out << "\n";
    return out.str();
}

}  // namespace qdemon

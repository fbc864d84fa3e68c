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

// qdemon: run feedback-cycle scenarios and inspect their ledgers.
//
//   qdemon run <config> [--output PATH] [--format csv|json] [--detail]
//   qdemon sweep <config> --param PATH --values v1,v2,... [--output PATH] [--format csv|json]
//   qdemon validate <config>
//   qdemon report <ledger.csv>
//
// Exit status: 0 ok, 1 validation failure, 2 numerical failure, 3 I/O.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdemon/config.hpp"
#include "qdemon/error.hpp"
#include "qdemon/io.hpp"
#include "qdemon/ledger.hpp"
#include "qdemon/scenario.hpp"

namespace {

void write_rows(const std::vector<qdemon::LedgerRow>& rows, const std::string& format,
                const std::string& output) {
    const qdemon::LedgerFormat f = qdemon::parse_format(format);
    if (output.empty() || output == "-") {
        qdemon::emit(rows, f, std::cout);
    } else {
        qdemon::emit(rows, f, output);
    }
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= list.size() && !list.empty()) {
        std::size_t end = list.find(',', start);
        if (end == std::string::npos) {
            end = list.size();
        }
        const std::string item = list.substr(start, end - start);
        char* stop = nullptr;
        const double v = std::strtod(item.c_str(), &stop);
        if (item.empty() || *stop != '\0') {
            qdemon::raise(qdemon::ErrorCode::ValidationError,
                          "--values: '" + item + "' is not a number");
        }
        values.push_back(v);
        start = end + 1;
    }
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum feedback-control work extraction: scenario runner"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output;
    std::string format = "csv";
    bool detail = false;
    auto* run = app.add_subcommand("run", "Run one scenario and emit its ledger row");
    run->add_option("config", config_path, "Scenario config (JSON)")->required();
    run->add_option("--output", output, "Write the ledger here instead of stdout");
    run->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    run->add_flag("--detail", detail,
                  "Also emit per-branch detail JSON (stdout, or <output>.detail.json)");

    std::string param;
    std::string values;
    auto* sw = app.add_subcommand("sweep", "Run a scenario over values of one numeric field");
    sw->add_option("config", config_path, "Scenario config (JSON)")->required();
    sw->add_option("--param", param, "Dotted key path, e.g. measurement.epsilon")->required();
    sw->add_option("--values", values, "Comma-separated values (may be empty)")
        ->required()
        ->expected(0, 1);
    sw->add_option("--output", output, "Write the ledger here instead of stdout");
    sw->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* val = app.add_subcommand("validate", "Check a config and print validator residuals");
    val->add_option("config", config_path, "Scenario config (JSON)")->required();

    std::string ledger_path;
    auto* rep = app.add_subcommand("report", "Summarize a CSV ledger with second-law verdicts");
    rep->add_option("ledger", ledger_path, "Ledger CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) {
            const auto cfg = qdemon::parse_config(qdemon::read_text_file(config_path));
            const auto result = qdemon::run_scenario(cfg);
            write_rows({result.row}, format, output);
            if (detail) {
                const std::string text = result.detail.dump(2) + "\n";
                if (output.empty() || output == "-") {
                    std::cout << text;
                } else {
                    qdemon::write_text_file(output + ".detail.json", text);
                }
            }
        } else if (*sw) {
            const auto cfg = qdemon::parse_config(qdemon::read_text_file(config_path));
            write_rows(qdemon::sweep(cfg, param, parse_values(values)), format, output);
        } else if (*val) {
            std::string text;
            try {
                text = qdemon::read_text_file(config_path);
            } catch (const qdemon::Error& e) {
                std::cerr << "error: " << e.what() << "\n";
                return qdemon::exit_code_for(e.code());
            }
            const auto summary = qdemon::validate_config_text(text);
            for (const auto& line : summary.lines) {
                std::cout << line << "\n";
            }
            std::cout << (summary.ok ? "valid" : "invalid") << "\n";
            return summary.ok ? 0 : 1;
        } else if (*rep) {
            const auto rows = qdemon::rows_from_csv(qdemon::read_text_file(ledger_path));
            std::cout << qdemon::summarize(rows);
        }
    } catch (const qdemon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return qdemon::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

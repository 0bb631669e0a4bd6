// SPDX-License-Identifier: Apache-2.0
//
// ucia: user-cooperation interference alignment for two-cell MIMO broadcast channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ucia/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Two-cell MIMO interference alignment through user cooperation"};
    app.require_subcommand(1);

    std::string spec_path;
    int workers = 0;
    auto* simulate = app.add_subcommand("simulate", "Run the Monte Carlo sweeps of an experiment file");
    simulate->add_option("spec", spec_path, "Experiment file")->required();
    simulate->add_option("--workers", workers, "Worker threads (overrides the file)")->check(CLI::PositiveNumber);

    std::string csv_path, out_path;
    ucia::SnrWindow window;
    auto* dof = app.add_subcommand("dof", "Estimate DoF (high-SNR slope) per scheme and scenario");
    dof->add_option("csv", csv_path, "CSV written by simulate")->required();
    dof->add_option("--low", window.low_db, "Window start (dB)");
    dof->add_option("--high", window.high_db, "Window end (dB)");
    dof->add_option("--out", out_path, "Output CSV (default <csv>_dof.csv)");

    int k_min = 2, k_max = 8;
    auto* table = app.add_subcommand("feedback-table", "DoF and feedback overhead at (K+1, K, K)");
    table->add_option("--k-min", k_min, "Smallest K");
    table->add_option("--k-max", k_max, "Largest K");
    table->add_option("--out", out_path, "Also write the table as CSV");

    ucia::VerifyOptions vopt;
    std::string trace_path;
    auto* verify = app.add_subcommand("verify", "Check the scheme's invariants on fresh random instances");
    verify->add_option("--M", vopt.M, "Transmit antennas per BS")->required();
    verify->add_option("--N", vopt.N, "Receive antennas per user")->required();
    verify->add_option("--K", vopt.K, "Users per cell")->required();
    verify->add_option("--trials", vopt.trials, "Random instances");
    verify->add_option("--seed", vopt.seed, "RNG seed");
    verify->add_flag("--inject-fault", vopt.inject_fault, "Perturb one combiner to exercise failure reporting");
    verify->add_option("--trace", trace_path, "Write the message trace of trial 0");

    auto* plot = app.add_subcommand("plot", "Render a simulate CSV as an SVG chart");
    plot->add_option("csv", csv_path, "CSV written by simulate")->required();
    plot->add_option("--out", out_path, "Output SVG (default <csv>.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ucia::kExitConfig;
    }

    const auto maybe = [](const std::string& s) -> std::optional<std::filesystem::path> {
        if (s.empty())
            return std::nullopt;
        return std::filesystem::path(s);
    };

    try {
        if (*simulate)
            return ucia::cmd_simulate(spec_path, workers > 0 ? std::optional<int>(workers) : std::nullopt, std::cout,
                                      std::cerr);
        if (*dof)
            return ucia::cmd_dof(csv_path, window, maybe(out_path), std::cout, std::cerr);
        if (*table)
            return ucia::cmd_feedback_table(k_min, k_max, maybe(out_path), std::cout, std::cerr);
        if (*verify) {
            const int code = ucia::cmd_verify(vopt, std::cout, std::cerr);
            if (code != ucia::kExitConfig && !trace_path.empty()) {
                ucia::ScenarioConfig cfg;
                cfg.M = vopt.M;
                cfg.N = vopt.N;
                cfg.K = vopt.K;
                cfg.seed = vopt.seed;
                const auto ex = ucia::simulate_exchange(ucia::generate_channels(cfg, 0), cfg, vopt.tol);
                std::ofstream os(trace_path);
                ucia::write_trace(os, ex.log);
            }
            return code;
        }
        if (*plot)
            return ucia::cmd_plot(csv_path, maybe(out_path), std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ucia::kExitInvariant;
    }
    return ucia::kExitConfig;
}

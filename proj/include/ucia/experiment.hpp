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

#ifndef UCIA_EXPERIMENT_HPP
#define UCIA_EXPERIMENT_HPP

// Experiment files and result tables.
//
// An experiment file is line oriented. `#` starts a comment, settings are `key = value`, and
// a line holding only `scenario` (optionally followed by a name) opens a scenario block.
// Scenario keys that appear before the first block are defaults for every block.
//
//   output_dir = results/scheme_comparison
//   schemes    = proposed, czf, subspace_proxy, percell_zf
//   emit_plot  = true
//   workers    = 1
//   snr_db     = 0:5:60        # start:step:stop, or a comma separated list
//   trials     = 500
//   seed       = 20110101
//
//   scenario comparison
//   M = 5
//   N = 4
//   K = 4

#include "ucia/metrics.hpp"
#include "ucia/scenario.hpp"
#include "ucia/schemes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace ucia {

struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> diags)
        : std::runtime_error(diags.empty() ? "configuration error" : diags.front()), diagnostics(std::move(diags)) {}
    std::vector<std::string> diagnostics;
};

struct ScenarioSpec {
    std::string name;
    ScenarioConfig cfg;
    int line = 0;
};

struct ExperimentSpec {
    std::vector<ScenarioSpec> scenarios;
    std::vector<Scheme> schemes;
    std::filesystem::path output_dir = ".";
    bool emit_plot = false;
    int workers = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    T value{};
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc{} || ptr != end || s.empty())
        return std::nullopt;
    return value;
}

inline std::optional<std::vector<double>> parse_snr_grid(std::string_view s) {
    std::vector<double> grid;
    if (s.find(':') != std::string_view::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            return std::nullopt;
        const auto lo = parse_number<double>(parts[0]);
        const auto step = parse_number<double>(parts[1]);
        const auto hi = parse_number<double>(parts[2]);
        if (!lo || !step || !hi || !(*step > 0.0) || *hi < *lo)
            return std::nullopt;
        const auto count = static_cast<int>(std::floor((*hi - *lo) / *step + 1e-9)) + 1;
        for (int n = 0; n < count; ++n)
            grid.push_back(*lo + n * *step);
        return grid;
    }
    for (auto part : split(s, ',')) {
        const auto v = parse_number<double>(part);
        if (!v)
            return std::nullopt;
        grid.push_back(*v);
    }
    return grid;
}

inline std::optional<bool> parse_bool(std::string_view s) {
    if (s == "true" || s == "yes" || s == "1")
        return true;
    if (s == "false" || s == "no" || s == "0")
        return false;
    return std::nullopt;
}

} // namespace detail

/// Parses an experiment file; every problem is reported with its line number.
inline ExperimentSpec parse_experiment(std::istream& in) {
    ExperimentSpec spec;
    std::vector<std::string> diags;
    struct Partial {
        ScenarioSpec s;
        bool has_m = false, has_n = false, has_k = false;
    };
    Partial defaults;
    defaults.s.cfg.trials = 500;
    defaults.s.cfg.snr_grid_db.clear();
    for (int d = 0; d <= 60; d += 5)
        defaults.s.cfg.snr_grid_db.push_back(d);
    std::vector<Partial> blocks;
    bool schemes_seen = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto at = [&](const std::string& msg) { diags.push_back("line " + std::to_string(line_no) + ": " + msg); };

        if (line == "scenario" || line.starts_with("scenario ") || line.starts_with("scenario\t")) {
            Partial p = defaults;
            p.s.line = line_no;
            p.s.name = std::string(detail::trim(line.substr(8)));
            blocks.push_back(std::move(p));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            at("expected 'key = value' or 'scenario'");
            continue;
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        const std::string_view value = detail::trim(line.substr(eq + 1));
        Partial& target = blocks.empty() ? defaults : blocks.back();
        ScenarioConfig& cfg = target.s.cfg;

        if (key == "output_dir" || key == "schemes" || key == "emit_plot" || key == "workers") {
            if (!blocks.empty()) {
                at("'" + key + "' must appear before the first scenario block");
                continue;
            }
            if (key == "output_dir") {
                if (value.empty())
                    at("output_dir is empty");
                spec.output_dir = std::string(value);
            } else if (key == "schemes") {
                schemes_seen = true;
                spec.schemes.clear();
                for (auto name : detail::split(value, ',')) {
                    if (name.empty())
                        continue;
                    if (const auto s = parse_scheme(name))
                        spec.schemes.push_back(*s);
                    else
                        at("unknown scheme '" + std::string(name) + "'");
                }
            } else if (key == "emit_plot") {
                if (const auto b = detail::parse_bool(value))
                    spec.emit_plot = *b;
                else
                    at("emit_plot expects true or false");
            } else {
                const auto w = detail::parse_number<int>(value);
                if (!w || *w < 1)
                    at("workers expects a positive integer");
                else
                    spec.workers = *w;
            }
        } else if (key == "M" || key == "N" || key == "K" || key == "trials") {
            const auto v = detail::parse_number<int>(value);
            if (!v || *v < 1) {
                at(key + " expects a positive integer");
                continue;
            }
            if (key == "M") {
                cfg.M = *v;
                target.has_m = true;
            } else if (key == "N") {
                cfg.N = *v;
                target.has_n = true;
            } else if (key == "K") {
                cfg.K = *v;
                target.has_k = true;
            } else {
                cfg.trials = *v;
            }
        } else if (key == "seed") {
            const auto v = detail::parse_number<std::uint64_t>(value);
            if (!v)
                at("seed expects an unsigned integer");
            else
                cfg.seed = *v;
        } else if (key == "snr_db") {
            const auto grid = detail::parse_snr_grid(value);
            if (!grid || grid->empty())
                at("snr_db expects start:step:stop or a comma separated list");
            else
                cfg.snr_grid_db = *grid;
        } else if (key == "name") {
            if (blocks.empty())
                at("'name' belongs inside a scenario block");
            else
                target.s.name = std::string(value);
        } else {
            at("unknown key '" + key + "'");
        }
    }

    if (!schemes_seen || spec.schemes.empty())
        diags.push_back("no schemes listed");
    if (blocks.empty())
        diags.push_back("no scenario blocks");
    std::set<std::string> names;
    for (Partial& p : blocks) {
        const auto at = [&](const std::string& msg) {
            diags.push_back("scenario at line " + std::to_string(p.s.line) + ": " + msg);
        };
        if (!p.has_m)
            at("M is missing");
        if (!p.has_n)
            at("N is missing");
        if (!p.has_k)
            at("K is missing");
        if (p.s.cfg.snr_grid_db.empty())
            at("empty SNR grid");
        try {
            p.s.cfg.validate();
        } catch (const InvalidInput& e) {
            at(e.what());
        }
        if (p.s.name.empty())
            p.s.name = "M" + std::to_string(p.s.cfg.M) + "_N" + std::to_string(p.s.cfg.N) + "_K" +
                       std::to_string(p.s.cfg.K);
        if (!names.insert(p.s.name).second)
            at("duplicate scenario name '" + p.s.name + "'");
        spec.scenarios.push_back(p.s);
    }
    if (!diags.empty())
        throw ConfigError(std::move(diags));
    return spec;
}

// Shortest decimal form that round-trips; identical input gives identical text.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: buffer too small");
    return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    if (ec != std::errc{})
        throw std::runtime_error("format_fixed: buffer too small");
    return std::string(buf, ptr);
}

struct CsvRow {
    std::string scheme;
    int M = 0, N = 0, K = 0;
    double snr_db = 0.0;
    double sum_rate_mean = 0.0;
    double sum_rate_stderr = 0.0;
    int trials = 0;
    int redraws = 0;
};

inline constexpr std::string_view kSimulationHeader =
    "scheme,M,N,K,snr_db,sum_rate_mean,sum_rate_stderr,trials,redraws";

inline void sort_rows(std::vector<CsvRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) {
        return std::tie(a.scheme, a.snr_db) < std::tie(b.scheme, b.snr_db);
    });
}

inline void write_simulation_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    os << kSimulationHeader << '\n';
    for (const CsvRow& r : rows)
        os << r.scheme << ',' << r.M << ',' << r.N << ',' << r.K << ',' << format_double(r.snr_db) << ','
           << format_double(r.sum_rate_mean) << ',' << format_double(r.sum_rate_stderr) << ',' << r.trials << ','
           << r.redraws << '\n';
}

inline std::vector<CsvRow> read_simulation_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::vector<std::string> diags;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty())
            continue;
        if (line_no == 1) {
            if (line != kSimulationHeader)
                diags.push_back("line 1: unexpected header");
            continue;
        }
        const auto f = detail::split(line, ',');
        const auto M = f.size() == 9 ? detail::parse_number<int>(f[1]) : std::nullopt;
        const auto N = f.size() == 9 ? detail::parse_number<int>(f[2]) : std::nullopt;
        const auto K = f.size() == 9 ? detail::parse_number<int>(f[3]) : std::nullopt;
        const auto snr = f.size() == 9 ? detail::parse_number<double>(f[4]) : std::nullopt;
        const auto mean = f.size() == 9 ? detail::parse_number<double>(f[5]) : std::nullopt;
        const auto se = f.size() == 9 ? detail::parse_number<double>(f[6]) : std::nullopt;
        const auto trials = f.size() == 9 ? detail::parse_number<int>(f[7]) : std::nullopt;
        const auto redraws = f.size() == 9 ? detail::parse_number<int>(f[8]) : std::nullopt;
        if (!M || !N || !K || !snr || !mean || !se || !trials || !redraws) {
            diags.push_back("line " + std::to_string(line_no) + ": malformed row");
            continue;
        }
        rows.push_back({std::string(f[0]), *M, *N, *K, *snr, *mean, *se, *trials, *redraws});
    }
    if (!diags.empty())
        throw ConfigError(std::move(diags));
    return rows;
}

/// Monte Carlo sweep of every listed scheme over one scenario.
///
/// Infeasible scheme/scenario pairs are reported to `warn` and skipped.
inline std::vector<CsvRow> simulate_scenario(const ScenarioSpec& sc, const std::vector<Scheme>& schemes, int workers,
                                             std::ostream& warn) {
    std::vector<CsvRow> rows;
    for (Scheme s : schemes) {
        const ScenarioConfig& cfg = sc.cfg;
        if (const auto f = scheme_feasibility(s, cfg.M, cfg.N, cfg.K); !f) {
            warn << "warning: skipping " << to_string(s) << " on scenario '" << sc.name << "' (" << f.reason << ")\n";
            continue;
        }
        for (const ErgodicPoint& p : sweep_sum_rate(cfg, s, cfg.snr_grid_db, workers))
            rows.push_back({std::string(to_string(s)), cfg.M, cfg.N, cfg.K, p.snr_db, p.mean, p.std_error, p.trials,
                            p.redraws});
    }
    sort_rows(rows);
    return rows;
}

} // namespace ucia

#endif

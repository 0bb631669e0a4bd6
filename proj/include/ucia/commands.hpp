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

#ifndef UCIA_COMMANDS_HPP
#define UCIA_COMMANDS_HPP

// Subcommand bodies of the `ucia` tool. Each returns the process exit code:
// 0 success, 1 invariant failure, 2 configuration error.

#include "ucia/align.hpp"
#include "ucia/csi_exchange.hpp"
#include "ucia/experiment.hpp"
#include "ucia/metrics.hpp"
#include "ucia/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

namespace ucia {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitConfig = 2;

namespace detail {

inline bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) {
        err << "error: cannot write " << path.string() << '\n';
        return false;
    }
    return true;
}

inline std::optional<std::vector<CsvRow>> load_rows(const std::filesystem::path& csv, std::ostream& err) {
    std::ifstream in(csv);
    if (!in) {
        err << "error: cannot open " << csv.string() << '\n';
        return std::nullopt;
    }
    try {
        return read_simulation_csv(in);
    } catch (const ConfigError& e) {
        for (const auto& d : e.diagnostics)
            err << csv.string() << ": " << d << '\n';
        return std::nullopt;
    }
}

} // namespace detail

inline std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec, std::ostream& warn) {
    std::filesystem::create_directories(spec.output_dir);
    std::vector<std::filesystem::path> written;
    for (const ScenarioSpec& sc : spec.scenarios) {
        const auto rows = simulate_scenario(sc, spec.schemes, spec.workers, warn);
        std::ostringstream csv;
        write_simulation_csv(csv, rows);
        const auto path = spec.output_dir / (sc.name + ".csv");
        if (!detail::write_file(path, csv.str(), warn))
            throw std::runtime_error("cannot write " + path.string());
        written.push_back(path);
        if (spec.emit_plot && !rows.empty()) {
            const auto svg = spec.output_dir / (sc.name + ".svg");
            detail::write_file(svg, render_svg(series_from_rows(rows), sc.name), warn);
        }
    }
    return written;
}

inline int cmd_simulate(const std::filesystem::path& spec_path, std::optional<int> workers, std::ostream& out,
                        std::ostream& err) {
    std::ifstream in(spec_path);
    if (!in) {
        err << "error: cannot open " << spec_path.string() << '\n';
        return kExitConfig;
    }
    ExperimentSpec spec;
    try {
        spec = parse_experiment(in);
    } catch (const ConfigError& e) {
        for (const auto& d : e.diagnostics)
            err << spec_path.string() << ": " << d << '\n';
        return kExitConfig;
    }
    if (workers)
        spec.workers = *workers;
    try {
        for (const auto& p : run_experiment(spec, err))
            out << p.string() << '\n';
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

struct DofRow {
    std::string scheme;
    int M = 0, N = 0, K = 0;
    SlopeEstimate estimate;
};

inline int cmd_dof(const std::filesystem::path& csv, SnrWindow window, std::optional<std::filesystem::path> out_path,
                   std::ostream& out, std::ostream& err, std::vector<DofRow>* result = nullptr) {
    const auto rows = detail::load_rows(csv, err);
    if (!rows)
        return kExitConfig;

    using Key = std::tuple<std::string, int, int, int>;
    std::vector<Key> order;
    std::map<Key, std::vector<RatePoint>> groups;
    for (const CsvRow& r : *rows) {
        const Key key{r.scheme, r.M, r.N, r.K};
        if (!groups.count(key))
            order.push_back(key);
        groups[key].push_back({r.snr_db, r.sum_rate_mean});
    }

    int code = kExitOk;
    std::ostringstream table;
    table << "scheme,M,N,K,dof,fit_quality\n";
    for (const Key& key : order) {
        const auto& [scheme, M, N, K] = key;
        try {
            const auto est = estimate_dof(groups[key], window);
            table << scheme << ',' << M << ',' << N << ',' << K << ',' << format_fixed(est.dof, 6) << ','
                  << format_fixed(est.fit_quality, 6) << '\n';
            if (result)
                result->push_back({scheme, M, N, K, est});
        } catch (const InvalidInput& e) {
            err << "error: " << scheme << " (" << M << ',' << N << ',' << K << "): " << e.what() << '\n';
            code = kExitConfig;
        }
    }
    out << table.str();
    auto target = out_path.value_or(csv.parent_path() / (csv.stem().string() + "_dof.csv"));
    if (!detail::write_file(target, table.str(), err))
        return kExitConfig;
    return code;
}

struct FeedbackTableRow {
    int K = 0;
    Scheme scheme = Scheme::proposed;
    int dof = 0;
    FeedbackReport feedback;
};

// DoF and feedback of CZF, subspace IA and the proposed scheme at (K+1, K, K).
inline std::vector<FeedbackTableRow> feedback_table(int k_min, int k_max) {
    if (k_min < 2 || k_max < k_min)
        throw InvalidInput("feedback table needs 2 <= k_min <= k_max");
    std::vector<FeedbackTableRow> rows;
    for (int K = k_min; K <= k_max; ++K) {
        rows.push_back({K, Scheme::czf, czf_dof(K + 1, K, K), feedback_count(Scheme::czf, K + 1, K, K)});
        rows.push_back(
            {K, Scheme::subspace_proxy, 2 * (K - 1), feedback_count(Scheme::subspace_proxy, K + 1, K, K)});
        rows.push_back({K, Scheme::proposed, 2 * K, feedback_count(Scheme::proposed, K + 1, K, K)});
    }
    return rows;
}

inline int cmd_feedback_table(int k_min, int k_max, std::optional<std::filesystem::path> out_path, std::ostream& out,
                              std::ostream& err) {
    std::vector<FeedbackTableRow> rows;
    try {
        rows = feedback_table(k_min, k_max);
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    out << std::left << std::setw(4) << "K" << std::setw(16) << "scheme" << std::right << std::setw(6) << "DoF"
        << std::setw(10) << "serving" << std::setw(13) << "interfering" << std::setw(8) << "total" << '\n';
    std::ostringstream csv;
    csv << "K,scheme,dof,serving,interfering,total\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(4) << r.K << std::setw(16) << to_string(r.scheme) << std::right << std::setw(6)
            << r.dof << std::setw(10) << r.feedback.serving_complex_count << std::setw(13)
            << r.feedback.interfering_complex_count << std::setw(8) << r.feedback.total_complex_count << '\n';
        csv << r.K << ',' << to_string(r.scheme) << ',' << r.dof << ',' << r.feedback.serving_complex_count << ','
            << r.feedback.interfering_complex_count << ',' << r.feedback.total_complex_count << '\n';
    }
    if (out_path && !detail::write_file(*out_path, csv.str(), err))
        return kExitConfig;
    return kExitOk;
}

struct VerifyOptions {
    int M = 3, N = 2, K = 2;
    int trials = 1000;
    std::uint64_t seed = 1;
    bool inject_fault = false;  // perturbs one combiner of trial 0
    ToleranceConfig tol;
};

/// Invariant sweep over fresh random instances of the proposed scheme.
inline int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
    if (const auto f = check_feasibility(opt.M, opt.N, opt.K); !f) {
        err << "error: (" << opt.M << ',' << opt.N << ',' << opt.K << ") is infeasible: " << f.reason << '\n';
        return kExitConfig;
    }
    if (opt.trials < 1) {
        err << "error: trials must be at least 1\n";
        return kExitConfig;
    }
    ScenarioConfig cfg;
    cfg.M = opt.M;
    cfg.N = opt.N;
    cfg.K = opt.K;
    cfg.seed = opt.seed;
    cfg.trials = opt.trials;

    struct Check {
        explicit Check(const char* n) : name(n) {}
        const char* name;
        double worst = 0.0;
        std::optional<int> first_failure;
    };
    Check leakage("zero-leakage"), alignment("ici-alignment"), constraints("unit-norm-power"),
        locality("locality-audit"), equivalence("distributed-equivalence"), counting("feedback-count");
    const auto fail = [](Check& c, int trial) {
        if (!c.first_failure)
            c.first_failure = trial;
    };
    const long long expected_serving = 2LL * opt.K * opt.M;
    const long long expected_interfering = 2LL * opt.M;
    int redraws = 0;

    for (int t = 0; t < opt.trials; ++t) {
        std::optional<ChannelSet> ch;
        BeamformerSet bf;
        for (int attempt = 0; attempt <= kMaxRedraws && !ch; ++attempt) {
            ChannelSet candidate = generate_channels(cfg, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(attempt));
            try {
                bf = run_proposed_scheme(candidate, cfg, opt.tol);
                ch = std::move(candidate);
            } catch (const DegenerateRealization&) {
                ++redraws;
            } catch (const InfeasibleRealization&) {
                ++redraws;
            }
        }
        if (!ch) {
            err << "error: trial " << t << " stayed degenerate after " << kMaxRedraws << " redraws\n";
            return kExitInvariant;
        }
        if (opt.inject_fault && t == 0) {
            CVector& w = bf.combiners[0][0];
            w(w.size() - 1) += Complex(1e-3, 0.0);
            w.normalize();
        }

        const double leak = interference_leakage(*ch, bf);
        leakage.worst = std::max(leakage.worst, leak);
        if (!(leak <= opt.tol.align_tol))
            fail(leakage, t);
        const double angle = max_ici_alignment_angle(*ch, bf);
        alignment.worst = std::max(alignment.worst, angle);
        if (!(angle <= opt.tol.align_tol))
            fail(alignment, t);
        if (!bf.satisfies_constraints(cfg.power_P))
            fail(constraints, t);

        try {
            const ExchangeResult ex = simulate_exchange(*ch, cfg, opt.tol);
            const auto central = compute_rates(*ch, bf, cfg.noise_var);
            const auto distributed = compute_rates(*ch, ex.beamformers, cfg.noise_var);
            double diff = 0.0;
            for (int i = 0; i < kCells; ++i)
                for (int k = 0; k < cfg.K; ++k)
                    diff = std::max(diff, std::abs(central.per_user_rate[i][k] - distributed.per_user_rate[i][k]));
            equivalence.worst = std::max(equivalence.worst, diff);
            if (!(diff <= 1e-9))
                fail(equivalence, t);
            const auto tally = ex.tallied_feedback();
            if (tally.serving_complex_count != expected_serving || tally.interfering_complex_count != expected_interfering)
                fail(counting, t);
        } catch (const LocalityViolation&) {
            fail(locality, t);
        } catch (const DegenerateRealization&) {
            fail(equivalence, t);
        }
    }

    bool ok = true;
    for (const Check* c : {&leakage, &alignment, &constraints, &locality, &equivalence, &counting}) {
        if (c->first_failure) {
            ok = false;
            out << "FAIL " << c->name << " trial=" << *c->first_failure << " seed=" << opt.seed
                << " (replay: verify --M " << opt.M << " --N " << opt.N << " --K " << opt.K << " --seed " << opt.seed
                << " --trials " << *c->first_failure + 1 << ")\n";
        } else {
            out << "PASS " << c->name;
            if (c->worst > 0.0)
                out << " max=" << c->worst;
            out << '\n';
        }
    }
    out << "trials=" << opt.trials << " redraws=" << redraws << '\n';
    return ok ? kExitOk : kExitInvariant;
}

inline int cmd_plot(const std::filesystem::path& csv, std::optional<std::filesystem::path> out_path, std::ostream& out,
                    std::ostream& err) {
    const auto rows = detail::load_rows(csv, err);
    if (!rows)
        return kExitConfig;
    if (rows->empty()) {
        err << "error: " << csv.string() << " has no data rows\n";
        return kExitConfig;
    }
    const auto target = out_path.value_or(csv.parent_path() / (csv.stem().string() + ".svg"));
    if (!detail::write_file(target, render_svg(series_from_rows(*rows), csv.stem().string()), err))
        return kExitConfig;
    out << target.string() << '\n';
    return kExitOk;
}

} // namespace ucia

#endif

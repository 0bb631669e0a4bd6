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

#ifndef UCIA_METRICS_HPP
#define UCIA_METRICS_HPP

#include "ucia/beamformers.hpp"
#include "ucia/linalg.hpp"
#include "ucia/scenario.hpp"
#include "ucia/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ucia {

struct RateReport {
    std::array<std::vector<double>, kCells> per_user_rate;  // bits per channel use
    double sum_rate = 0.0;
    double snr_db = 0.0;
};

/// Achievable rate of every user under single-user decoding with all interference treated
/// as noise: log2(1 + S / (noise_var + I_iui + I_ici)).
///
/// Powers come from `bf.stream_power`; idle streams neither carry rate nor interfere.
inline RateReport compute_rates(const ChannelSet& ch, const BeamformerSet& bf, double noise_var) {
    if (!(noise_var > 0.0))
        throw InvalidInput("compute_rates: noise variance must be positive");
    const int K = ch.K();
    if (bf.users() != K)
        throw InvalidInput("compute_rates: beamformer set does not match the channel set");
    for (int i = 0; i < kCells; ++i)
        for (int k = 0; k < K; ++k) {
            if (bf.combiners[i][k].size() != ch.N() || bf.precoders[i][k].size() != ch.M())
                throw InvalidInput("compute_rates: beamformer dimension mismatch");
            if (std::abs(bf.combiners[i][k].norm() - 1.0) > 1e-8)
                throw InvalidInput("compute_rates: combiner is not unit norm");
        }

    RateReport report;
    report.snr_db = 0.0;
    for (int i = 0; i < kCells; ++i) {
        report.per_user_rate[i].assign(K, 0.0);
        for (int k = 0; k < K; ++k) {
            if (!bf.active(i, k))
                continue;
            const CVector& w = bf.combiners[i][k];
            double signal = 0.0;
            double interference = 0.0;
            for (int j = 0; j < kCells; ++j) {
                // Effective row seen from base station j.
                const Eigen::RowVectorXcd row = w.adjoint() * ch.at(j, i, k);
                for (int o = 0; o < K; ++o) {
                    if (!bf.active(j, o))
                        continue;
                    const double gain = std::norm((row * bf.precoders[j][o]).value());
                    const double p = bf.stream_power[j][o] * gain;
                    if (j == i && o == k)
                        signal = p;
                    else
                        interference += p;
                }
            }
            report.per_user_rate[i][k] = std::log2(1.0 + signal / (noise_var + interference));
            report.sum_rate += report.per_user_rate[i][k];
        }
    }
    return report;
}

enum class LeakageScope { all, intra_cell, inter_cell };

/// Largest |w^H H v| over every (receiver, foreign stream) pair among active streams.
inline double interference_leakage(const ChannelSet& ch, const BeamformerSet& bf,
                                   LeakageScope scope = LeakageScope::all) {
    double worst = 0.0;
    const int K = ch.K();
    for (int i = 0; i < kCells; ++i)
        for (int k = 0; k < K; ++k) {
            if (!bf.active(i, k))
                continue;
            for (int j = 0; j < kCells; ++j) {
                if ((scope == LeakageScope::intra_cell && j != i) || (scope == LeakageScope::inter_cell && j == i))
                    continue;
                const Eigen::RowVectorXcd row = bf.combiners[i][k].adjoint() * ch.at(j, i, k);
                for (int o = 0; o < K; ++o) {
                    if (!bf.active(j, o) || (j == i && o == k))
                        continue;
                    worst = std::max(worst, std::abs((row * bf.precoders[j][o]).value()));
                }
            }
        }
    return worst;
}

// Largest pairwise angle among the effective interfering channels H_j^H w that each base
// station j sees at the active users of the other cell.
inline double max_ici_alignment_angle(const ChannelSet& ch, const BeamformerSet& bf) {
    double worst = 0.0;
    for (int j = 0; j < kCells; ++j) {
        const int victim = other_cell(j);
        std::vector<CVector> eff;
        for (int k = 0; k < ch.K(); ++k)
            if (bf.active(victim, k))
                eff.push_back(ch.at(j, victim, k).adjoint() * bf.combiners[victim][k]);
        for (std::size_t a = 0; a < eff.size(); ++a)
            for (std::size_t b = a + 1; b < eff.size(); ++b)
                worst = std::max(worst, collinearity_angle(eff[a], eff[b]));
    }
    return worst;
}

struct SnrWindow {
    double low_db = 40.0;
    double high_db = 60.0;
};

struct SlopeEstimate {
    double dof = 0.0;
    double fit_quality = 0.0;  // coefficient of determination
    SnrWindow window;
};

struct RatePoint {
    double snr_db = 0.0;
    double sum_rate = 0.0;
};

/// Least-squares slope of sum rate against log2(SNR) inside `window`.
inline SlopeEstimate estimate_dof(std::span<const RatePoint> points, SnrWindow window = {}) {
    std::vector<std::pair<double, double>> xy;
    for (const RatePoint& p : points)
        if (p.snr_db >= window.low_db - 1e-9 && p.snr_db <= window.high_db + 1e-9)
            xy.emplace_back(p.snr_db / 10.0 * std::log2(10.0), p.sum_rate);
    if (xy.size() < 2)
        throw InvalidInput("estimate_dof: fewer than 2 points inside the SNR window");

    const double n = static_cast<double>(xy.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : xy) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (!(sxx > 0.0))
        throw InvalidInput("estimate_dof: window points share one SNR value");

    SlopeEstimate est;
    est.window = window;
    est.dof = sxy / sxx;
    const double intercept = my - est.dof * mx;
    double ss_res = 0.0;
    for (const auto& [x, y] : xy) {
        const double r = y - (intercept + est.dof * x);
        ss_res += r * r;
    }
    // A flat series is fitted exactly by a zero slope.
    const double scale = std::max(1.0, std::abs(my));
    est.fit_quality = syy <= 1e-24 * scale * scale ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return est;
}

struct ErgodicPoint {
    double snr_db = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
    int trials = 0;
    int redraws = 0;
};

inline constexpr int kMaxRedraws = 64;

struct TrialOutcome {
    ChannelSet channels;
    BeamformerSet beamformers;
    int redraws = 0;
};

/// Channel realization and beamformers of one trial at unit total power, redrawing
/// degenerate realizations from the trial's own substream.
inline TrialOutcome run_trial(Scheme scheme, const ScenarioConfig& cfg, std::uint64_t trial,
                              const ToleranceConfig& tol = {}) {
    ScenarioConfig unit = cfg;
    unit.power_P = 1.0;
    unit.noise_var = 1.0;
    for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
        ChannelSet ch = generate_channels(unit, trial, static_cast<std::uint64_t>(attempt));
        try {
            BeamformerSet bf = run_scheme(scheme, ch, unit, tol);
            return {std::move(ch), std::move(bf), attempt};
        } catch (const DegenerateRealization&) {
        } catch (const InfeasibleRealization&) {
        }
    }
    throw DegenerateRealization("trial kept producing degenerate realizations");
}

// Runs fn(t) for t in [0, count) over `workers` threads; each index is visited once.
template <typename Fn>
void parallel_for_trials(int count, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int t = 0; t < count; ++t)
            fn(t);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int t = w; t < count; t += workers)
                    fn(t);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

/// Ergodic sum rate over an SNR grid.
///
/// Each trial's channels and beamformers are shared by every SNR point (common random
/// numbers); per-trial results are reduced in trial order, so the output does not depend
/// on `workers`.
inline std::vector<ErgodicPoint> sweep_sum_rate(const ScenarioConfig& cfg, Scheme scheme,
                                                std::span<const double> snr_grid_db, int workers = 1,
                                                const ToleranceConfig& tol = {}) {
    cfg.validate();
    if (const auto f = scheme_feasibility(scheme, cfg.M, cfg.N, cfg.K); !f)
        throw InvalidInput("infeasible scenario for " + std::string(to_string(scheme)) + ": " + f.reason);
    const auto points = snr_grid_db.size();
    std::vector<double> rates(static_cast<std::size_t>(cfg.trials) * points, 0.0);
    std::vector<int> redraws(static_cast<std::size_t>(cfg.trials), 0);

    parallel_for_trials(cfg.trials, workers, [&](int t) {
        TrialOutcome out = run_trial(scheme, cfg, static_cast<std::uint64_t>(t), tol);
        redraws[static_cast<std::size_t>(t)] = out.redraws;
        for (std::size_t s = 0; s < points; ++s) {
            const auto [power, noise] = snr_to_power(snr_grid_db[s]);
            BeamformerSet scaled = out.beamformers;
            scaled.scale_power(power);
            rates[static_cast<std::size_t>(t) * points + s] = compute_rates(out.channels, scaled, noise).sum_rate;
        }
    });

    int total_redraws = 0;
    for (int r : redraws)
        total_redraws += r;
    std::vector<ErgodicPoint> result;
    result.reserve(points);
    const double n = static_cast<double>(cfg.trials);
    for (std::size_t s = 0; s < points; ++s) {
        double sum = 0.0;
        for (int t = 0; t < cfg.trials; ++t)
            sum += rates[static_cast<std::size_t>(t) * points + s];
        const double mean = sum / n;
        double ss = 0.0;
        for (int t = 0; t < cfg.trials; ++t) {
            const double d = rates[static_cast<std::size_t>(t) * points + s] - mean;
            ss += d * d;
        }
        const double se = cfg.trials > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
        result.push_back({snr_grid_db[s], mean, se, cfg.trials, total_redraws});
    }
    return result;
}

inline ErgodicPoint ergodic_sum_rate(const ScenarioConfig& cfg, Scheme scheme, double snr_db, int workers = 1,
                                     const ToleranceConfig& tol = {}) {
    const double grid[] = {snr_db};
    return sweep_sum_rate(cfg, scheme, grid, workers, tol).front();
}

} // namespace ucia

#endif

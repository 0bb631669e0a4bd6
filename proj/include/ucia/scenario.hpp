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

#ifndef UCIA_SCENARIO_HPP
#define UCIA_SCENARIO_HPP

#include "ucia/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <tuple>
#include <utility>
#include <vector>

namespace ucia {

// Cells, base stations and users are 0-based in code; traces and CSVs print them 1-based.
inline constexpr int kCells = 2;

inline constexpr int other_cell(int i) { return 1 - i; }

struct ScenarioConfig {
    int M = 3;                 // transmit antennas per BS
    int N = 2;                 // receive antennas per user
    int K = 2;                 // users per cell
    double power_P = 1.0;      // total transmit power per BS (linear)
    double noise_var = 1.0;    // per receive-antenna noise variance
    std::vector<double> snr_grid_db{0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 60.0};
    int trials = 100;
    std::uint64_t seed = 1;

    void validate() const {
        if (M < 1 || N < 1 || K < 1)
            throw InvalidInput("M, N and K must all be at least 1");
        if (!(power_P > 0.0))
            throw InvalidInput("power_P must be positive");
        if (!(noise_var > 0.0))
            throw InvalidInput("noise_var must be positive");
        if (trials < 1)
            throw InvalidInput("trials must be at least 1");
        for (std::size_t s = 1; s < snr_grid_db.size(); ++s)
            if (!(snr_grid_db[s] > snr_grid_db[s - 1]))
                throw InvalidInput("snr grid must be strictly increasing");
    }
};

/// The 4K channel matrices of one block-fading realization.
///
/// `at(j, i, k)` is the N x M channel from base station j to user k of cell i.
class ChannelSet {
public:
    ChannelSet(int M, int N, int K)
        : M_(M), N_(N), K_(K), h_(static_cast<std::size_t>(kCells * kCells * K), CMatrix::Zero(N, M)) {}

    int M() const { return M_; }
    int N() const { return N_; }
    int K() const { return K_; }

    CMatrix& at(int bs, int cell, int user) { return h_[index(bs, cell, user)]; }
    const CMatrix& at(int bs, int cell, int user) const { return h_[index(bs, cell, user)]; }

    bool operator==(const ChannelSet& o) const {
        if (M_ != o.M_ || N_ != o.N_ || K_ != o.K_)
            return false;
        for (std::size_t n = 0; n < h_.size(); ++n)
            if (h_[n] != o.h_[n])
                return false;
        return true;
    }

private:
    std::size_t index(int bs, int cell, int user) const {
        if (bs < 0 || bs >= kCells || cell < 0 || cell >= kCells || user < 0 || user >= K_)
            throw InvalidInput("ChannelSet: index out of range");
        return static_cast<std::size_t>((bs * kCells + cell) * K_ + user);
    }

    int M_, N_, K_;
    std::vector<CMatrix> h_;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

// Seed of the substream for (seed, trial, attempt); attempt > 0 marks a redraw.
inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial_index, std::uint64_t attempt = 0) {
    std::uint64_t s = detail::splitmix64(seed);
    s = detail::splitmix64(s ^ trial_index);
    return detail::splitmix64(s ^ (attempt * 0xd1b54a32d192ed03ULL));
}

/// Draws every entry i.i.d. CN(0,1): real and imaginary parts each N(0, 1/2).
///
/// The result depends only on (cfg.seed, trial_index, attempt) and the antenna counts, so
/// trials can be generated in any order or on any worker.
inline ChannelSet generate_channels(const ScenarioConfig& cfg, std::uint64_t trial_index, std::uint64_t attempt = 0) {
    cfg.validate();
    ChannelSet set(cfg.M, cfg.N, cfg.K);
    std::mt19937_64 rng(trial_stream_seed(cfg.seed, trial_index, attempt));
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (int j = 0; j < kCells; ++j)
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < cfg.K; ++k) {
                CMatrix& h = set.at(j, i, k);
                for (int c = 0; c < cfg.M; ++c)
                    for (int r = 0; r < cfg.N; ++r) {
                        const double re = gauss(rng);
                        const double im = gauss(rng);
                        h(r, c) = Complex(re, im);
                    }
            }
    return set;
}

// Noise fixed at unit variance; power carries the SNR.
inline std::pair<double, double> snr_to_power(double snr_db) {
    return {std::pow(10.0, snr_db / 10.0), 1.0};
}

inline ScenarioConfig at_snr(ScenarioConfig cfg, double snr_db) {
    std::tie(cfg.power_P, cfg.noise_var) = snr_to_power(snr_db);
    return cfg;
}

} // namespace ucia

#endif

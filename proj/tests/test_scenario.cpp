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

#include "ucia/scenario.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace ucia;

namespace {

ScenarioConfig make(int M, int N, int K, std::uint64_t seed = 42) {
    ScenarioConfig c;
    c.M = M;
    c.N = N;
    c.K = K;
    c.seed = seed;
    return c;
}

std::vector<Complex> flatten(const ChannelSet& ch) {
    std::vector<Complex> out;
    for (int j = 0; j < kCells; ++j)
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < ch.K(); ++k)
                for (Eigen::Index n = 0; n < ch.at(j, i, k).size(); ++n)
                    out.push_back(ch.at(j, i, k).data()[n]);
    return out;
}

} // namespace

TEST(Scenario, Validation) {
    EXPECT_NO_THROW(make(3, 2, 2).validate());
    auto c = make(0, 2, 2);
    EXPECT_THROW(c.validate(), InvalidInput);
    c = make(3, 2, 2);
    c.noise_var = 0.0;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = make(3, 2, 2);
    c.trials = 0;
    EXPECT_THROW(c.validate(), InvalidInput);
    c = make(3, 2, 2);
    c.snr_grid_db = {0.0, 10.0, 10.0};
    EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(Scenario, DimensionsFor322) {
    const auto ch = generate_channels(make(3, 2, 2), 0);
    int count = 0;
    for (int j = 0; j < kCells; ++j)
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < 2; ++k) {
                EXPECT_EQ(ch.at(j, i, k).rows(), 2);
                EXPECT_EQ(ch.at(j, i, k).cols(), 3);
                EXPECT_TRUE(ch.at(j, i, k).allFinite());
                ++count;
            }
    EXPECT_EQ(count, 8);
    EXPECT_THROW(ch.at(0, 0, 2), InvalidInput);
}

TEST(Scenario, DeterministicPerTrial) {
    const auto cfg = make(5, 4, 4, 9);
    EXPECT_TRUE(generate_channels(cfg, 17) == generate_channels(cfg, 17));
    EXPECT_FALSE(generate_channels(cfg, 17) == generate_channels(cfg, 18));
    EXPECT_FALSE(generate_channels(cfg, 17, 0) == generate_channels(cfg, 17, 1));
    // The trial count does not influence a trial's draw.
    auto more = cfg;
    more.trials = 1000;
    EXPECT_TRUE(generate_channels(cfg, 3) == generate_channels(more, 3));
}

TEST(Scenario, EntriesAreUnitVarianceCircularGaussian) {
    // 10^5 entries: standard error of the mean magnitude ~0.003, of the variance ~0.003.
    const auto cfg = make(10, 10, 5, 123);
    std::vector<Complex> all;
    for (int t = 0; all.size() < 100000; ++t) {
        const auto v = flatten(generate_channels(cfg, static_cast<std::uint64_t>(t)));
        all.insert(all.end(), v.begin(), v.end());
    }
    Complex mean = 0.0;
    double power = 0.0, re2 = 0.0, im2 = 0.0;
    for (const Complex& z : all) {
        mean += z;
        power += std::norm(z);
        re2 += z.real() * z.real();
        im2 += z.imag() * z.imag();
    }
    const double n = static_cast<double>(all.size());
    mean /= n;
    const double var = power / n - std::norm(mean);
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_GE(var, 0.98);
    EXPECT_LE(var, 1.02);
    EXPECT_NEAR(re2 / n, 0.5, 0.01);
    EXPECT_NEAR(im2 / n, 0.5, 0.01);
}

TEST(Scenario, TrialStreamsAreUncorrelated) {
    const auto cfg = make(8, 8, 4, 77);
    for (std::uint64_t t = 0; t < 20; ++t) {
        const auto a = flatten(generate_channels(cfg, t));
        const auto b = flatten(generate_channels(cfg, t + 1));
        Complex corr = 0.0;
        for (std::size_t n = 0; n < a.size(); ++n)
            corr += a[n] * std::conj(b[n]);
        const double n = static_cast<double>(a.size());
        EXPECT_LT(std::abs(corr) / n, 3.0 / std::sqrt(n)) << "trial " << t;
    }
}

TEST(Scenario, ChannelMatricesAreFullRank) {
    const auto cfg = make(3, 2, 2, 5);
    for (std::uint64_t t = 0; t < 10000; ++t) {
        const auto ch = generate_channels(cfg, t);
        for (int j = 0; j < kCells; ++j)
            for (int i = 0; i < kCells; ++i)
                for (int k = 0; k < 2; ++k)
                    ASSERT_EQ(numeric_rank(ch.at(j, i, k)), 2) << "trial " << t;
    }
}

TEST(Scenario, SnrToPower) {
    auto [p0, n0] = snr_to_power(0.0);
    EXPECT_DOUBLE_EQ(p0, 1.0);
    EXPECT_DOUBLE_EQ(n0, 1.0);
    auto [p30, n30] = snr_to_power(30.0);
    EXPECT_NEAR(p30, 1000.0, 1e-9);
    EXPECT_DOUBLE_EQ(n30, 1.0);
    auto [p3, n3] = snr_to_power(3.0);
    EXPECT_NEAR(p3, 1.9952623149688795, 1e-12);
    EXPECT_DOUBLE_EQ(n3, 1.0);
    const auto cfg = at_snr(make(3, 2, 2), 20.0);
    EXPECT_NEAR(cfg.power_P / cfg.noise_var, 100.0, 1e-9);
}

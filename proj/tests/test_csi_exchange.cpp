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

#include "ucia/csi_exchange.hpp"
#include "ucia/metrics.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace ucia;

namespace {

ScenarioConfig symmetric(int K, std::uint64_t seed = 1) {
    ScenarioConfig c;
    c.M = K + 1;
    c.N = K;
    c.K = K;
    c.seed = seed;
    return c;
}

} // namespace

TEST(Exchange, BaseStationKnowsOnlyItsFeedback322) {
    const auto cfg = symmetric(2, 10);
    const auto ch = generate_channels(cfg, 0);
    const auto r = simulate_exchange(ch, cfg);
    for (int i = 0; i < kCells; ++i) {
        std::set<CsiKey> keys;
        for (const auto& [key, item] : r.knowledge.at(NodeId::bs(i)).items()) {
            keys.insert(key);
            EXPECT_EQ(item.provenance, Provenance::feedback_link);
        }
        const std::set<CsiKey> want{{CsiKind::effective_channel, i, i, 0},
                                    {CsiKind::effective_channel, i, i, 1},
                                    {CsiKind::aligned_direction, i, 0, 0}};
        EXPECT_EQ(keys, want);
    }
}

TEST(Exchange, UsersNeverLearnServingChannelsOfPeers) {
    const auto cfg = symmetric(3, 2);
    const auto r = simulate_exchange(generate_channels(cfg, 1), cfg);
    for (int i = 0; i < kCells; ++i)
        for (int k = 0; k < 3; ++k) {
            const auto& ks = r.knowledge.at(NodeId::ue(k, i));
            for (int peer = 0; peer < 3; ++peer) {
                EXPECT_TRUE(ks.holds({CsiKind::full_channel, other_cell(i), i, peer}));
                EXPECT_EQ(ks.holds({CsiKind::full_channel, i, i, peer}), peer == k);
            }
            // Nothing crosses cells.
            for (int peer = 0; peer < 3; ++peer)
                EXPECT_FALSE(ks.holds({CsiKind::full_channel, i, other_cell(i), peer}));
        }
}

TEST(Exchange, MatchesCentralizedScheme) {
    for (int K : {2, 4}) {
        const auto cfg = symmetric(K, 20 + K);
        for (std::uint64_t t = 0; t < 20; ++t) {
            const auto ch = generate_channels(cfg, t);
            const auto dist = simulate_exchange(ch, cfg);
            const auto central = run_proposed_scheme(ch, cfg);
            const double a = compute_rates(ch, dist.beamformers, cfg.noise_var).sum_rate;
            const double b = compute_rates(ch, central, cfg.noise_var).sum_rate;
            EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, b));
            EXPECT_LT(interference_leakage(ch, dist.beamformers), 1e-8);
            EXPECT_GT(dist.audited_reads, 0u);
        }
    }
}

TEST(Exchange, TallyMatchesTable) {
    for (int K = 2; K <= 5; ++K) {
        const auto cfg = symmetric(K, 3);
        const auto r = simulate_exchange(generate_channels(cfg, 0), cfg);
        const auto tally = r.tallied_feedback();
        const auto want = feedback_count(Scheme::proposed, cfg.M, cfg.N, K);
        EXPECT_EQ(tally.serving_complex_count, want.serving_complex_count);
        EXPECT_EQ(tally.interfering_complex_count, want.interfering_complex_count);
        EXPECT_EQ(tally.total_complex_count, want.total_complex_count);
        EXPECT_EQ(r.cooperation_scalars(), 2LL * K * (K - 1) * cfg.N * cfg.M);
    }
}

TEST(FeedbackCount, TableEntries) {
    const auto p2 = feedback_count(Scheme::proposed, 3, 2, 2);
    EXPECT_EQ(p2.serving_complex_count, 12);
    EXPECT_EQ(p2.interfering_complex_count, 6);
    EXPECT_EQ(p2.total_complex_count, 18);
    const auto c4 = feedback_count(Scheme::czf, 5, 4, 4);
    EXPECT_EQ(c4.serving_complex_count, 160);
    EXPECT_EQ(c4.interfering_complex_count, 160);
    EXPECT_EQ(c4.total_complex_count, 320);
    const auto s4 = feedback_count(Scheme::subspace_proxy, 5, 4, 4);
    EXPECT_EQ(s4.serving_complex_count, 32);
    EXPECT_EQ(s4.interfering_complex_count, 0);
    EXPECT_EQ(s4.total_complex_count, 32);
    EXPECT_THROW(feedback_count(Scheme::proposed, 4, 2, 2), InvalidInput);
    EXPECT_THROW(feedback_count(Scheme::percell_zf, 3, 2, 2), InvalidInput);
}

TEST(Exchange, DroppedMessageIsALocalityViolation) {
    const auto cfg = symmetric(2, 4);
    const auto ch = generate_channels(cfg, 0);
    const auto full = simulate_exchange(ch, cfg);
    // Every message is needed downstream, so dropping any one of them must be caught.
    for (std::size_t n = 0; n < full.log.size(); ++n) {
        ExchangeOptions opts;
        opts.drop_message = n;
        EXPECT_THROW(simulate_exchange(ch, cfg, {}, opts), LocalityViolation) << "message " << n;
    }
}

TEST(Exchange, TraceFormat) {
    const auto cfg = symmetric(2, 4);
    const auto r = simulate_exchange(generate_channels(cfg, 0), cfg);
    std::ostringstream os;
    write_trace(os, r.log);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "round,sender,receiver,payload_kind,complex_scalar_count");
    std::getline(in, line);
    EXPECT_EQ(line, "1,user_1_1,user_2_1,interfering_channel,6");
    std::size_t rows = 1;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, r.log.size());
    // 4 cooperation messages, 4 effective channels, 2 aligned directions.
    EXPECT_EQ(r.log.size(), 10u);
}

TEST(Exchange, RejectsInfeasibleConfiguration) {
    ScenarioConfig cfg;
    cfg.M = 2;
    cfg.N = 2;
    cfg.K = 2;
    EXPECT_THROW(simulate_exchange(ChannelSet(2, 2, 2), cfg), InvalidInput);
    const auto good = symmetric(2);
    EXPECT_THROW(simulate_exchange(ChannelSet(3, 2, 3), good), InvalidInput);
}

TEST(Exchange, KnowledgeSetReadsAreAudited) {
    KnowledgeSet ks(NodeId::bs(0));
    const CsiKey key{CsiKind::aligned_direction, 0, 0, 0};
    EXPECT_THROW(ks.read(key), LocalityViolation);
    ks.learn(key, CMatrix::Ones(3, 1), Provenance::feedback_link);
    EXPECT_EQ(ks.read(key), CMatrix::Ones(3, 1));
    EXPECT_EQ(ks.reads(), 2u);
    EXPECT_EQ(NodeId::ue(1, 0).label(), "user_2_1");
    EXPECT_EQ(NodeId::bs(1).label(), "bs_2");
}

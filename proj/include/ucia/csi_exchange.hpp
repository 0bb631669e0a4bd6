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

#ifndef UCIA_CSI_EXCHANGE_HPP
#define UCIA_CSI_EXCHANGE_HPP

// Message-level simulation of the cooperative alignment protocol.
//
//   round 1  users of each cell broadcast their interfering-cell channel to their peers
//            over the cooperation link
//   round 2  every user solves the alignment locally from what it holds
//   round 3  every user feeds its effective serving channel back to its own base station;
//            user 1 of each cell also feeds the aligned direction to the interfering one
//   round 4  each base station designs its precoders from the feedback it received
//
// Every node computes only from its KnowledgeSet; reading anything else raises
// LocalityViolation.

#include "ucia/align.hpp"
#include "ucia/beamformers.hpp"
#include "ucia/linalg.hpp"
#include "ucia/scenario.hpp"
#include "ucia/schemes.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace ucia {

struct LocalityViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct NodeId {
    enum class Kind { base_station, user };
    Kind kind = Kind::user;
    int cell = 0;
    int user = 0;  // unused for base stations

    static NodeId bs(int cell) { return {Kind::base_station, cell, 0}; }
    static NodeId ue(int user, int cell) { return {Kind::user, cell, user}; }

    // bs_<cell> or user_<k>_<cell>, 1-based.
    std::string label() const {
        if (kind == Kind::base_station)
            return "bs_" + std::to_string(cell + 1);
        return "user_" + std::to_string(user + 1) + "_" + std::to_string(cell + 1);
    }

    auto operator<=>(const NodeId&) const = default;
};

enum class CsiKind { full_channel, effective_channel, aligned_direction };
enum class Provenance { observed, cooperation_link, feedback_link };

/// Identifies one piece of CSI.
///
/// full_channel       H from base station `bs` to user [user, cell]
/// effective_channel  (w^[user,cell]^H H_bs^[user,cell])^H, an M-vector
/// aligned_direction  h_ici of base station `bs` (user and cell unused)
struct CsiKey {
    CsiKind kind = CsiKind::full_channel;
    int bs = 0;
    int cell = 0;
    int user = 0;

    auto operator<=>(const CsiKey&) const = default;
};

struct CsiItem {
    CMatrix value;
    Provenance provenance = Provenance::observed;
};

class KnowledgeSet {
public:
    KnowledgeSet() = default;
    explicit KnowledgeSet(NodeId owner) : owner_(owner) {}

    const NodeId& owner() const { return owner_; }

    void learn(const CsiKey& key, CMatrix value, Provenance how) { items_[key] = CsiItem{std::move(value), how}; }

    bool holds(const CsiKey& key) const { return items_.count(key) != 0; }

    const CsiItem& item(const CsiKey& key) const {
        auto it = items_.find(key);
        if (it == items_.end())
            throw LocalityViolation(owner_.label() + " read CSI it does not hold");
        return it->second;
    }

    // Audited read.
    const CMatrix& read(const CsiKey& key) const {
        ++reads_;
        return item(key).value;
    }

    std::size_t size() const { return items_.size(); }
    std::size_t reads() const { return reads_; }
    const std::map<CsiKey, CsiItem>& items() const { return items_; }

private:
    NodeId owner_;
    std::map<CsiKey, CsiItem> items_;
    mutable std::size_t reads_ = 0;
};

enum class PayloadKind { interfering_channel, effective_serving_channel, aligned_ici_direction };

inline std::string_view to_string(PayloadKind p) {
    switch (p) {
    case PayloadKind::interfering_channel:
        return "interfering_channel";
    case PayloadKind::effective_serving_channel:
        return "effective_serving_channel";
    case PayloadKind::aligned_ici_direction:
        return "aligned_ici_direction";
    }
    return "unknown";
}

struct Message {
    int round = 0;
    NodeId sender;
    NodeId receiver;
    PayloadKind kind = PayloadKind::interfering_channel;
    int complex_scalar_count = 0;
};

struct FeedbackReport {
    Scheme scheme = Scheme::proposed;
    long long serving_complex_count = 0;
    long long interfering_complex_count = 0;
    long long total_complex_count = 0;
};

/// Complex scalars fed back over the cellular uplink for the (K+1, K, K) configuration.
inline FeedbackReport feedback_count(Scheme scheme, int M, int N, int K) {
    if (K < 1 || M != K + 1 || N != K)
        throw InvalidInput("feedback_count: only the (K+1, K, K) configuration is tabulated");
    const long long k = K;
    FeedbackReport r;
    r.scheme = scheme;
    switch (scheme) {
    case Scheme::czf:
        r.serving_complex_count = 2 * (k + 1) * k * k;
        r.interfering_complex_count = 2 * (k + 1) * k * k;
        break;
    case Scheme::subspace_proxy:
        r.serving_complex_count = 2 * k * k;
        r.interfering_complex_count = 0;
        break;
    case Scheme::proposed:
        r.serving_complex_count = 2 * k * (k + 1);
        r.interfering_complex_count = 2 * (k + 1);
        break;
    case Scheme::percell_zf:
        throw InvalidInput("feedback_count: per-cell ZF is not tabulated");
    }
    r.total_complex_count = r.serving_complex_count + r.interfering_complex_count;
    return r;
}

struct ExchangeOptions {
    std::optional<std::size_t> drop_message;  // index into the log; the message is logged but never delivered
};

struct ExchangeResult {
    BeamformerSet beamformers;
    std::vector<Message> log;
    std::map<NodeId, KnowledgeSet> knowledge;
    std::size_t audited_reads = 0;

    // Scalars carried by uplink feedback, split as in the feedback table.
    FeedbackReport tallied_feedback() const {
        FeedbackReport r;
        r.scheme = Scheme::proposed;
        for (const Message& m : log) {
            if (m.kind == PayloadKind::effective_serving_channel)
                r.serving_complex_count += m.complex_scalar_count;
            else if (m.kind == PayloadKind::aligned_ici_direction)
                r.interfering_complex_count += m.complex_scalar_count;
        }
        r.total_complex_count = r.serving_complex_count + r.interfering_complex_count;
        return r;
    }

    long long cooperation_scalars() const {
        long long n = 0;
        for (const Message& m : log)
            if (m.kind == PayloadKind::interfering_channel)
                n += m.complex_scalar_count;
        return n;
    }
};

namespace detail {

class ExchangeSimulator {
public:
    ExchangeSimulator(const ChannelSet& ch, const ExchangeOptions& opts) : ch_(ch), opts_(opts) {
        for (int i = 0; i < kCells; ++i) {
            nodes_.emplace(NodeId::bs(i), KnowledgeSet(NodeId::bs(i)));
            for (int k = 0; k < ch.K(); ++k) {
                KnowledgeSet ks(NodeId::ue(k, i));
                for (int j = 0; j < kCells; ++j)
                    ks.learn({CsiKind::full_channel, j, i, k}, ch.at(j, i, k), Provenance::observed);
                nodes_.emplace(NodeId::ue(k, i), std::move(ks));
            }
        }
    }

    ExchangeResult run(const ToleranceConfig& tol) {
        const int K = ch_.K();
        const int M = ch_.M();
        const int N = ch_.N();
        ExchangeResult result;
        result.beamformers = BeamformerSet::idle(M, N, K);

        // Round 1: share interfering-cell channels inside each cell.
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < K; ++k) {
                const NodeId from = NodeId::ue(k, i);
                const CsiKey key{CsiKind::full_channel, other_cell(i), i, k};
                for (int peer = 0; peer < K; ++peer)
                    if (peer != k)
                        send(1, from, NodeId::ue(peer, i), PayloadKind::interfering_channel, key,
                             Provenance::cooperation_link, N * M);
            }

        // Round 2: each user aligns locally; all users of a cell must agree exactly.
        std::array<AlignmentSolution, kCells> aligned;  // indexed by interfering BS
        for (int i = 0; i < kCells; ++i) {
            const int interferer = other_cell(i);
            std::optional<AlignmentSolution> agreed;
            for (int k = 0; k < K; ++k) {
                const KnowledgeSet& ks = nodes_.at(NodeId::ue(k, i));
                std::vector<CMatrix> hs;
                for (int peer = 0; peer < K; ++peer)
                    hs.push_back(ks.read({CsiKind::full_channel, interferer, i, peer}));
                AlignmentSolution local = align_interfering_channels(hs, interferer, tol);
                if (agreed && !same_solution(*agreed, local))
                    throw std::logic_error("cooperating users disagree on the alignment solution");
                result.beamformers.combiners[i][k] = local.combiners[static_cast<std::size_t>(k)];
                if (!agreed)
                    agreed = std::move(local);
            }
            aligned[interferer] = std::move(*agreed);
        }

        // Round 3: uplink feedback.
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < K; ++k) {
                const NodeId me = NodeId::ue(k, i);
                KnowledgeSet& ks = nodes_.at(me);
                const CVector& w = result.beamformers.combiners[i][k];
                const CMatrix effective = ks.read({CsiKind::full_channel, i, i, k}).adjoint() * w;
                const CsiKey eff_key{CsiKind::effective_channel, i, i, k};
                ks.learn(eff_key, effective, Provenance::observed);
                send(3, me, NodeId::bs(i), PayloadKind::effective_serving_channel, eff_key, Provenance::feedback_link,
                     M);
                if (k == 0) {
                    const int interferer = other_cell(i);
                    const CsiKey dir_key{CsiKind::aligned_direction, interferer, 0, 0};
                    ks.learn(dir_key, aligned[interferer].h_ici, Provenance::observed);
                    send(3, me, NodeId::bs(interferer), PayloadKind::aligned_ici_direction, dir_key,
                         Provenance::feedback_link, M);
                }
            }

        // Round 4: precoders from base-station knowledge only.
        for (int i = 0; i < kCells; ++i) {
            const KnowledgeSet& ks = nodes_.at(NodeId::bs(i));
            std::vector<CVector> rows;
            for (int k = 0; k < K; ++k)
                rows.emplace_back(ks.read({CsiKind::effective_channel, i, i, k}));
            const CVector h_ici = ks.read({CsiKind::aligned_direction, i, 0, 0});
            const auto precoders = zero_forcing_precoders(rows, h_ici, tol);
            for (int k = 0; k < K; ++k)
                result.beamformers.precoders[i][k] = precoders[static_cast<std::size_t>(k)];
        }

        for (const auto& [id, ks] : nodes_)
            result.audited_reads += ks.reads();
        result.log = std::move(log_);
        result.knowledge = std::move(nodes_);
        return result;
    }

private:
    void send(int round, const NodeId& from, const NodeId& to, PayloadKind kind, const CsiKey& key, Provenance how,
              int scalars) {
        const CMatrix payload = nodes_.at(from).read(key);
        if (!opts_.drop_message || *opts_.drop_message != log_.size())
            nodes_.at(to).learn(key, payload, how);
        log_.push_back({round, from, to, kind, scalars});
    }

    static bool same_solution(const AlignmentSolution& a, const AlignmentSolution& b) {
        if (a.h_ici != b.h_ici || a.combiners.size() != b.combiners.size())
            return false;
        for (std::size_t k = 0; k < a.combiners.size(); ++k)
            if (a.combiners[k] != b.combiners[k])
                return false;
        return true;
    }

    const ChannelSet& ch_;
    ExchangeOptions opts_;
    std::map<NodeId, KnowledgeSet> nodes_;
    std::vector<Message> log_;
};

} // namespace detail

/// Runs the four protocol rounds on one channel realization.
///
/// The resulting beamformers match run_proposed_scheme; the log records every message
/// with the number of complex scalars it carries.
inline ExchangeResult simulate_exchange(const ChannelSet& ch, const ScenarioConfig& cfg, const ToleranceConfig& tol = {},
                                        const ExchangeOptions& opts = {}) {
    if (const auto f = check_feasibility(cfg.M, cfg.N, cfg.K); !f)
        throw InvalidInput("infeasible configuration: " + f.reason);
    if (ch.M() != cfg.M || ch.N() != cfg.N || ch.K() != cfg.K)
        throw InvalidInput("channel dimensions do not match the scenario");
    ExchangeResult r = detail::ExchangeSimulator(ch, opts).run(tol);
    const auto users = all_users(cfg.K);
    r.beamformers.assign_equal_power(cfg.power_P, {users, users});
    return r;
}

// One line per message: round,sender,receiver,payload_kind,complex_scalar_count
inline void write_trace(std::ostream& os, const std::vector<Message>& log) {
    os << "round,sender,receiver,payload_kind,complex_scalar_count\n";
    for (const Message& m : log)
        os << m.round << ',' << m.sender.label() << ',' << m.receiver.label() << ',' << to_string(m.kind) << ','
           << m.complex_scalar_count << '\n';
}

} // namespace ucia

#endif

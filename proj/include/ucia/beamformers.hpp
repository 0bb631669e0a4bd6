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

#ifndef UCIA_BEAMFORMERS_HPP
#define UCIA_BEAMFORMERS_HPP

#include "ucia/linalg.hpp"
#include "ucia/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

namespace ucia {

/// Transmit precoders, receive combiners and per-stream powers for both cells.
///
/// Indexed [cell][user]. A stream with zero power is not transmitted; its user is inactive
/// and contributes no rate. Inactive slots still hold unit-norm placeholder vectors.
struct BeamformerSet {
    std::array<std::vector<CVector>, kCells> precoders;
    std::array<std::vector<CVector>, kCells> combiners;
    std::array<std::vector<double>, kCells> stream_power;

    static BeamformerSet idle(int M, int N, int K) {
        BeamformerSet b;
        for (int i = 0; i < kCells; ++i) {
            b.precoders[i].assign(K, CVector::Unit(M, 0));
            b.combiners[i].assign(K, CVector::Unit(N, 0));
            b.stream_power[i].assign(K, 0.0);
        }
        return b;
    }

    int users() const { return static_cast<int>(stream_power[0].size()); }

    bool active(int cell, int user) const { return stream_power[cell][user] > 0.0; }

    int active_streams() const {
        int n = 0;
        for (int i = 0; i < kCells; ++i)
            for (int k = 0; k < users(); ++k)
                n += active(i, k) ? 1 : 0;
        return n;
    }

    // Splits `power` equally across the active streams of each cell.
    void assign_equal_power(double power, const std::array<std::vector<int>, kCells>& served) {
        for (int i = 0; i < kCells; ++i) {
            std::fill(stream_power[i].begin(), stream_power[i].end(), 0.0);
            if (served[i].empty())
                continue;
            const double share = power / static_cast<double>(served[i].size());
            for (int k : served[i])
                stream_power[i][k] = share;
        }
    }

    void scale_power(double factor) {
        for (auto& cell : stream_power)
            for (double& p : cell)
                p *= factor;
    }

    double cell_power(int cell) const {
        return std::accumulate(stream_power[cell].begin(), stream_power[cell].end(), 0.0);
    }

    // Unit norms within `tol` and per-cell power within `power_P` (relative slack 1e-12).
    bool satisfies_constraints(double power_P, double tol = 1e-10) const {
        for (int i = 0; i < kCells; ++i) {
            for (int k = 0; k < users(); ++k) {
                if (std::abs(precoders[i][k].norm() - 1.0) > tol)
                    return false;
                if (std::abs(combiners[i][k].norm() - 1.0) > tol)
                    return false;
                if (stream_power[i][k] < 0.0)
                    return false;
            }
            if (cell_power(i) > power_P * (1.0 + 1e-12))
                return false;
        }
        return true;
    }
};

} // namespace ucia

#endif

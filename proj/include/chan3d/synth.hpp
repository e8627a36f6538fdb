// SPDX-License-Identifier: Apache-2.0
//
// chan3d - 3D stochastic MIMO channel and system-level calibration simulator
// Copyright (C) 2026 The chan3d Authors
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

#pragma once

#include "chan3d/antenna.hpp"
#include "chan3d/geom.hpp"
#include "chan3d/ssp.hpp"
#include "chan3d/types.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace chan3d {

// Everything one link needs for synthesis. The pointed-to objects must outlive the context.
struct LinkContext {
    double frequency_hz = 2e9;
    const ClusterSet* clusters = nullptr;
    const Antenna* tx = nullptr;
    const Antenna* rx = nullptr;
    double pathloss_db = 0.0;
    double sf_db = 0.0;
    double k_rice = 0.0; // linear Rice factor used by synthesize
    LosAngles los{};
    Vec3 ue_velocity{};
    XprConvention xpr_convention = XprConvention::Direct;
};

// sqrt(10^(-(PL + SF)/10)).
double slow_fading_amplitude(double pathloss_db, double sf_db) noexcept;

// Element-space (rx element, tx element) matrix of cluster n (0-based) at time t, diffuse part only.
// Throws InvalidInput for a missing antenna/cluster set or n out of range.
CMatrix cluster_matrix_nlos(const LinkContext& ctx, std::size_t n, double t);

// Diffuse part scaled by sqrt(1/(K+1)); cluster 0 additionally carries the LOS ray scaled by
// sqrt(K/(K+1)). Throws InvalidInput for K < 0.
CMatrix cluster_matrix_with_los(const LinkContext& ctx, std::size_t n, double t, double k_rice);

enum class ChannelSpace { Element, Port };

struct ChannelTap {
    double delay = 0.0;
    std::vector<CMatrix> samples; // one (rx, tx) matrix per time sample
};

struct ChannelRealization {
    double frequency_hz = 0.0;
    std::vector<double> times;
    ChannelSpace space = ChannelSpace::Element;
    std::vector<ChannelTap> taps;

    Eigen::Index rx_count() const noexcept { return taps.empty() ? 0 : taps.front().samples.front().rows(); }
    Eigen::Index tx_count() const noexcept { return taps.empty() ? 0 : taps.front().samples.front().cols(); }
};

// All clusters at all times with ctx.k_rice, taps ordered by delay. Port space maps every tap
// through the transmit array's port weights. Throws InvalidInput for an empty time list.
ChannelRealization synthesize(const LinkContext& ctx, std::span<const double> times,
                              ChannelSpace space = ChannelSpace::Element);

// Text dump: a header line
//   # chan3d-realization n_rx=R n_tx=T n_taps=N n_times=S frequency_hz=F space=element|port
// followed by one line per (time, tap): time delay re(0,0) im(0,0) re(0,1) ... in row-major order.
void write_realization(std::ostream& os, const ChannelRealization& r);

// Inverse of write_realization. Throws IoError on malformed input.
ChannelRealization read_realization(std::istream& is);

} // namespace chan3d

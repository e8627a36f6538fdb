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

#include "chan3d/calib.hpp"
#include "chan3d/config.hpp"
#include "chan3d/deploy.hpp"
#include "chan3d/lsp.hpp"
#include "chan3d/synth.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace chan3d {

struct SweepPoint {
    double downtilt_deg = 12.0;
    double d_v = 0.5;
};

// Cartesian product of the sweep lists (downtilt outer), falling back to the antenna values.
std::vector<SweepPoint> sweep_points(const RunConfig& cfg);

// File-name tag of a sweep point, e.g. "3d_tilt12_dv0.5".
std::string sweep_tag(const RunConfig& cfg, const SweepPoint& point);

// Antenna-independent state of one UE-site link.
struct LinkRecord {
    Vec3 bs_position; // site position, or its nearest wrap-around image
    LinkGeometry geometry;
    LosAngles angles;
    double pathloss_db = 0.0;
    LargeScaleParams lsp;
    double esd_mean_log10 = 0.0;
};

struct PointResult {
    SweepPoint point;
    std::vector<DropReport> reports;
    std::vector<ChannelRealization> serving_realizations; // first dump_realizations UEs, phase 2
};

// One drop with its links, evaluated at any number of sweep points.
class Campaign {
public:
    // Validates `cfg`, applies the legacy2d profile when selected, drops the UEs and draws the
    // per-link LOS states and large-scale parameters.
    explicit Campaign(const RunConfig& cfg);

    const RunConfig& config() const noexcept { return cfg_; }
    const Layout& layout() const noexcept { return layout_; }
    const std::vector<Ue>& ues() const noexcept { return ues_; }
    const LinkRecord& link(std::size_t ue, std::size_t site) const { return links_.at(ue * layout_.sites().size() + site); }

    PointResult evaluate(const SweepPoint& point) const;

private:
    void build_links();
    void apply_spatial_fields(std::vector<std::array<double, kLspCount>>& normals) const;
    PointResult evaluate_phase1(const SweepPoint& point) const;
    PointResult evaluate_phase2(const SweepPoint& point) const;

    RunConfig cfg_;
    Layout layout_;
    LspModel lsp_model_;
    std::vector<Ue> ues_;
    std::vector<LinkRecord> links_;
};

struct CampaignResult {
    std::vector<PointResult> points;
    std::vector<std::filesystem::path> files;
};

using LogFn = std::function<void(const std::string&)>;

// Runs every sweep point and, with write_files, writes per point one CDF file per metric and a
// DropReport CSV into cfg.output_dir. Throws ConfigError for an invalid config and IoError when the
// output cannot be written.
CampaignResult run_campaign(const RunConfig& cfg, bool write_files = true, const LogFn& log = {});

// Two-column "value probability" text with a comment header.
void write_cdf_file(const std::filesystem::path& path, const std::string& metric, std::span<const double> samples,
                    const RunConfig& cfg, const SweepPoint& point);

// Runs fn(i) for i in [0, n) on `workers` threads over contiguous index blocks.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

} // namespace chan3d

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
#include "chan3d/deploy.hpp"
#include "chan3d/lsp.hpp"
#include "chan3d/ssp.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chan3d {

enum class DropMode { ThreeD, Legacy2d };

struct BsAntennaConfig {
    std::size_t rows = 10;
    std::size_t columns = 1;
    double d_v = 0.5; // wavelengths
    double d_h = 0.5;
    std::size_t elements_per_port = 10;
    Polarization polarization = Polarization::Single;
    double slant_deg = 0.0;
    double downtilt_deg = 12.0; // electrical, below the horizon
    double mechanical_tilt_deg = 0.0;
    PatternKind pattern = PatternKind::Element3gpp;
    FieldModel field_model = FieldModel::Slant36814;
    PatternSpec element = PatternSpec::element_3gpp();
    PatternSpec itu_port = PatternSpec::itu_port(0.0); // tilt follows downtilt_deg

    friend bool operator==(const BsAntennaConfig&, const BsAntennaConfig&) = default;
};

struct UeAntennaConfig {
    Polarization polarization = Polarization::Single; // cross: two co-located elements at +-45 deg slant
    PatternKind pattern = PatternKind::Isotropic;

    friend bool operator==(const UeAntennaConfig&, const UeAntennaConfig&) = default;
};

// Overrides applied when drop_mode is legacy2d, so that the reference run uses the pre-3D
// modelling choices as a whole and not only the 1.5 m UE heights.
struct Legacy2dProfile {
    PatternKind pattern = PatternKind::ItuPort;
    bool use_3d_distance = false;

    friend bool operator==(const Legacy2dProfile&, const Legacy2dProfile&) = default;
};

struct SweepConfig {
    std::vector<double> downtilt_deg{6.0, 9.0, 12.0}; // empty: bs_antenna.downtilt_deg
    std::vector<double> d_v{0.5};                     // empty: bs_antenna.d_v

    friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct RunConfig {
    Scenario scenario = Scenario::UMa;
    std::uint64_t seed = 1;
    std::size_t n_ue = 1710;
    double carrier_hz = 2e9;
    int phase = 1;
    DropMode drop_mode = DropMode::ThreeD;
    std::string output_dir = "out";
    std::size_t workers = 1;
    std::vector<double> times_s{0.0};
    std::size_t dump_realizations = 0;

    LayoutSpec layout{};
    bool wrap_around = false;
    DropSpec ue{};
    UeAntennaConfig ue_antenna{};
    BsAntennaConfig bs_antenna{};
    PathlossParams pathloss{};
    LosProbabilitySpec los{};
    LspDistributionSpec lsp{};
    bool lsp_spatial_correlation = true;
    double lsp_grid_spacing_m = 5.0;
    SspSpec ssp{};
    SweepConfig sweep{};
    Legacy2dProfile legacy2d{};

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Complete configuration with the documented defaults of a scenario.
RunConfig default_config(Scenario scenario);

// Throws ConfigError naming the offending field.
void validate_config(const RunConfig& cfg);

// Canonical JSON text of every field. Parsing it back yields an equal RunConfig.
std::string emit_config(const RunConfig& cfg);

// Parses JSON text: the keys given override the defaults of the selected scenario ("scenario",
// default UMa). Unknown keys, type mismatches and a missing "seed" (unless seed_override is set)
// are rejected with ConfigError carrying the dotted field path.
RunConfig parse_config_text(std::string_view text, std::optional<std::uint64_t> seed_override = std::nullopt);

// parse_config_text on a file. Throws IoError if it cannot be read.
RunConfig parse_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt);

// FNV-1a 64 over the canonical text, excluding execution-only settings (output_dir, workers).
std::uint64_t config_hash(const RunConfig& cfg);

// Canonical text without the execution-only settings.
std::string emit_experiment_config(const RunConfig& cfg);

} // namespace chan3d

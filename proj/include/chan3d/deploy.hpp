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

#include "chan3d/geom.hpp"
#include "chan3d/rng.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace chan3d {

struct Cell {
    std::size_t site = 0;
    std::size_t sector = 0; // 0, 1, 2
    double bearing_deg = 0.0;
    double ptx_dbm = 46.0;

    std::size_t index() const noexcept { return 3 * site + sector; }
};

struct Site {
    std::size_t index = 0;
    Vec3 position; // z is the BS height
    std::array<Cell, 3> cells;
};

struct LayoutSpec {
    std::size_t n_rings = 2;
    double isd_m = 500.0;
    double h_bs_m = 25.0;
    double ptx_dbm = 46.0;

    friend bool operator==(const LayoutSpec&, const LayoutSpec&) = default;
};

// Hexagonal grid of tri-sector sites. Site 0 is at the origin; the others follow ring by ring,
// counter-clockwise from the +x axis. Each site covers a hexagon of circumradius isd/sqrt(3) split
// into three rhombic sector cells centred on the bearings 0, 120 and 240 degrees.
class Layout {
public:
    // Throws InvalidInput for isd <= 0.
    explicit Layout(const LayoutSpec& spec);

    const LayoutSpec& spec() const noexcept { return spec_; }
    const std::vector<Site>& sites() const noexcept { return sites_; }
    std::size_t cell_count() const noexcept { return 3 * sites_.size(); }
    const Cell& cell(std::size_t global_index) const;
    double hex_radius() const noexcept;

    // True when (x, y) lies in one of the site hexagons (boundary included within `tol` meters).
    bool covers(double x, double y, double tol = 1e-9) const noexcept;

    // Position of the site, or with wrap_around of its copy among the seven shifted layouts that is
    // closest to `ue` in the horizontal plane.
    Vec3 site_image(std::size_t site, const Vec3& ue, bool wrap_around) const;

    // Translation vectors between the layout and its six surrounding copies.
    const std::array<Vec3, 6>& wrap_shifts() const noexcept { return shifts_; }

private:
    LayoutSpec spec_;
    std::vector<Site> sites_;
    std::array<Vec3, 6> shifts_{};
};

struct Ue {
    std::size_t id = 0;
    Vec3 position;
    bool indoor = false;
    int floor = 1;           // n_fl, 1-based
    int building_floors = 0; // x; 0 for outdoor UEs
    Vec3 velocity;
    std::size_t home_cell = 0; // cell the position was drawn in
};

struct DropSpec {
    double indoor_probability = 0.8;
    int min_floors = 4;
    int max_floors = 8;
    double floor_height_m = 3.0;
    double ground_height_m = 1.5;
    double min_distance_m = 35.0;
    double speed_kmh = 3.0;
    bool equal_per_cell = true;

    // Throws ConfigError on inconsistent values.
    void validate() const;

    friend bool operator==(const DropSpec&, const DropSpec&) = default;
};

// Uniform positions per sector cell (equal count per cell, or a uniformly drawn cell), indoor with
// probability indoor_probability at h = 3 (n_fl - 1) + 1.5 with x ~ U{min..max}, n_fl ~ U{1..x};
// horizontal velocity of fixed speed and uniform direction. Positions, heights and velocities come
// from three generators forked from `rng` in that order. Throws InvalidInput for n == 0.
std::vector<Ue> drop_ues(std::size_t n, const Layout& layout, const DropSpec& spec, Rng& rng);

// Same positions and velocities as drop_ues for the same generator state, every UE outdoor at the
// ground height.
std::vector<Ue> legacy_2d_drop(std::size_t n, const Layout& layout, const DropSpec& spec, Rng& rng);

} // namespace chan3d

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

#include "chan3d/deploy.hpp"

#include "chan3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace chan3d {

namespace {

Vec3 polar2(double r, double angle_deg)
{
    return {r * std::cos(deg2rad(angle_deg)), r * std::sin(deg2rad(angle_deg)), 0.0};
}

Vec3 rotate_z(const Vec3& v, double angle_deg)
{
    const double c = std::cos(deg2rad(angle_deg));
    const double s = std::sin(deg2rad(angle_deg));
    return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

} // namespace

Layout::Layout(const LayoutSpec& spec) : spec_(spec)
{
    if (!(spec.isd_m > 0.0))
        throw InvalidInput("layout: inter-site distance must be positive");
    const Vec3 a = polar2(spec.isd_m, 30.0);
    const Vec3 b = polar2(spec.isd_m, 90.0);
    const int n = static_cast<int>(spec.n_rings);

    struct Node {
        int ring;
        double angle;
        Vec3 pos;
    };
    std::vector<Node> nodes;
    for (int q = -n; q <= n; ++q)
        for (int r = -n; r <= n; ++r) {
            const int ring = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
            if (ring > n)
                continue;
            Vec3 p = static_cast<double>(q) * a + static_cast<double>(r) * b;
            double ang = std::atan2(p.y, p.x);
            if (ang < -1e-12)
                ang += kTwoPi;
            nodes.push_back({ring, ring == 0 ? 0.0 : std::max(ang, 0.0), p});
        }
    std::sort(nodes.begin(), nodes.end(),
              [](const Node& x, const Node& y) { return std::tie(x.ring, x.angle) < std::tie(y.ring, y.angle); });

    sites_.resize(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Site& s = sites_[i];
        s.index = i;
        s.position = {nodes[i].pos.x, nodes[i].pos.y, spec.h_bs_m};
        for (std::size_t k = 0; k < 3; ++k)
            s.cells[k] = {i, k, 120.0 * static_cast<double>(k), spec.ptx_dbm};
    }

    const Vec3 t = static_cast<double>(2 * n + 1) * a - static_cast<double>(n) * b;
    for (std::size_t j = 0; j < 6; ++j)
        shifts_[j] = rotate_z(t, 60.0 * static_cast<double>(j));
}

const Cell& Layout::cell(std::size_t global_index) const
{
    if (global_index >= cell_count())
        throw InvalidInput("layout: cell index out of range");
    return sites_[global_index / 3].cells[global_index % 3];
}

double Layout::hex_radius() const noexcept
{
    return spec_.isd_m / std::sqrt(3.0);
}

bool Layout::covers(double x, double y, double tol) const noexcept
{
    const double apothem = spec_.isd_m / 2.0;
    for (const Site& s : sites_) {
        const double dx = x - s.position.x;
        const double dy = y - s.position.y;
        bool inside = true;
        // Flat sides face 30, 90, ..., 330 degrees.
        for (int k = 0; k < 6 && inside; ++k) {
            const double ang = deg2rad(30.0 + 60.0 * k);
            inside = dx * std::cos(ang) + dy * std::sin(ang) <= apothem + tol;
        }
        if (inside)
            return true;
    }
    return false;
}

Vec3 Layout::site_image(std::size_t site, const Vec3& ue, bool wrap_around) const
{
    const Vec3& p = sites_.at(site).position;
    if (!wrap_around)
        return p;
    Vec3 best = p;
    double best_d = horizontal_distance(p, ue);
    for (const Vec3& s : shifts_) {
        const Vec3 cand = p + s;
        const double d = horizontal_distance(cand, ue);
        if (d < best_d) {
            best_d = d;
            best = cand;
        }
    }
    return best;
}

void DropSpec::validate() const
{
    if (!(indoor_probability >= 0.0 && indoor_probability <= 1.0))
        throw ConfigError("ue.indoor_probability", "must lie in [0, 1]");
    if (min_floors < 1)
        throw ConfigError("ue.min_floors", "must be at least 1");
    if (max_floors < min_floors)
        throw ConfigError("ue.max_floors", "must not be below min_floors");
    if (!(floor_height_m > 0.0))
        throw ConfigError("ue.floor_height_m", "must be positive");
    if (!(ground_height_m > 0.0))
        throw ConfigError("ue.ground_height_m", "must be positive");
    if (!(min_distance_m >= 0.0))
        throw ConfigError("ue.min_distance_m", "must be non-negative");
    if (!(speed_kmh >= 0.0))
        throw ConfigError("ue.speed_kmh", "must be non-negative");
}

namespace {

std::vector<Ue> drop_impl(std::size_t n, const Layout& layout, const DropSpec& spec, Rng& rng, bool three_d)
{
    if (n == 0)
        throw InvalidInput("drop: need at least one UE");
    if (spec.min_distance_m >= layout.hex_radius())
        throw InvalidInput("drop: minimum distance leaves no room in the cell");
    Rng pos_rng(rng());
    Rng height_rng(rng());
    Rng vel_rng(rng());

    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_cell(0, layout.cell_count() - 1);
    const double radius = layout.hex_radius();

    std::vector<Ue> ues(n);
    for (std::size_t i = 0; i < n; ++i) {
        Ue& ue = ues[i];
        ue.id = i;
        ue.home_cell = spec.equal_per_cell ? i % layout.cell_count() : pick_cell(pos_rng);
        const Cell& c = layout.cell(ue.home_cell);
        const Vec3& site = layout.sites()[c.site].position;
        const Vec3 e1 = polar2(radius, c.bearing_deg - 60.0);
        const Vec3 e2 = polar2(radius, c.bearing_deg + 60.0);
        Vec3 p;
        do {
            const double u = u01(pos_rng);
            const double v = u01(pos_rng);
            p = Vec3{site.x, site.y, 0.0} + u * e1 + v * e2;
        } while (std::hypot(p.x - site.x, p.y - site.y) < spec.min_distance_m);
        ue.position = {p.x, p.y, spec.ground_height_m};
    }

    if (three_d) {
        std::bernoulli_distribution indoor(spec.indoor_probability);
        std::uniform_int_distribution<int> floors(spec.min_floors, spec.max_floors);
        for (Ue& ue : ues) {
            ue.indoor = indoor(height_rng);
            if (!ue.indoor)
                continue;
            ue.building_floors = floors(height_rng);
            ue.floor = std::uniform_int_distribution<int>(1, ue.building_floors)(height_rng);
            ue.position.z = spec.floor_height_m * (ue.floor - 1) + spec.ground_height_m;
        }
    }

    const double speed = spec.speed_kmh / 3.6;
    for (Ue& ue : ues) {
        const double dir = std::uniform_real_distribution<double>(-kPi, kPi)(vel_rng);
        ue.velocity = {speed * std::cos(dir), speed * std::sin(dir), 0.0};
    }
    return ues;
}

} // namespace

std::vector<Ue> drop_ues(std::size_t n, const Layout& layout, const DropSpec& spec, Rng& rng)
{
    return drop_impl(n, layout, spec, rng, true);
}

std::vector<Ue> legacy_2d_drop(std::size_t n, const Layout& layout, const DropSpec& spec, Rng& rng)
{
    return drop_impl(n, layout, spec, rng, false);
}

} // namespace chan3d

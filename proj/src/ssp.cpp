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

#include "chan3d/ssp.hpp"

#include "chan3d/calib.hpp"
#include "chan3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace chan3d {

void SubpathOffsets::validate() const
{
    if (alpha.empty())
        throw InvalidInput("sub-path offsets must not be empty");
    std::vector<double> sorted = alpha;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!std::isfinite(sorted[i]) || sorted[i] != -sorted[sorted.size() - 1 - i])
            throw InvalidInput("sub-path offsets must be symmetric about zero");
    for (double c : {c_asd_deg, c_asa_deg, c_esd_deg, c_esa_deg})
        if (!std::isfinite(c) || c < 0.0)
            throw InvalidInput("sub-path spread scalers must be non-negative");
}

PolarizationMatrix polarization_matrix(const PolarizationDraw& d, XprConvention convention)
{
    const double cross = convention == XprConvention::Direct ? std::sqrt(d.kappa) : std::sqrt(1.0 / d.kappa);
    return {std::polar(1.0, d.phi_vv), std::polar(cross, d.phi_vh), std::polar(cross, d.phi_hv),
            std::polar(1.0, d.phi_hh)};
}

PolarizationDraw draw_polarization(Rng& rng, double xpr_mu_db, double xpr_sigma_db)
{
    std::normal_distribution<double> xpr(xpr_mu_db, xpr_sigma_db);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    PolarizationDraw d;
    d.kappa = std::pow(10.0, xpr(rng) / 10.0);
    d.phi_vv = phase(rng);
    d.phi_vh = phase(rng);
    d.phi_hv = phase(rng);
    d.phi_hh = phase(rng);
    return d;
}

double ClusterSet::total_power() const noexcept
{
    double s = 0.0;
    for (const auto& c : clusters)
        for (const auto& p : c.subpaths)
            s += p.power;
    return s;
}

std::size_t ClusterSet::subpath_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& c : clusters)
        n += c.subpaths.size();
    return n;
}

std::vector<double> generate_delays(double ds, std::size_t n_clusters, double r_tau, Rng& rng)
{
    if (!(ds > 0.0) || n_clusters == 0 || !(r_tau > 0.0))
        throw InvalidInput("generate_delays: need ds > 0, r_tau > 0 and at least one cluster");
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> tau(n_clusters);
    for (double& t : tau)
        t = -r_tau * ds * std::log(1.0 - u01(rng));
    std::sort(tau.begin(), tau.end());
    const double t0 = tau.front();
    for (double& t : tau)
        t -= t0;
    return tau;
}

std::vector<double> generate_cluster_powers(std::span<const double> delays, double ds, double r_tau,
                                            double shadow_sigma_db, Rng& rng)
{
    if (delays.empty() || !(ds > 0.0) || !(r_tau > 0.0))
        throw InvalidInput("generate_cluster_powers: need delays, ds > 0 and r_tau > 0");
    std::normal_distribution<double> shadow(0.0, shadow_sigma_db);
    std::vector<double> p(delays.size());
    for (std::size_t n = 0; n < delays.size(); ++n) {
        const double z = shadow(rng);
        p[n] = std::exp(-delays[n] * (r_tau - 1.0) / (r_tau * ds)) * std::pow(10.0, -z / 10.0);
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& x : p)
        x /= total;
    return p;
}

double reflect_zenith(double zenith) noexcept
{
    double z = std::fmod(zenith, kTwoPi);
    if (z < 0.0)
        z += kTwoPi;
    return z > kPi ? kTwoPi - z : z;
}

std::vector<double> generate_cluster_angles(AngleKind kind, double spread_deg, std::span<const double> powers,
                                            double center, Rng& rng, double mean_offset_deg, bool anchor_first)
{
    if (!(spread_deg >= 0.0) || !std::isfinite(spread_deg))
        throw InvalidInput("generate_cluster_angles: spread must be finite and non-negative");
    if (powers.empty())
        throw InvalidInput("generate_cluster_angles: no clusters");

    const std::size_t n = powers.size();
    const double pmax = *std::max_element(powers.begin(), powers.end());
    std::uniform_int_distribution<int> sign(0, 1);
    std::normal_distribution<double> perturb(0.0, spread_deg / 7.0);

    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ratio = std::max(powers[i] / pmax, 1e-300);
        const double shape =
            kind == AngleKind::Azimuth ? 2.0 * (spread_deg / 1.4) * std::sqrt(-std::log(ratio)) : -spread_deg * std::log(ratio);
        const double x = sign(rng) ? 1.0 : -1.0;
        dev[i] = deg2rad(x * shape + perturb(rng));
    }
    if (anchor_first) {
        const double d0 = dev[0];
        for (double& d : dev)
            d -= d0;
    }

    const double mean = center + deg2rad(mean_offset_deg);
    std::vector<double> out(n, mean);
    const auto place = [&](double s) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = mean + s * dev[i];
    };

    if (spread_deg > 0.0) {
        double s = 1.0;
        double best_s = 0.0;
        double best_err = spread_deg;
        for (int it = 0; it < 100; ++it) {
            place(s);
            const double realized = angular_spread_deg(out, powers);
            const double err = std::abs(realized - spread_deg);
            if (err < best_err) {
                best_err = err;
                best_s = s;
            }
            if (realized <= 0.0 || err <= 1e-10 * spread_deg)
                break;
            s *= spread_deg / realized;
        }
        place(best_s);
    }

    for (double& a : out)
        a = kind == AngleKind::Azimuth ? wrap_azimuth(a) : reflect_zenith(a);
    return out;
}

std::vector<std::vector<SubpathAngles>> expand_subpaths(const ClusterAngles& c, const SubpathOffsets& offsets,
                                                        Rng* coupling_rng)
{
    offsets.validate();
    const std::size_t n = c.aod.size();
    if (c.aoa.size() != n || c.zod.size() != n || c.zoa.size() != n)
        throw InvalidInput("expand_subpaths: angle lists differ in length");

    const std::size_t m = offsets.alpha.size();
    std::vector<std::vector<SubpathAngles>> out(n, std::vector<SubpathAngles>(m));
    std::array<std::vector<std::size_t>, 4> order;
    for (auto& o : order) {
        o.resize(m);
        std::iota(o.begin(), o.end(), std::size_t{0});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (coupling_rng != nullptr)
            for (auto& o : order)
                std::shuffle(o.begin(), o.end(), *coupling_rng);
        for (std::size_t k = 0; k < m; ++k) {
            auto& sp = out[i][k];
            sp.departure.azimuth = wrap_azimuth(c.aod[i] + deg2rad(offsets.c_asd_deg * offsets.alpha[order[0][k]]));
            sp.arrival.azimuth = wrap_azimuth(c.aoa[i] + deg2rad(offsets.c_asa_deg * offsets.alpha[order[1][k]]));
            sp.departure.zenith = reflect_zenith(c.zod[i] + deg2rad(offsets.c_esd_deg * offsets.alpha[order[2][k]]));
            sp.arrival.zenith = reflect_zenith(c.zoa[i] + deg2rad(offsets.c_esa_deg * offsets.alpha[order[3][k]]));
        }
    }
    return out;
}

const SspStateSpec& SspSpec::for_state(LinkState s) const noexcept
{
    switch (s) {
    case LinkState::Los: return los;
    case LinkState::Nlos: return nlos;
    case LinkState::O2i: return o2i;
    }
    return nlos;
}

void SspSpec::validate() const
{
    try {
        SubpathOffsets{ray_offsets, 0.0, 0.0, 0.0, 0.0}.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError("ssp.ray_offsets", e.what());
    }
    if (split_strongest_clusters && ray_offsets.size() != 20)
        throw ConfigError("ssp.split_strongest_clusters", "sub-cluster splitting needs exactly 20 sub-paths per cluster");
    if (!(subcluster_delay_ns >= 0.0))
        throw ConfigError("ssp.subcluster_delay_ns", "must be non-negative");
    for (LinkState s : {LinkState::Los, LinkState::Nlos, LinkState::O2i}) {
        const SspStateSpec& st = for_state(s);
        const std::string base = "ssp." + std::string(to_string(s)) + ".";
        if (st.n_clusters == 0)
            throw ConfigError(base + "n_clusters", "must be at least 1");
        if (!(st.r_tau > 0.0))
            throw ConfigError(base + "r_tau", "must be positive");
        if (!(st.cluster_shadow_sigma_db >= 0.0))
            throw ConfigError(base + "cluster_shadow_sigma_db", "must be non-negative");
        if (!std::isfinite(st.xpr_mu_db))
            throw ConfigError(base + "xpr_mu_db", "must be finite");
        if (!(st.xpr_sigma_db >= 0.0))
            throw ConfigError(base + "xpr_sigma_db", "must be non-negative");
        const std::pair<const char*, double> scalers[] = {
            {"c_asd_deg", st.c_asd_deg}, {"c_asa_deg", st.c_asa_deg}, {"c_esa_deg", st.c_esa_deg}, {"c_esd_scale", st.c_esd_scale}};
        for (const auto& [name, v] : scalers)
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ConfigError(base + name, "must be finite and non-negative");
        try {
            st.esd_offset_deg.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(base + "esd_offset_deg", e.what());
        }
    }
}

namespace {

DistanceTable distance_only(double (*f)(double))
{
    DistanceTable t;
    for (double d = 0.0; d <= 1000.0; d += 50.0)
        t.d_2d_m.push_back(d);
    t.d_2d_m.push_back(2000.0);
    t.d_2d_m.push_back(5000.0);
    t.h_ue_m = {1.5};
    for (double d : t.d_2d_m)
        t.values.push_back(f(d));
    return t;
}

double uma_zod_offset(double d)
{
    const double lf = std::log10(2.0);
    const double a = 0.208 * lf - 0.782;
    const double c = -0.13 * lf + 2.03;
    const double e = 7.66 * lf - 5.96;
    return e - std::pow(10.0, a * std::log10(std::max(25.0, d)) + c);
}

double umi_zod_offset(double d)
{
    return -std::pow(10.0, -1.5 * std::log10(std::max(10.0, d)) + 3.3);
}

} // namespace

SspSpec default_ssp_spec(Scenario scenario)
{
    SspSpec s;
    if (scenario == Scenario::UMa) {
        s.los = {12, 2.5, 3.0, -8.0, 4.0, 5.0, 11.0, 7.0, 0.375, {}};
        s.nlos = {20, 2.3, 3.0, -7.0, 3.0, 2.0, 15.0, 7.0, 0.375, distance_only(uma_zod_offset)};
        s.o2i = {12, 2.2, 4.0, -9.0, 5.0, 5.0, 8.0, 3.0, 0.375, distance_only(uma_zod_offset)};
    } else {
        s.los = {12, 3.2, 3.0, -9.0, 3.0, 3.0, 17.0, 7.0, 0.375, {}};
        s.nlos = {19, 3.0, 3.0, -8.0, 3.0, 10.0, 22.0, 7.0, 0.375, distance_only(umi_zod_offset)};
        s.o2i = {12, 2.2, 4.0, -9.0, 5.0, 5.0, 8.0, 3.0, 0.375, distance_only(umi_zod_offset)};
    }
    return s;
}

namespace {

// Ray groups (0-based positions in the offset table) of the three sub-clusters and their delay steps.
constexpr std::array<std::array<int, 10>, 3> kSubclusterRays{{
    {0, 1, 2, 3, 4, 5, 6, 7, 18, 19},
    {8, 9, 10, 11, 16, 17, -1, -1, -1, -1},
    {12, 13, 14, 15, -1, -1, -1, -1, -1, -1},
}};
constexpr std::array<double, 3> kSubclusterDelaySteps{0.0, 1.28, 2.56};

void split_strongest(ClusterSet& set, double step_s)
{
    std::vector<std::size_t> idx(set.clusters.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return set.clusters[a].power > set.clusters[b].power; });
    const std::size_t n_split = std::min<std::size_t>(2, idx.size());
    std::vector<bool> drop(set.clusters.size(), false);
    std::vector<Cluster> added;
    for (std::size_t k = 0; k < n_split; ++k) {
        const Cluster& src = set.clusters[idx[k]];
        drop[idx[k]] = true;
        for (std::size_t g = 0; g < 3; ++g) {
            Cluster sub;
            sub.delay = src.delay + kSubclusterDelaySteps[g] * step_s;
            for (int r : kSubclusterRays[g]) {
                if (r < 0)
                    break;
                sub.subpaths.push_back(src.subpaths[static_cast<std::size_t>(r)]);
                sub.power += src.subpaths[static_cast<std::size_t>(r)].power;
            }
            added.push_back(std::move(sub));
        }
    }
    std::vector<Cluster> kept;
    for (std::size_t i = 0; i < set.clusters.size(); ++i)
        if (!drop[i])
            kept.push_back(std::move(set.clusters[i]));
    for (auto& c : added)
        kept.push_back(std::move(c));
    std::stable_sort(kept.begin(), kept.end(), [](const Cluster& a, const Cluster& b) { return a.delay < b.delay; });
    set.clusters = std::move(kept);
}

} // namespace

ClusterSet generate_small_scale(const SspSpec& spec, const SmallScaleInputs& in, Rng& rng)
{
    const SspStateSpec& st = spec.for_state(in.state);
    const bool los = in.state == LinkState::Los;
    const LargeScaleParams& lsp = in.lsp;

    const std::vector<double> delays = generate_delays(lsp.ds, st.n_clusters, st.r_tau, rng);
    const std::vector<double> powers = generate_cluster_powers(delays, lsp.ds, st.r_tau, st.cluster_shadow_sigma_db, rng);

    const double zod_offset = st.esd_offset_deg.empty() ? 0.0 : st.esd_offset_deg.eval(in.d_2d, in.h_ue);
    ClusterAngles ca;
    ca.aod = generate_cluster_angles(AngleKind::Azimuth, lsp.asd, powers, in.los.departure.azimuth, rng, 0.0, los);
    ca.aoa = generate_cluster_angles(AngleKind::Azimuth, lsp.asa, powers, in.los.arrival.azimuth, rng, 0.0, los);
    ca.zod = generate_cluster_angles(AngleKind::Zenith, lsp.esd, powers, in.los.departure.zenith, rng, zod_offset, los);
    ca.zoa = generate_cluster_angles(AngleKind::Zenith, lsp.esa, powers, in.los.arrival.zenith, rng, 0.0, los);

    const SubpathOffsets offsets{spec.ray_offsets, st.c_asd_deg, st.c_asa_deg,
                                 st.c_esd_scale * std::pow(10.0, in.esd_mean_log10), st.c_esa_deg};
    const auto angles = expand_subpaths(ca, offsets, spec.random_coupling ? &rng : nullptr);

    const double m = static_cast<double>(offsets.alpha.size());
    ClusterSet set;
    set.clusters.resize(delays.size());
    for (std::size_t n = 0; n < delays.size(); ++n) {
        Cluster& c = set.clusters[n];
        c.delay = delays[n];
        c.power = powers[n];
        c.subpaths.resize(angles[n].size());
        for (std::size_t k = 0; k < angles[n].size(); ++k) {
            Subpath& sp = c.subpaths[k];
            sp.power = powers[n] / m;
            sp.departure = angles[n][k].departure;
            sp.arrival = angles[n][k].arrival;
            sp.pol = draw_polarization(rng, st.xpr_mu_db, st.xpr_sigma_db);
        }
    }
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    set.los_phase_vv = phase(rng);
    set.los_phase_hh = phase(rng);

    if (spec.split_strongest_clusters)
        split_strongest(set, spec.subcluster_delay_ns * 1e-9);
    return set;
}

} // namespace chan3d

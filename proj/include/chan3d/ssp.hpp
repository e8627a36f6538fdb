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
#include "chan3d/lsp.hpp"
#include "chan3d/rng.hpp"
#include "chan3d/types.hpp"

#include <array>
#include <span>
#include <vector>

namespace chan3d {

// Symmetric ray offsets of the SCM/WINNER family, in units of the per-kind spread scaler.
inline constexpr std::array<double, 20> kStandardRayOffsets{
    0.0447, -0.0447, 0.1413, -0.1413, 0.2492, -0.2492, 0.3715, -0.3715, 0.5129, -0.5129,
    0.6797, -0.6797, 0.8844, -0.8844, 1.1481, -1.1481, 1.5195, -1.5195, 2.1551, -2.1551,
};

struct SubpathOffsets {
    std::vector<double> alpha{kStandardRayOffsets.begin(), kStandardRayOffsets.end()};
    double c_asd_deg = 0.0;
    double c_asa_deg = 0.0;
    double c_esd_deg = 0.0;
    double c_esa_deg = 0.0;

    // Throws InvalidInput unless alpha is non-empty and symmetric about zero and the scalers are >= 0.
    void validate() const;
};

// Which convention the cross-polar entries of the polarization matrix follow.
enum class XprConvention {
    Direct,  // sqrt(kappa) on the off-diagonal
    Inverse, // sqrt(1/kappa) on the off-diagonal
};

struct PolarizationDraw {
    double kappa = 1.0; // linear
    double phi_vv = 0.0;
    double phi_vh = 0.0;
    double phi_hv = 0.0;
    double phi_hh = 0.0;
};

// Row-major [[VV, VH], [HV, HH]].
using PolarizationMatrix = std::array<cdouble, 4>;

PolarizationMatrix polarization_matrix(const PolarizationDraw& draw, XprConvention convention = XprConvention::Direct);

// kappa log-normal with 10 log10 kappa ~ N(mu, sigma); four phases uniform in [0, 2 pi).
PolarizationDraw draw_polarization(Rng& rng, double xpr_mu_db, double xpr_sigma_db);

struct Subpath {
    double power = 0.0;
    AngleVector departure;
    AngleVector arrival;
    PolarizationDraw pol;
};

struct Cluster {
    double delay = 0.0; // seconds
    double power = 0.0;
    std::vector<Subpath> subpaths;
};

struct ClusterSet {
    std::vector<Cluster> clusters;
    double los_phase_vv = 0.0;
    double los_phase_hh = 0.0;

    double total_power() const noexcept;
    std::size_t subpath_count() const noexcept;
};

// tau'_n = -r_tau ds ln u_n, sorted, shifted so the first delay is 0.
// Throws InvalidInput for ds <= 0, n_clusters == 0 or r_tau <= 0.
std::vector<double> generate_delays(double ds, std::size_t n_clusters, double r_tau, Rng& rng);

// P_n ~ exp(-tau_n (r_tau - 1) / (r_tau ds)) 10^(-Z_n/10), Z_n ~ N(0, sigma^2), normalized to sum 1.
std::vector<double> generate_cluster_powers(std::span<const double> delays, double ds, double r_tau,
                                            double shadow_sigma_db, Rng& rng);

enum class AngleKind { Azimuth, Zenith };

// Cluster angles (radians) around `center` (radians) + mean_offset_deg. Deviations follow the
// power-dependent shape (sqrt(-ln P) for azimuth, -ln P for zenith) with a random sign and a
// Gaussian perturbation, and are rescaled so the power-weighted circular spread equals
// spread_deg. With anchor_first the first cluster sits exactly on the mean direction.
// Zenith results are reflected into [0, pi]. Throws InvalidInput for a negative spread.
std::vector<double> generate_cluster_angles(AngleKind kind, double spread_deg, std::span<const double> powers,
                                            double center, Rng& rng, double mean_offset_deg = 0.0,
                                            bool anchor_first = false);

struct ClusterAngles {
    std::vector<double> aod, aoa, zod, zoa; // radians, one per cluster
};

struct SubpathAngles {
    AngleVector departure;
    AngleVector arrival;
};

// theta_{n,m} = theta_n + c alpha_m per angle kind. A non-null coupling_rng pairs the offsets of the
// four kinds through independent random permutations per cluster.
std::vector<std::vector<SubpathAngles>> expand_subpaths(const ClusterAngles& clusters, const SubpathOffsets& offsets,
                                                        Rng* coupling_rng = nullptr);

// Reflects a zenith angle at the poles into [0, pi].
double reflect_zenith(double zenith) noexcept;

struct SspStateSpec {
    std::size_t n_clusters = 20;
    double r_tau = 2.3;
    double cluster_shadow_sigma_db = 3.0;
    double xpr_mu_db = -7.0;
    double xpr_sigma_db = 3.0;
    double c_asd_deg = 2.0;
    double c_asa_deg = 15.0;
    double c_esa_deg = 7.0;
    double c_esd_scale = 0.375;   // c_ESD = scale * 10^(mean log10 ESD of the link)
    DistanceTable esd_offset_deg; // departure zenith mean offset vs distance; empty means 0

    friend bool operator==(const SspStateSpec&, const SspStateSpec&) = default;
};

struct SspSpec {
    SspStateSpec los{};
    SspStateSpec nlos{};
    SspStateSpec o2i{};
    std::vector<double> ray_offsets{kStandardRayOffsets.begin(), kStandardRayOffsets.end()};
    bool random_coupling = true;
    bool split_strongest_clusters = false;
    double subcluster_delay_ns = 5.0;
    XprConvention xpr_convention = XprConvention::Direct;

    const SspStateSpec& for_state(LinkState s) const noexcept;
    // Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const SspSpec&, const SspSpec&) = default;
};

SspSpec default_ssp_spec(Scenario scenario);

struct SmallScaleInputs {
    LinkState state = LinkState::Nlos;
    LargeScaleParams lsp{};
    LosAngles los{};
    double d_2d = 0.0;
    double h_ue = 1.5;
    double esd_mean_log10 = 0.0; // mean of log10 ESD at this link, scales c_ESD
};

// Full small-scale draw of one link: delays, powers, four angle sets, sub-paths, polarization and
// LOS phases, in that order from `rng`. Clusters are ordered by delay.
ClusterSet generate_small_scale(const SspSpec& spec, const SmallScaleInputs& in, Rng& rng);

} // namespace chan3d

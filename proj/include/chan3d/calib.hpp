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

#include "chan3d/types.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace chan3d {

struct ChannelRealization;

// P_TX + G_T + G_R - PL - SF, all in dB.
constexpr double rsrp_db(double ptx_dbm, double g_t_dbi, double g_r_dbi, double pathloss_db, double sf_db) noexcept
{
    return ptx_dbm + g_t_dbi + g_r_dbi - pathloss_db - sf_db;
}

// P_TX plus 10 log10 of the time-averaged sum over taps of ||H_n(t)||_F^2 / (N_R N_T).
// Throws InvalidInput for an empty realization.
double rsrp_fast_fading_db(double ptx_dbm, const ChannelRealization& realization);

// Index of the largest RSRP; the lowest index wins ties and NaN entries never win.
// Throws InvalidInput if no entry is a number.
std::size_t attach(std::span<const double> rsrp_db);

constexpr double coupling_gain_db(double serving_rsrp_db, double ptx_dbm) noexcept { return serving_rsrp_db - ptx_dbm; }

// 10 log10(S / sum of the other cells' linear powers). +infinity when there is no interferer.
// Throws InvalidInput if `serving` is out of range.
double geometry_factor_db(std::span<const double> rsrp_db, std::size_t serving);

// sqrt(sum P mu^2 / sum P) with mu the deviation (wrapped to [-pi, pi)) from the power-weighted
// circular mean. Angles in radians, result in degrees. Throws InvalidInput when the sizes differ or
// the total power is not positive.
double angular_spread_deg(std::span<const double> angles_rad, std::span<const double> powers);

// sqrt(sum P tau^2 / sum P - (sum P tau / sum P)^2), seconds.
double delay_spread_s(std::span<const double> delays, std::span<const double> powers);

// Eigenvalues of the time-averaged wideband covariance sum_n H_n H_n^H in descending order,
// padded with zeros up to `count`. Throws InvalidInput for an empty realization.
std::vector<double> top_eigenvalues(const ChannelRealization& realization, std::size_t count = 2);

// Descending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const CMatrix& hermitian);

struct CdfPoint {
    double value;
    double probability;
};

// Sorted finite samples with probabilities i/n, i = 1..n. Non-finite samples are dropped.
// Throws InvalidInput when no finite sample remains.
std::vector<CdfPoint> empirical_cdf(std::span<const double> samples);

// Value at probability p of the empirical CDF (smallest value whose probability reaches p).
double cdf_quantile(std::span<const CdfPoint> cdf, double p);

struct DropReport {
    std::size_t ue_id = 0;
    std::size_t site = 0;
    std::size_t cell = 0; // sector index within the site
    double cl_db = 0.0;
    double gf_db = 0.0;
    double asd = std::numeric_limits<double>::quiet_NaN();
    double asa = std::numeric_limits<double>::quiet_NaN();
    double esd = std::numeric_limits<double>::quiet_NaN();
    double esa = std::numeric_limits<double>::quiet_NaN();
    double ds = std::numeric_limits<double>::quiet_NaN();
    double l1 = std::numeric_limits<double>::quiet_NaN();
    double l2 = std::numeric_limits<double>::quiet_NaN();
};

// Comma-separated with one header line; absent values are written as "nan".
void write_report_csv(std::ostream& os, std::span<const DropReport> reports);

} // namespace chan3d

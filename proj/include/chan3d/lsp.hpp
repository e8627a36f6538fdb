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
#include <cstdint>
#include <string_view>
#include <vector>

namespace chan3d {

enum class Scenario { UMa, UMi };

// Propagation condition selecting the large-scale parameter table. Indoor UEs use O2I.
enum class LinkState { Los, Nlos, O2i };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(LinkState s) noexcept;

struct LinkGeometry {
    double d_2d = 0.0;
    double d_3d = 0.0;
    double h_bs = 25.0;
    double h_ue = 1.5;
    bool indoor = false;
    bool los = false;
};

// d_2d from the horizontal offset, d_3d including the height difference.
LinkGeometry make_link_geometry(const Vec3& bs, const Vec3& ue, bool indoor, bool los) noexcept;

LinkState link_state(const LinkGeometry& link) noexcept;

struct PathlossParams {
    double ue_height_correction_db_per_m = 0.6; // c_h in the NLOS term -c_h (h_ue - 1.5)
    double building_height_m = 20.0;            // UMa NLOS
    double street_width_m = 20.0;               // UMa NLOS
    double environment_height_m = 1.0;          // h_E for the LOS breakpoint distance
    double penetration_loss_db = 20.0;          // added to indoor links
    bool use_3d_distance = true;

    friend bool operator==(const PathlossParams&, const PathlossParams&) = default;
};

PathlossParams default_pathloss_params(Scenario scenario) noexcept;

// Dual-slope LOS / height-corrected NLOS pathloss in dB; NLOS is floored at the LOS value.
// Throws DegenerateGeometry if the distance used is not positive, InvalidInput for frequency <= 0.
double pathloss_db(Scenario scenario, const PathlossParams& params, const LinkGeometry& link, double frequency_hz);

// Slope of the NLOS pathloss per decade of distance divided by 10 (the exponent n in 10 n log10 d).
double nlos_pathloss_exponent(Scenario scenario, double h_bs) noexcept;

enum class LosModel {
    Exp18, // min(1, exp(-(d - d1) / d2))
    Itu,   // min(d1/d, 1)(1 - exp(-d/d2)) + exp(-d/d2), with the UMa UE-height term
};

struct LosProbabilitySpec {
    LosModel model = LosModel::Exp18;
    double d1_m = 18.0;
    double d2_m = 63.0;

    friend bool operator==(const LosProbabilitySpec&, const LosProbabilitySpec&) = default;
};

double los_probability(Scenario scenario, const LosProbabilitySpec& spec, double d_2d, double h_ue) noexcept;

// Order of the large-scale parameters in every 7-vector and 7x7 matrix.
enum class Lsp : std::size_t { SF = 0, K, DS, ASD, ASA, ESD, ESA };
inline constexpr std::size_t kLspCount = 7;
inline constexpr std::array<std::string_view, kLspCount> kLspNames{"SF", "K", "DS", "ASD", "ASA", "ESD", "ESA"};

// Bilinear table over (2D distance, UE height), clamped at the edges. A single height node makes
// it a function of distance only. Values are row-major [distance][height].
struct DistanceTable {
    std::vector<double> d_2d_m;
    std::vector<double> h_ue_m;
    std::vector<double> values;

    bool empty() const noexcept { return values.empty(); }
    double eval(double d_2d, double h_ue) const noexcept;
    // Throws InvalidInput on unsorted axes or a size mismatch.
    void validate() const;

    friend bool operator==(const DistanceTable&, const DistanceTable&) = default;
};

// Normal distribution (mu, sigma) of the LSP in its working domain: dB for SF and K,
// log10(seconds) for DS, log10(degrees) for the angular spreads. A non-empty mu_table replaces mu.
struct LspMarginal {
    double mu = 0.0;
    double sigma = 0.0;
    DistanceTable mu_table{};

    double mean_at(double d_2d, double h_ue) const noexcept { return mu_table.empty() ? mu : mu_table.eval(d_2d, h_ue); }

    friend bool operator==(const LspMarginal&, const LspMarginal&) = default;
};

struct LspStateSpec {
    std::array<LspMarginal, kLspCount> marginals{};
    std::array<double, kLspCount * kLspCount> correlation{}; // row-major, symmetric, unit diagonal
    std::array<double, kLspCount> decorrelation_m{};          // 0 disables spatial correlation

    const LspMarginal& marginal(Lsp l) const noexcept { return marginals[static_cast<std::size_t>(l)]; }

    friend bool operator==(const LspStateSpec&, const LspStateSpec&) = default;
};

struct LspDistributionSpec {
    LspStateSpec los{};
    LspStateSpec nlos{};
    LspStateSpec o2i{};

    const LspStateSpec& for_state(LinkState s) const noexcept;

    friend bool operator==(const LspDistributionSpec&, const LspDistributionSpec&) = default;
};

LspDistributionSpec default_lsp_spec(Scenario scenario);

struct LargeScaleParams {
    double sf_db = 0.0;
    double k_factor_db = 0.0;
    double ds = 0.0;  // seconds
    double asd = 0.0; // degrees, RMS
    double asa = 0.0;
    double esd = 0.0;
    double esa = 0.0;

    friend bool operator==(const LargeScaleParams&, const LargeScaleParams&) = default;
};

inline constexpr double kMaxAzimuthSpreadDeg = 104.0;
inline constexpr double kMaxZenithSpreadDeg = 52.0;

// Lower-triangular factor L with L L^T = C for a symmetric positive semi-definite C (zero
// columns where C is singular). Throws InvalidInput if C is not symmetric PSD with unit diagonal.
std::array<double, kLspCount * kLspCount> psd_cholesky(const std::array<double, kLspCount * kLspCount>& c);

// Validated LSP distributions with their correlation factors.
class LspModel {
public:
    // Throws InvalidInput naming the state and LSP on any invalid entry.
    explicit LspModel(LspDistributionSpec spec);

    const LspDistributionSpec& spec() const noexcept { return spec_; }

    // Maps independent standard normals through the correlation factor and the marginals.
    LargeScaleParams from_normals(const LinkGeometry& link, const std::array<double, kLspCount>& z) const;

    LargeScaleParams draw(const LinkGeometry& link, Rng& rng) const;

private:
    LspDistributionSpec spec_;
    std::array<std::array<double, kLspCount * kLspCount>, 3> factors_{};
};

std::array<double, kLspCount> draw_standard_normals(Rng& rng);

// One-shot draw; validates `spec` on every call.
LargeScaleParams draw_lsps(const LspDistributionSpec& spec, const LinkGeometry& link, Rng& rng);

// The single LSP draw of a (UE, site) pair. Every cell of the site gets bitwise the same result.
LargeScaleParams shared_site_lsps(const LspModel& model, const LinkGeometry& link, std::uint64_t master_seed,
                                  std::size_t ue_id, std::size_t site_id);

// Unit-variance Gaussian field on a regular grid with correlation exp(-|dx|/d) exp(-|dy|/d),
// produced by first-order recursive filtering of white noise along both axes.
class CorrelatedField {
public:
    CorrelatedField(double x_min, double y_min, double x_max, double y_max, double spacing_m,
                    double decorrelation_m, Rng& rng);

    // Value at the grid node nearest to (x, y), clamped to the grid.
    double at(double x, double y) const noexcept;

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }

private:
    double x0_, y0_, spacing_;
    std::size_t nx_, ny_;
    std::vector<double> values_;
};

} // namespace chan3d

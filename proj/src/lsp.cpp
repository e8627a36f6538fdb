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

#include "chan3d/lsp.hpp"

#include "chan3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chan3d {

std::string_view to_string(Scenario s) noexcept
{
    return s == Scenario::UMa ? "UMa" : "UMi";
}

std::string_view to_string(LinkState s) noexcept
{
    switch (s) {
    case LinkState::Los: return "los";
    case LinkState::Nlos: return "nlos";
    case LinkState::O2i: return "o2i";
    }
    return "?";
}

LinkGeometry make_link_geometry(const Vec3& bs, const Vec3& ue, bool indoor, bool los) noexcept
{
    LinkGeometry g;
    g.d_2d = horizontal_distance(bs, ue);
    g.h_bs = bs.z;
    g.h_ue = ue.z;
    g.d_3d = std::hypot(g.d_2d, bs.z - ue.z);
    g.indoor = indoor;
    g.los = los;
    return g;
}

LinkState link_state(const LinkGeometry& link) noexcept
{
    if (link.indoor)
        return LinkState::O2i;
    return link.los ? LinkState::Los : LinkState::Nlos;
}

PathlossParams default_pathloss_params(Scenario scenario) noexcept
{
    PathlossParams p;
    if (scenario == Scenario::UMi)
        p.ue_height_correction_db_per_m = 0.3;
    return p;
}

namespace {

double los_pathloss(const PathlossParams& p, const LinkGeometry& link, double d, double fc_ghz)
{
    const double d_bp = 4.0 * (link.h_bs - p.environment_height_m) * (link.h_ue - p.environment_height_m) *
                        (fc_ghz * 1e9) / kSpeedOfLight;
    const double near = 22.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc_ghz);
    if (link.d_2d <= d_bp)
        return near;
    // With 2D distances the height term is dropped so both slopes still meet at the breakpoint.
    const double dh = p.use_3d_distance ? link.h_bs - link.h_ue : 0.0;
    return 40.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc_ghz) - 9.0 * std::log10(d_bp * d_bp + dh * dh);
}

double uma_nlos_pathloss(const PathlossParams& p, const LinkGeometry& link, double d, double fc_ghz)
{
    const double w = p.street_width_m;
    const double h = p.building_height_m;
    const double hb = link.h_bs;
    const double l17 = std::log10(17.625);
    return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
           (24.37 - 3.7 * (h / hb) * (h / hb)) * std::log10(hb) +
           (43.42 - 3.1 * std::log10(hb)) * (std::log10(d) - 3.0) + 20.0 * std::log10(fc_ghz) -
           (3.2 * l17 * l17 - 4.97) - p.ue_height_correction_db_per_m * (link.h_ue - 1.5);
}

double umi_nlos_pathloss(const PathlossParams& p, const LinkGeometry& link, double d, double fc_ghz)
{
    return 36.7 * std::log10(d) + 22.7 + 26.0 * std::log10(fc_ghz) -
           p.ue_height_correction_db_per_m * (link.h_ue - 1.5);
}

} // namespace

double pathloss_db(Scenario scenario, const PathlossParams& params, const LinkGeometry& link, double frequency_hz)
{
    if (!(frequency_hz > 0.0))
        throw InvalidInput("pathloss_db: frequency must be positive");
    const double d = params.use_3d_distance ? link.d_3d : link.d_2d;
    if (!(d > 0.0))
        throw DegenerateGeometry("pathloss_db: link distance must be positive");
    const double fc = frequency_hz / 1e9;

    double pl = los_pathloss(params, link, d, fc);
    if (link.indoor || !link.los) {
        const double nlos = scenario == Scenario::UMa ? uma_nlos_pathloss(params, link, d, fc)
                                                      : umi_nlos_pathloss(params, link, d, fc);
        pl = std::max(pl, nlos);
    }
    if (link.indoor)
        pl += params.penetration_loss_db;
    return pl;
}

double nlos_pathloss_exponent(Scenario scenario, double h_bs) noexcept
{
    return scenario == Scenario::UMa ? (43.42 - 3.1 * std::log10(h_bs)) / 10.0 : 3.67;
}

double los_probability(Scenario scenario, const LosProbabilitySpec& spec, double d_2d, double h_ue) noexcept
{
    if (d_2d <= 0.0)
        return 1.0;
    if (spec.model == LosModel::Exp18)
        return d_2d <= spec.d1_m ? 1.0 : std::exp(-(d_2d - spec.d1_m) / spec.d2_m);

    const double e = std::exp(-d_2d / spec.d2_m);
    double p = std::min(spec.d1_m / d_2d, 1.0) * (1.0 - e) + e;
    if (scenario == Scenario::UMa && h_ue > 13.0 && d_2d > 18.0) {
        const double g = 1.25e-6 * d_2d * d_2d * d_2d * std::exp(-d_2d / 150.0);
        p *= 1.0 + std::pow((h_ue - 13.0) / 10.0, 1.5) * g;
    }
    return std::min(p, 1.0);
}

namespace {

std::size_t bracket(const std::vector<double>& axis, double x, double& frac) noexcept
{
    if (axis.size() == 1 || x <= axis.front()) {
        frac = 0.0;
        return 0;
    }
    if (x >= axis.back()) {
        frac = 1.0;
        return axis.size() - 2;
    }
    const auto it = std::upper_bound(axis.begin(), axis.end(), x);
    const auto i = static_cast<std::size_t>(it - axis.begin()) - 1;
    frac = (x - axis[i]) / (axis[i + 1] - axis[i]);
    return i;
}

} // namespace

double DistanceTable::eval(double d_2d, double h_ue) const noexcept
{
    const std::size_t nh = h_ue_m.size();
    double fd = 0.0;
    double fh = 0.0;
    const std::size_t i = bracket(d_2d_m, d_2d, fd);
    const std::size_t j = bracket(h_ue_m, h_ue, fh);
    const std::size_t i1 = d_2d_m.size() > 1 ? i + 1 : i;
    const std::size_t j1 = nh > 1 ? j + 1 : j;
    const double v00 = values[i * nh + j];
    const double v01 = values[i * nh + j1];
    const double v10 = values[i1 * nh + j];
    const double v11 = values[i1 * nh + j1];
    return (1.0 - fd) * ((1.0 - fh) * v00 + fh * v01) + fd * ((1.0 - fh) * v10 + fh * v11);
}

void DistanceTable::validate() const
{
    if (empty())
        return;
    if (d_2d_m.empty() || h_ue_m.empty())
        throw InvalidInput("table axes must not be empty");
    if (values.size() != d_2d_m.size() * h_ue_m.size())
        throw InvalidInput("table has " + std::to_string(values.size()) + " values, expected " +
                           std::to_string(d_2d_m.size() * h_ue_m.size()));
    for (const auto* axis : {&d_2d_m, &h_ue_m})
        for (std::size_t i = 1; i < axis->size(); ++i)
            if (!((*axis)[i] > (*axis)[i - 1]))
                throw InvalidInput("table axis must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidInput("table values must be finite");
}

const LspStateSpec& LspDistributionSpec::for_state(LinkState s) const noexcept
{
    switch (s) {
    case LinkState::Los: return los;
    case LinkState::Nlos: return nlos;
    case LinkState::O2i: return o2i;
    }
    return nlos;
}

std::array<double, kLspCount * kLspCount> psd_cholesky(const std::array<double, kLspCount * kLspCount>& c)
{
    constexpr std::size_t n = kLspCount;
    constexpr double tol = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(c[i * n + i] - 1.0) > tol)
            throw InvalidInput("correlation matrix must have a unit diagonal");
        for (std::size_t j = 0; j < i; ++j) {
            if (!std::isfinite(c[i * n + j]) || std::abs(c[i * n + j] - c[j * n + i]) > tol)
                throw InvalidInput("correlation matrix must be symmetric");
        }
    }

    std::array<double, n * n> l{};
    for (std::size_t j = 0; j < n; ++j) {
        double d = c[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            d -= l[j * n + k] * l[j * n + k];
        if (d < -tol)
            throw InvalidInput("correlation matrix is not positive semi-definite");
        const bool singular = d <= 1e-12;
        l[j * n + j] = singular ? 0.0 : std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = c[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                v -= l[i * n + k] * l[j * n + k];
            if (singular) {
                if (std::abs(v) > 1e-6)
                    throw InvalidInput("correlation matrix is not positive semi-definite");
                l[i * n + j] = 0.0;
            } else {
                l[i * n + j] = v / l[j * n + j];
            }
        }
    }
    return l;
}

namespace {

constexpr std::array<LinkState, 3> kStates{LinkState::Los, LinkState::Nlos, LinkState::O2i};

void validate_state(const LspStateSpec& s, LinkState state)
{
    const std::string base = "lsp." + std::string(to_string(state));
    for (std::size_t i = 0; i < kLspCount; ++i) {
        const auto& m = s.marginals[i];
        const std::string field = base + ".marginals." + std::string(kLspNames[i]);
        if (!std::isfinite(m.mu))
            throw ConfigError(field + ".mu", "must be finite");
        if (!std::isfinite(m.sigma) || m.sigma < 0.0)
            throw ConfigError(field + ".sigma", "must be finite and non-negative");
        try {
            m.mu_table.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError(field + ".mu_table", e.what());
        }
        if (!std::isfinite(s.decorrelation_m[i]) || s.decorrelation_m[i] < 0.0)
            throw ConfigError(base + ".decorrelation_m", "must be finite and non-negative");
    }
}

} // namespace

LspModel::LspModel(LspDistributionSpec spec) : spec_(std::move(spec))
{
    for (std::size_t k = 0; k < kStates.size(); ++k) {
        const LspStateSpec& s = spec_.for_state(kStates[k]);
        validate_state(s, kStates[k]);
        try {
            factors_[k] = psd_cholesky(s.correlation);
        } catch (const InvalidInput& e) {
            throw ConfigError("lsp." + std::string(to_string(kStates[k])) + ".correlation", e.what());
        }
    }
}

LargeScaleParams LspModel::from_normals(const LinkGeometry& link, const std::array<double, kLspCount>& z) const
{
    const LinkState state = link_state(link);
    const LspStateSpec& s = spec_.for_state(state);
    const auto& l = factors_[static_cast<std::size_t>(state)];

    std::array<double, kLspCount> v{};
    for (std::size_t i = 0; i < kLspCount; ++i) {
        double y = 0.0;
        for (std::size_t k = 0; k <= i; ++k)
            y += l[i * kLspCount + k] * z[k];
        const auto& m = s.marginals[i];
        v[i] = m.mean_at(link.d_2d, link.h_ue) + m.sigma * y;
    }

    LargeScaleParams p;
    p.sf_db = v[0];
    p.k_factor_db = v[1];
    p.ds = std::pow(10.0, v[2]);
    p.asd = std::min(std::pow(10.0, v[3]), kMaxAzimuthSpreadDeg);
    p.asa = std::min(std::pow(10.0, v[4]), kMaxAzimuthSpreadDeg);
    p.esd = std::min(std::pow(10.0, v[5]), kMaxZenithSpreadDeg);
    p.esa = std::min(std::pow(10.0, v[6]), kMaxZenithSpreadDeg);
    return p;
}

std::array<double, kLspCount> draw_standard_normals(Rng& rng)
{
    std::normal_distribution<double> n01;
    std::array<double, kLspCount> z{};
    for (double& x : z)
        x = n01(rng);
    return z;
}

LargeScaleParams LspModel::draw(const LinkGeometry& link, Rng& rng) const
{
    return from_normals(link, draw_standard_normals(rng));
}

LargeScaleParams draw_lsps(const LspDistributionSpec& spec, const LinkGeometry& link, Rng& rng)
{
    return LspModel(spec).draw(link, rng);
}

LargeScaleParams shared_site_lsps(const LspModel& model, const LinkGeometry& link, std::uint64_t master_seed,
                                  std::size_t ue_id, std::size_t site_id)
{
    Rng rng = substream(master_seed, StreamTag::LargeScale, {ue_id, site_id});
    return model.draw(link, rng);
}

CorrelatedField::CorrelatedField(double x_min, double y_min, double x_max, double y_max, double spacing_m,
                                 double decorrelation_m, Rng& rng)
    : x0_(x_min), y0_(y_min), spacing_(spacing_m)
{
    if (!(spacing_m > 0.0) || !(decorrelation_m > 0.0) || !(x_max >= x_min) || !(y_max >= y_min))
        throw InvalidInput("CorrelatedField: invalid extent, spacing or decorrelation distance");
    nx_ = static_cast<std::size_t>(std::ceil((x_max - x_min) / spacing_m)) + 1;
    ny_ = static_cast<std::size_t>(std::ceil((y_max - y_min) / spacing_m)) + 1;
    values_.resize(nx_ * ny_);

    std::normal_distribution<double> n01;
    for (double& v : values_)
        v = n01(rng);

    const double rho = std::exp(-spacing_m / decorrelation_m);
    const double innov = std::sqrt(1.0 - rho * rho);
    for (std::size_t j = 0; j < ny_; ++j) {
        double* row = values_.data() + j * nx_;
        for (std::size_t i = 1; i < nx_; ++i)
            row[i] = rho * row[i - 1] + innov * row[i];
    }
    for (std::size_t j = 1; j < ny_; ++j) {
        double* row = values_.data() + j * nx_;
        const double* prev = row - nx_;
        for (std::size_t i = 0; i < nx_; ++i)
            row[i] = rho * prev[i] + innov * row[i];
    }
}

double CorrelatedField::at(double x, double y) const noexcept
{
    const auto idx = [this](double v, double origin, std::size_t n) {
        const double k = std::round((v - origin) / spacing_);
        if (!(k > 0.0))
            return std::size_t{0};
        return std::min(static_cast<std::size_t>(k), n - 1);
    };
    return values_[idx(y, y0_, ny_) * nx_ + idx(x, x0_, nx_)];
}

} // namespace chan3d

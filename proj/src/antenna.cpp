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

#include "chan3d/antenna.hpp"

#include "chan3d/errors.hpp"
#include "chan3d/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chan3d {
namespace {

double clipped_pattern_db(const PatternSpec& s, const AngleVector& local, double vertical_floor)
{
    const double phi = rad2deg(wrap_azimuth(local.azimuth));
    const double theta = rad2deg(local.zenith);
    const double a_h = -std::min(12.0 * (phi / s.phi_3db_deg) * (phi / s.phi_3db_deg), s.a_m_db);
    const double dv = (theta - 90.0 - s.tilt_deg) / s.theta_3db_deg;
    const double a_v = -std::min(12.0 * dv * dv, vertical_floor);
    return s.g_max_dbi - std::min(-(a_h + a_v), s.a_m_db);
}

constexpr double kWeightTol = 1e-9;

} // namespace

void PatternSpec::validate() const
{
    if (!(phi_3db_deg > 0.0) || !(theta_3db_deg > 0.0))
        throw InvalidInput("pattern beamwidths must be positive");
    if (!(a_m_db > 0.0) || !(sla_v_db > 0.0))
        throw InvalidInput("pattern attenuation floors must be positive");
}

double element_gain_db(const PatternSpec& spec, const AngleVector& local)
{
    return clipped_pattern_db(spec, local, spec.sla_v_db);
}

double port_gain_itu_db(const PatternSpec& spec, const AngleVector& local)
{
    return clipped_pattern_db(spec, local, spec.a_m_db);
}

FieldPair slant_fields_36814(double gain_linear, double alpha)
{
    if (gain_linear < 0.0)
        throw InvalidInput("slant_fields_36814: negative gain");
    const double a = std::sqrt(gain_linear);
    return {a * std::cos(alpha), a * std::sin(alpha)};
}

double PatternModel::gain_db(const AngleVector& local) const
{
    switch (kind) {
    case PatternKind::Isotropic:
        return 0.0;
    case PatternKind::Element3gpp:
        return element_gain_db(spec, local);
    case PatternKind::ItuPort:
        return port_gain_itu_db(spec, local);
    }
    return 0.0;
}

ArrayGeometry::ArrayGeometry(std::vector<ArrayElement> elements, std::vector<AntennaPort> ports)
    : elements_(std::move(elements)), ports_(std::move(ports))
{
    if (elements_.empty())
        throw InvalidInput("array geometry needs at least one element");
    std::vector<int> owner(elements_.size(), 0);
    for (std::size_t p = 0; p < ports_.size(); ++p) {
        const AntennaPort& port = ports_[p];
        if (port.elements.empty() || port.elements.size() != port.weights.size())
            throw InvalidInput("port " + std::to_string(p) + ": member and weight counts differ");
        double power = 0.0;
        for (std::size_t i = 0; i < port.elements.size(); ++i) {
            if (port.elements[i] >= elements_.size())
                throw InvalidInput("port " + std::to_string(p) + ": element index out of range");
            ++owner[port.elements[i]];
            power += std::norm(port.weights[i]);
        }
        if (std::abs(power - 1.0) > kWeightTol)
            throw InvalidInput("port " + std::to_string(p) + ": weights must have unit total power");
    }
    if (std::any_of(owner.begin(), owner.end(), [](int n) { return n != 1; }))
        throw InvalidInput("every element must belong to exactly one port");
}

ArrayGeometry ArrayGeometry::single_element(double slant)
{
    return ArrayGeometry({ArrayElement{{}, slant}}, {AntennaPort{{0}, {cdouble{1.0, 0.0}}, std::nullopt}});
}

ArrayGeometry ArrayGeometry::uniform_panel(const PanelSpec& spec, double wavelength)
{
    if (spec.rows == 0 || spec.columns == 0)
        throw InvalidInput("panel needs at least one row and one column");
    if (!(spec.d_v > 0.0) || !(spec.d_h > 0.0))
        throw InvalidInput("panel spacings must be positive");
    if (spec.elements_per_port == 0 || spec.rows % spec.elements_per_port != 0)
        throw InvalidInput("elements per port must divide the row count");
    if (!(wavelength > 0.0))
        throw InvalidInput("wavelength must be positive");

    const std::size_t npol = spec.polarization == Polarization::Cross ? 2 : 1;
    const std::size_t k = spec.elements_per_port;
    const std::vector<cdouble> weights = downtilt_weights(k, spec.d_v, spec.tilt_zenith);
    const Vec3 step{0.0, 0.0, spec.d_v * wavelength};

    std::vector<ArrayElement> elements;
    elements.reserve(spec.rows * spec.columns * npol);
    auto index_of = [&](std::size_t col, std::size_t row, std::size_t pol) { return (col * spec.rows + row) * npol + pol; };
    for (std::size_t col = 0; col < spec.columns; ++col) {
        for (std::size_t row = 0; row < spec.rows; ++row) {
            const Vec3 pos{0.0, static_cast<double>(col) * spec.d_h * wavelength, static_cast<double>(row) * spec.d_v * wavelength};
            for (std::size_t pol = 0; pol < npol; ++pol)
                elements.push_back({pos, pol == 0 ? spec.slant : -spec.slant});
        }
    }

    std::vector<AntennaPort> ports;
    for (std::size_t col = 0; col < spec.columns; ++col) {
        for (std::size_t pol = 0; pol < npol; ++pol) {
            for (std::size_t sub = 0; sub < spec.rows / k; ++sub) {
                AntennaPort port;
                for (std::size_t i = 0; i < k; ++i)
                    port.elements.push_back(index_of(col, sub * k + i, pol));
                port.weights = weights;
                if (k > 1)
                    port.uniform_step = step;
                ports.push_back(std::move(port));
            }
        }
    }
    return ArrayGeometry(std::move(elements), std::move(ports));
}

const AntennaPort& ArrayGeometry::port(std::size_t index) const
{
    if (index >= ports_.size())
        throw InvalidInput("unknown antenna port " + std::to_string(index));
    return ports_[index];
}

std::vector<Vec3> ArrayGeometry::positions() const
{
    std::vector<Vec3> out;
    out.reserve(elements_.size());
    for (const ArrayElement& e : elements_)
        out.push_back(e.position);
    return out;
}

std::vector<cdouble> array_response(std::span<const Vec3> positions, const WaveVector& k)
{
    const Vec3 kv = k.vector();
    std::vector<double> phase(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        phase[i] = dot(kv, positions[i]);
    std::vector<cdouble> out(positions.size());
    simd::kernels().cis(phase.data(), out.data(), out.size());
    return out;
}

std::vector<cdouble> array_response(const ArrayGeometry& geometry, const WaveVector& k)
{
    const std::vector<Vec3> pos = geometry.positions();
    return array_response(pos, k);
}

std::vector<cdouble> virtualize_port(const CMatrix& per_element, const ArrayGeometry& geometry, std::size_t port)
{
    const AntennaPort& p = geometry.port(port);
    if (static_cast<std::size_t>(per_element.rows()) != geometry.size())
        throw InvalidInput("virtualize_port: element rows do not match the array geometry");
    const auto n_rx = static_cast<std::size_t>(per_element.cols());
    std::vector<cdouble> out(n_rx, cdouble{});
    for (std::size_t i = 0; i < p.elements.size(); ++i) {
        const cdouble* row = per_element.data() + p.elements[i] * n_rx;
        simd::kernels().caxpy(p.weights[i], row, out.data(), n_rx);
    }
    return out;
}

CMatrix to_port_space(const CMatrix& rx_by_element, const ArrayGeometry& geometry)
{
    const CMatrix per_element = rx_by_element.transpose();
    CMatrix out(rx_by_element.rows(), static_cast<Eigen::Index>(geometry.port_count()));
    for (std::size_t s = 0; s < geometry.port_count(); ++s) {
        const std::vector<cdouble> col = virtualize_port(per_element, geometry, s);
        for (std::size_t u = 0; u < col.size(); ++u)
            out(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(s)) = col[u];
    }
    return out;
}

std::vector<cdouble> downtilt_weights(std::size_t m, double d_v, double theta_tilt)
{
    if (m == 0)
        throw InvalidInput("downtilt_weights: need at least one element");
    if (!(d_v > 0.0))
        throw InvalidInput("downtilt_weights: spacing must be positive");
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<cdouble> w(m);
    for (std::size_t i = 0; i < m; ++i)
        w[i] = std::polar(norm, -kTwoPi * d_v * static_cast<double>(i) * std::cos(theta_tilt));
    return w;
}

void port_array_gain(const ArrayGeometry& geometry, std::size_t port, std::span<const AngleVector> local,
                     double wavelength, std::span<double> out)
{
    const AntennaPort& p = geometry.port(port);
    if (out.size() != local.size())
        throw InvalidInput("port_array_gain: output size mismatch");
    const double k = kTwoPi / wavelength;
    const auto& kern = simd::kernels();
    if (p.uniform_step) {
        std::vector<double> psi(local.size());
        for (std::size_t i = 0; i < local.size(); ++i)
            psi[i] = k * dot(unit_vector(local[i]), *p.uniform_step);
        kern.array_factor_power(p.weights.data(), p.weights.size(), psi.data(), out.data(), out.size());
        return;
    }
    const std::size_t m = p.elements.size();
    std::vector<double> phase(m);
    std::vector<cdouble> resp(m);
    for (std::size_t i = 0; i < local.size(); ++i) {
        const Vec3 dir = unit_vector(local[i]);
        for (std::size_t e = 0; e < m; ++e)
            phase[e] = k * dot(dir, geometry.elements()[p.elements[e]].position);
        kern.cis(phase.data(), resp.data(), m);
        cdouble acc{};
        for (std::size_t e = 0; e < m; ++e)
            acc += p.weights[e] * resp[e];
        out[i] = std::norm(acc);
    }
}

void composite_gain_db(const PatternModel& element, const ArrayGeometry& geometry, std::size_t port,
                       std::span<const AngleVector> local, double wavelength, std::span<double> out)
{
    port_array_gain(geometry, port, local, wavelength, out);
    for (std::size_t i = 0; i < local.size(); ++i)
        out[i] = element.gain_db(local[i]) + linear_to_db(std::max(out[i], 1e-300));
}

FieldPair Antenna::element_field(std::size_t element, const AngleVector& global) const
{
    const double slant = geometry.elements().at(element).slant;
    if (field_model == FieldModel::Slant36814)
        return slant_fields_36814(db_to_linear(pattern.gain_db(to_local(orientation, global))), slant);
    const Rotation r = orientation * Rotation::from_euler(0.0, 0.0, slant);
    const double amp = db_to_amplitude(pattern.gain_db(to_local(r, global)));
    return field_lcs_to_gcs({amp, 0.0}, r, global);
}

std::vector<cdouble> Antenna::response(const AngleVector& global, double frequency_hz) const
{
    return array_response(geometry, wave_vector(frequency_hz, to_local(orientation, global)));
}

} // namespace chan3d

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

#include "chan3d/geom.hpp"

#include "chan3d/errors.hpp"

namespace chan3d {

double wrap_azimuth(double azimuth) noexcept
{
    double a = azimuth - kTwoPi * std::floor((azimuth + kPi) / kTwoPi);
    if (a >= kPi)
        a -= kTwoPi;
    if (a < -kPi)
        a = -kPi;
    return a;
}

Vec3 unit_vector(const AngleVector& angles) noexcept
{
    const double st = std::sin(angles.zenith);
    return {st * std::cos(angles.azimuth), st * std::sin(angles.azimuth), std::cos(angles.zenith)};
}

AngleVector direction_angles(const Vec3& d)
{
    const double rho = std::hypot(d.x, d.y);
    if (rho == 0.0 && d.z == 0.0)
        throw DegenerateGeometry("direction_angles: zero-length direction");
    // atan2 returns (-pi, pi]; only exactly pi needs folding.
    double az = std::atan2(d.y, d.x);
    if (az >= kPi)
        az = -kPi;
    return {az, std::atan2(rho, d.z)};
}

Vec3 theta_hat(const AngleVector& a) noexcept
{
    const double ct = std::cos(a.zenith), st = std::sin(a.zenith);
    return {ct * std::cos(a.azimuth), ct * std::sin(a.azimuth), -st};
}

Vec3 phi_hat(const AngleVector& a) noexcept
{
    return {-std::sin(a.azimuth), std::cos(a.azimuth), 0.0};
}

double wavelength(double frequency_hz)
{
    if (!(frequency_hz > 0.0))
        throw InvalidInput("carrier frequency must be positive");
    return kSpeedOfLight / frequency_hz;
}

WaveVector wave_vector(double frequency_hz, const AngleVector& angles)
{
    if (!(frequency_hz > 0.0))
        throw InvalidInput("wave_vector: frequency must be positive");
    return {unit_vector(angles), kTwoPi * frequency_hz / kSpeedOfLight};
}

double doppler_phase(const WaveVector& k, const Vec3& velocity, double t) noexcept
{
    return dot(k.direction, velocity) * k.magnitude * t;
}

LosAngles los_angles(const Vec3& tx_pos, const Vec3& rx_pos)
{
    if (tx_pos == rx_pos)
        throw DegenerateGeometry("los_angles: transmitter and receiver coincide");
    return {direction_angles(rx_pos - tx_pos), direction_angles(tx_pos - rx_pos)};
}

Rotation Rotation::from_euler(double bearing, double downtilt, double slant) noexcept
{
    const double ca = std::cos(bearing), sa = std::sin(bearing);
    const double cb = std::cos(downtilt), sb = std::sin(downtilt);
    const double cg = std::cos(slant), sg = std::sin(slant);
    return Rotation({
        ca * cb, ca * sb * sg - sa * cg, ca * sb * cg + sa * sg,
        sa * cb, sa * sb * sg + ca * cg, sa * sb * cg - ca * sg,
        -sb,     cb * sg,                cb * cg,
    });
}

Vec3 Rotation::apply(const Vec3& v) const noexcept
{
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z,
            m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

Vec3 Rotation::apply_inverse(const Vec3& v) const noexcept
{
    return {m_[0] * v.x + m_[3] * v.y + m_[6] * v.z,
            m_[1] * v.x + m_[4] * v.y + m_[7] * v.z,
            m_[2] * v.x + m_[5] * v.y + m_[8] * v.z};
}

bool Rotation::is_proper(double tol) const noexcept
{
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += (*this)(k, i) * (*this)(k, j);
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol)
                return false;
        }
    }
    const Vec3 c0{m_[0], m_[3], m_[6]}, c1{m_[1], m_[4], m_[7]}, c2{m_[2], m_[5], m_[8]};
    return std::abs(dot(cross(c0, c1), c2) - 1.0) <= tol;
}

Rotation operator*(const Rotation& a, const Rotation& b) noexcept
{
    std::array<double, 9> out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                out[static_cast<std::size_t>(3 * i + j)] += a(i, k) * b(k, j);
    return Rotation(out);
}

AngleVector to_local(const Rotation& r, const AngleVector& global) noexcept
{
    // unit input, so never zero length
    return direction_angles(r.apply_inverse(unit_vector(global)));
}

FieldPair field_lcs_to_gcs(const FieldPair& local, const Rotation& r, const AngleVector& global_direction)
{
    if (!r.is_proper())
        throw InvalidInput("field_lcs_to_gcs: orientation is not a proper rotation");
    const AngleVector loc = to_local(r, global_direction);
    const Vec3 th_l = r.apply(theta_hat(loc));
    const Vec3 ph_l = r.apply(phi_hat(loc));
    const Vec3 th_g = theta_hat(global_direction);
    const Vec3 ph_g = phi_hat(global_direction);
    return {dot(th_g, th_l) * local.vertical + dot(th_g, ph_l) * local.horizontal,
            dot(ph_g, th_l) * local.vertical + dot(ph_g, ph_l) * local.horizontal};
}

} // namespace chan3d

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

#include <array>
#include <cmath>
#include <numbers>

namespace chan3d {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) noexcept { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) noexcept { return rad * (180.0 / kPi); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3& operator+=(const Vec3& o) noexcept { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) noexcept { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) noexcept { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) noexcept { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) noexcept { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) noexcept { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) noexcept { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) noexcept { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) noexcept
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }
inline double horizontal_distance(const Vec3& a, const Vec3& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

// Reduces an azimuth into [-pi, pi).
double wrap_azimuth(double azimuth) noexcept;

// Spatial direction. Azimuth in [-pi, pi) from +x towards +y; zenith in [0, pi] measured from +z,
// so zenith = pi/2 is the horizon and a downtilted beam has zenith > pi/2.
struct AngleVector {
    double azimuth = 0.0;
    double zenith = kPi / 2.0;

    friend constexpr bool operator==(const AngleVector&, const AngleVector&) = default;
};

// (sin z cos a, sin z sin a, cos z)
Vec3 unit_vector(const AngleVector& angles) noexcept;

// Angles of a non-zero direction. Throws DegenerateGeometry for the zero vector.
AngleVector direction_angles(const Vec3& direction);

// Spherical basis vectors at a direction: e_theta (vertical polarization) and e_phi (horizontal).
Vec3 theta_hat(const AngleVector& angles) noexcept;
Vec3 phi_hat(const AngleVector& angles) noexcept;

struct WaveVector {
    Vec3 direction;   // unit
    double magnitude; // rad/m

    Vec3 vector() const noexcept { return direction * magnitude; }
};

double wavelength(double frequency_hz);

// |k| = 2 pi f / c along unit_vector(angles). Throws InvalidInput for frequency <= 0.
WaveVector wave_vector(double frequency_hz, const AngleVector& angles);

// Argument of exp(j k.v t).
double doppler_phase(const WaveVector& k, const Vec3& velocity, double t) noexcept;

struct LosAngles {
    AngleVector departure; // at the transmitter, pointing to the receiver
    AngleVector arrival;   // at the receiver, pointing back to the transmitter
};

// Throws DegenerateGeometry when tx == rx.
LosAngles los_angles(const Vec3& tx_pos, const Vec3& rx_pos);

// Row-major 3x3 matrix mapping local (antenna) coordinates to global coordinates.
class Rotation {
public:
    Rotation() noexcept : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}
    explicit Rotation(const std::array<double, 9>& rows) noexcept : m_(rows) {}

    // R = Rz(bearing) * Ry(downtilt) * Rx(slant); all radians. Positive downtilt tips boresight below the horizon.
    static Rotation from_euler(double bearing, double downtilt, double slant) noexcept;

    Vec3 apply(const Vec3& local) const noexcept;
    Vec3 apply_inverse(const Vec3& global) const noexcept;

    double operator()(int row, int col) const noexcept { return m_[static_cast<std::size_t>(3 * row + col)]; }
    const std::array<double, 9>& rows() const noexcept { return m_; }

    // Orthonormal with determinant +1 within `tol`.
    bool is_proper(double tol = 1e-9) const noexcept;

    friend Rotation operator*(const Rotation& a, const Rotation& b) noexcept;
    friend bool operator==(const Rotation&, const Rotation&) = default;

private:
    std::array<double, 9> m_;
};

// Direction expressed in the frame of an antenna with orientation `r`.
AngleVector to_local(const Rotation& r, const AngleVector& global) noexcept;

// Polarized field amplitude pair (vertical = e_theta component, horizontal = e_phi component).
struct FieldPair {
    double vertical = 0.0;
    double horizontal = 0.0;
};

// Maps field components given in the antenna's local spherical basis to the global basis at
// `global_direction`. The local basis is the one of the local direction to_local(r, global_direction).
// Throws InvalidInput if `r` is not a proper rotation.
FieldPair field_lcs_to_gcs(const FieldPair& local, const Rotation& r, const AngleVector& global_direction);

} // namespace chan3d

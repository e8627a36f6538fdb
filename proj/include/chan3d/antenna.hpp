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
#include "chan3d/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace chan3d {

// Parameters of the separable min-clipped pattern
//   A(phi, theta) = G_max - min{ -(A_H(phi) + A_V(theta)), A_m }
//   A_H = -min[12 (phi / phi_3dB)^2, A_m],  A_V = -min[12 ((theta - theta_peak) / theta_3dB)^2, floor_V]
// with theta_peak = 90 deg + tilt_deg (zenith convention, tilt measured below the horizon).
struct PatternSpec {
    double g_max_dbi = 8.0;
    double a_m_db = 30.0;
    double sla_v_db = 30.0;
    double phi_3db_deg = 65.0;
    double theta_3db_deg = 65.0;
    double tilt_deg = 0.0;

    // 3GPP 3D element: 8 dBi, A_m = SLA_V = 30 dB, 65 deg beamwidths, untilted.
    static PatternSpec element_3gpp() noexcept { return {}; }
    // ITU port: 17 dBi, A_m = 20 dB (also the vertical floor), 70 deg / 15 deg beamwidths.
    static PatternSpec itu_port(double tilt_deg) noexcept { return {17.0, 20.0, 20.0, 70.0, 15.0, tilt_deg}; }

    // Throws InvalidInput on non-positive widths or floors.
    void validate() const;

    friend bool operator==(const PatternSpec&, const PatternSpec&) = default;
};

// Element pattern in dBi; `local` is the direction in the antenna frame (boresight at azimuth 0,
// zenith 90 deg). Vertical floor is sla_v_db.
double element_gain_db(const PatternSpec& spec, const AngleVector& local);

// ITU port pattern in dBi; identical structure with a_m_db as the vertical floor.
double port_gain_itu_db(const PatternSpec& spec, const AngleVector& local);

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) noexcept { return 10.0 * std::log10(lin); }
inline double db_to_amplitude(double db) noexcept { return std::sqrt(db_to_linear(db)); }

// Angle-independent slant decomposition: (sqrt(A) cos alpha, sqrt(A) sin alpha).
FieldPair slant_fields_36814(double gain_linear, double alpha);

enum class PatternKind { Isotropic, Element3gpp, ItuPort };

struct PatternModel {
    PatternKind kind = PatternKind::Isotropic;
    PatternSpec spec{};

    double gain_db(const AngleVector& local) const;

    friend bool operator==(const PatternModel&, const PatternModel&) = default;
};

enum class Polarization { Single, Cross };

// Uniform rectangular panel description. Spacings in wavelengths. Ports group K consecutive
// elements of one column and one polarization; K must divide the row count.
struct PanelSpec {
    std::size_t rows = 1;
    std::size_t columns = 1;
    double d_v = 0.5;
    double d_h = 0.5;
    std::size_t elements_per_port = 1;
    Polarization polarization = Polarization::Single;
    double slant = 0.0;             // radians; cross-polarized panels use +slant and -slant
    double tilt_zenith = kPi / 2.0; // zenith the port weights steer to; pi/2 means no electrical tilt

    friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

struct ArrayElement {
    Vec3 position; // meters, antenna frame
    double slant = 0.0;
};

struct AntennaPort {
    std::vector<std::size_t> elements;
    std::vector<cdouble> weights;
    // Offset between consecutive member elements when they are uniformly spaced.
    std::optional<Vec3> uniform_step;
};

class ArrayGeometry {
public:
    // Throws InvalidInput unless every port has unit power weights and every element belongs to
    // exactly one port.
    ArrayGeometry(std::vector<ArrayElement> elements, std::vector<AntennaPort> ports);

    static ArrayGeometry single_element(double slant = 0.0);

    // Elements ordered column-major (column, row, polarization); ports ordered (column, polarization, sub-array).
    static ArrayGeometry uniform_panel(const PanelSpec& spec, double wavelength);

    std::size_t size() const noexcept { return elements_.size(); }
    std::size_t port_count() const noexcept { return ports_.size(); }
    const std::vector<ArrayElement>& elements() const noexcept { return elements_; }
    const std::vector<AntennaPort>& ports() const noexcept { return ports_; }
    const AntennaPort& port(std::size_t index) const;

    std::vector<Vec3> positions() const;

private:
    std::vector<ArrayElement> elements_;
    std::vector<AntennaPort> ports_;
};

// exp(j k . x_i) for every position; positions and k in the same frame.
std::vector<cdouble> array_response(std::span<const Vec3> positions, const WaveVector& k);
std::vector<cdouble> array_response(const ArrayGeometry& geometry, const WaveVector& k);

// Port channel per receive antenna: sum_k w_k [H]_{k,u} over the port's member elements.
// `per_element` is indexed (element, rx antenna). Throws InvalidInput for an unknown port.
std::vector<cdouble> virtualize_port(const CMatrix& per_element, const ArrayGeometry& geometry, std::size_t port);

// Maps an (rx, element) channel to (rx, port) by applying virtualize_port to every port.
CMatrix to_port_space(const CMatrix& rx_by_element, const ArrayGeometry& geometry);

// w_m = exp(-j 2 pi d_v (m-1) cos theta_tilt) / sqrt(M), m = 1..M.
std::vector<cdouble> downtilt_weights(std::size_t m, double d_v, double theta_tilt);

// Power gain of the weighted port, |sum_k w_k exp(j k.x_k)|^2, toward local directions.
void port_array_gain(const ArrayGeometry& geometry, std::size_t port, std::span<const AngleVector> local,
                     double wavelength, std::span<double> out);

// Element pattern plus port array gain, in dBi, toward local directions.
void composite_gain_db(const PatternModel& element, const ArrayGeometry& geometry, std::size_t port,
                       std::span<const AngleVector> local, double wavelength, std::span<double> out);

enum class FieldModel { Slant36814, LocalToGlobal };

// A mounted array: geometry, orientation of its frame, per-element pattern and polarization model.
struct Antenna {
    ArrayGeometry geometry = ArrayGeometry::single_element();
    Rotation orientation{};
    PatternModel pattern{};
    FieldModel field_model = FieldModel::Slant36814;

    // (V, H) field of one element toward a global direction.
    FieldPair element_field(std::size_t element, const AngleVector& global) const;

    // Element array response toward a global direction.
    std::vector<cdouble> response(const AngleVector& global, double frequency_hz) const;
};

} // namespace chan3d

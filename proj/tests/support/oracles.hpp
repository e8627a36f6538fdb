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

// Independent reference computations for the test suites. Nothing here calls into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double c0 = 299792458.0;

inline double deg(double rad) { return rad * 180.0 / pi; }
inline double rad(double deg) { return deg * pi / 180.0; }

inline void direction(double az, double zen, double out[3])
{
    out[0] = std::sin(zen) * std::cos(az);
    out[1] = std::sin(zen) * std::sin(az);
    out[2] = std::cos(zen);
}

// 3GPP-style clipped pattern in dB with angles in degrees and zenith measured from +z.
inline double pattern_db(double gmax, double am, double vfloor, double phi3, double theta3, double tilt_below_horizon,
                         double phi_deg, double theta_deg)
{
    while (phi_deg >= 180.0)
        phi_deg -= 360.0;
    while (phi_deg < -180.0)
        phi_deg += 360.0;
    const double ah = std::min(12.0 * std::pow(phi_deg / phi3, 2), am);
    const double av = std::min(12.0 * std::pow((theta_deg - 90.0 - tilt_below_horizon) / theta3, 2), vfloor);
    return gmax - std::min(ah + av, am);
}

// Eigenvalues of a Hermitian matrix via cyclic Jacobi on the real symmetric embedding [[A, -B], [B, A]].
// Each eigenvalue of the complex matrix appears twice in the embedding; one copy of each pair is kept.
inline std::vector<double> hermitian_eigenvalues(const std::vector<std::vector<cd>>& h)
{
    const std::size_t n = h.size();
    const std::size_t m = 2 * n;
    std::vector<std::vector<double>> a(m, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = h[i][j].real();
            a[i + n][j + n] = h[i][j].real();
            a[i][j + n] = -h[i][j].imag();
            a[i + n][j] = h[i][j].imag();
        }
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q)
                off += a[p][q] * a[p][q];
        if (off < 1e-30)
            break;
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                if (std::abs(a[p][q]) < 1e-300)
                    continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < m; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < m; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> ev(m);
    for (std::size_t i = 0; i < m; ++i)
        ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end(), std::greater<>());
    std::vector<double> out;
    for (std::size_t i = 0; i < m; i += 2)
        out.push_back(0.5 * (ev[i] + ev[i + 1]));
    return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Asymptotic Kolmogorov distribution tail, P(sqrt(n) D > lambda).
inline double ks_pvalue(double d, std::size_t n)
{
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-16)
            break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

template <class Cdf>
double ks_statistic(std::vector<double> x, Cdf cdf)
{
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

inline double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

inline double stddev(const std::vector<double>& v)
{
    const double m = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b)
{
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace oracle

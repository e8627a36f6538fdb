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

#include "chan3d/simd/kernels.hpp"

#include <cmath>

namespace chan3d::simd {
namespace {

void cis_scalar(const double* phase, cdouble* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i)
        out[i] = {std::cos(phase[i]), std::sin(phase[i])};
}

void caxpy_scalar(cdouble a, const cdouble* x, cdouble* y, std::size_t n)
{
    const double ar = a.real(), ai = a.imag();
    for (std::size_t i = 0; i < n; ++i) {
        const double xr = x[i].real(), xi = x[i].imag();
        y[i] = {y[i].real() + (ar * xr - ai * xi), y[i].imag() + (ar * xi + ai * xr)};
    }
}

double sum_norm_scalar(const cdouble* v, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    return s;
}

void array_factor_power_scalar(const cdouble* w, std::size_t m, const double* psi, double* out, std::size_t n)
{
    for (std::size_t i = 0; i < n; ++i) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double ph = static_cast<double>(k) * psi[i];
            const double c = std::cos(ph), s = std::sin(ph);
            re += w[k].real() * c - w[k].imag() * s;
            im += w[k].real() * s + w[k].imag() * c;
        }
        out[i] = re * re + im * im;
    }
}

constexpr KernelTable kScalar{
    Isa::Scalar, cis_scalar, caxpy_scalar, sum_norm_scalar, array_factor_power_scalar,
};

} // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

} // namespace chan3d::simd

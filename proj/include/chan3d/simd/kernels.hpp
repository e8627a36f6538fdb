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

// Data-parallel inner loops of the simulator. Every kernel has a scalar reference implementation
// and, on x86-64, an AVX2+FMA variant. The active table is picked once at first use from the CPU
// features; CHAN3D_ISA=scalar in the environment forces the reference path.

#include <complex>
#include <cstddef>
#include <string_view>

namespace chan3d::simd {

using cdouble = std::complex<double>;

enum class Isa { Scalar, Avx2 };

struct KernelTable {
    Isa isa;

    // out[i] = exp(j * phase[i])
    void (*cis)(const double* phase, cdouble* out, std::size_t n);

    // y[i] += a * x[i]
    void (*caxpy)(cdouble a, const cdouble* x, cdouble* y, std::size_t n);

    // sum |v[i]|^2
    double (*sum_norm)(const cdouble* v, std::size_t n);

    // out[i] = | sum_{k<m} w[k] exp(j k psi[i]) |^2
    void (*array_factor_power)(const cdouble* w, std::size_t m, const double* psi, double* out, std::size_t n);
};

const KernelTable& scalar_kernels() noexcept;

// Nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels() noexcept;

// Table used by the library.
const KernelTable& kernels() noexcept;

std::string_view isa_name(Isa isa) noexcept;

} // namespace chan3d::simd

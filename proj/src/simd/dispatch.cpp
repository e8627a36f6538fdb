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
#include "kernels_detail.hpp"

#include <cstdlib>
#include <string_view>

namespace chan3d::simd {

const KernelTable* avx2_kernels() noexcept
{
#if defined(CHAN3D_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &detail::avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& kernels() noexcept
{
    static const KernelTable* active = [] {
        const char* forced = std::getenv("CHAN3D_ISA");
        if (forced != nullptr && std::string_view(forced) == "scalar")
            return &scalar_kernels();
        if (const KernelTable* t = avx2_kernels())
            return t;
        return &scalar_kernels();
    }();
    return *active;
}

std::string_view isa_name(Isa isa) noexcept
{
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    }
    return "unknown";
}

} // namespace chan3d::simd

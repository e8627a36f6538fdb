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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace chan3d {

using Rng = std::mt19937_64;

// Stream tags keep substreams of different purposes apart even when the entity ids coincide.
enum class StreamTag : std::uint64_t {
    Drop = 1,
    LosState = 2,
    LargeScale = 3,
    SmallScale = 4,
    SpatialField = 5,
    Mobility = 6,
};

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag, std::initializer_list<std::uint64_t> ids) noexcept
{
    std::uint64_t h = mix64(master ^ mix64(static_cast<std::uint64_t>(tag)));
    for (std::uint64_t id : ids)
        h = mix64(h ^ mix64(id + 0x632be59bd9b4e019ULL));
    return h;
}

// Independent generator for one (purpose, entity...) tuple; reproducible under any schedule.
inline Rng substream(std::uint64_t master, StreamTag tag, std::initializer_list<std::uint64_t> ids = {})
{
    return Rng{derive_seed(master, tag, ids)};
}

} // namespace chan3d

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
#include "doctest.h"

#include <cstdlib>
#include <random>
#include <string_view>
#include <vector>

using namespace chan3d::simd;

namespace {

std::vector<cdouble> random_complex(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> d;
    std::vector<cdouble> v(n);
    for (auto& x : v)
        x = {d(rng), d(rng)};
    return v;
}

std::vector<double> random_real(std::mt19937_64& rng, std::size_t n, double scale)
{
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<double> v(n);
    for (auto& x : v)
        x = d(rng);
    return v;
}

void check_against_reference(const KernelTable& k)
{
    std::mt19937_64 rng(42);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 257u}) {
        CAPTURE(n);
        const std::vector<double> phase = random_real(rng, n, 200.0);
        std::vector<cdouble> out(n);
        k.cis(phase.data(), out.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(std::abs(out[i] - std::polar(1.0, phase[i])) <= 1e-12);

        const std::vector<cdouble> x = random_complex(rng, n);
        std::vector<cdouble> y = random_complex(rng, n);
        std::vector<cdouble> y_ref = y;
        const cdouble a{0.3, -1.7};
        k.caxpy(a, x.data(), y.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            REQUIRE(std::abs(y[i] - (y_ref[i] + a * x[i])) <= 1e-13);

        long double s = 0.0L;
        for (const cdouble& v : x)
            s += static_cast<long double>(std::norm(v));
        CHECK(static_cast<double>(s) == doctest::Approx(k.sum_norm(x.data(), n)).epsilon(1e-13));

        for (std::size_t m : {1u, 4u, 10u}) {
            const std::vector<cdouble> w = random_complex(rng, m);
            const std::vector<double> psi = random_real(rng, n, 6.0);
            std::vector<double> af(n);
            k.array_factor_power(w.data(), m, psi.data(), af.data(), n);
            for (std::size_t i = 0; i < n; ++i) {
                cdouble acc{};
                for (std::size_t q = 0; q < m; ++q)
                    acc += w[q] * std::polar(1.0, static_cast<double>(q) * psi[i]);
                REQUIRE(std::abs(af[i] - std::norm(acc)) <= 1e-10 * (1.0 + std::norm(acc)));
            }
        }
    }
}

} // namespace

TEST_CASE("scalar kernels match the direct formulas")
{
    CHECK(scalar_kernels().isa == Isa::Scalar);
    check_against_reference(scalar_kernels());
}

TEST_CASE("AVX2 kernels match the direct formulas when available")
{
    const KernelTable* avx = avx2_kernels();
    if (avx == nullptr) {
        MESSAGE("AVX2 kernels not available on this host");
        return;
    }
    CHECK(avx->isa == Isa::Avx2);
    check_against_reference(*avx);
}

TEST_CASE("AVX2 and scalar kernels agree elementwise")
{
    const KernelTable* avx = avx2_kernels();
    if (avx == nullptr)
        return;
    const KernelTable& sc = scalar_kernels();
    std::mt19937_64 rng(7);
    const std::size_t n = 1001;
    const std::vector<double> phase = random_real(rng, n, 1e4);
    std::vector<cdouble> a(n);
    std::vector<cdouble> b(n);
    sc.cis(phase.data(), a.data(), n);
    avx->cis(phase.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(std::abs(a[i] - b[i]) <= 1e-11);

    const std::vector<cdouble> w = random_complex(rng, 10);
    const std::vector<double> psi = random_real(rng, n, 6.3);
    std::vector<double> pa(n);
    std::vector<double> pb(n);
    sc.array_factor_power(w.data(), w.size(), psi.data(), pa.data(), n);
    avx->array_factor_power(w.data(), w.size(), psi.data(), pb.data(), n);
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(pa[i] == doctest::Approx(pb[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("dispatch honours CHAN3D_ISA")
{
    const char* env = std::getenv("CHAN3D_ISA");
    if (env != nullptr && std::string_view(env) == "scalar")
        CHECK(kernels().isa == Isa::Scalar);
    else if (avx2_kernels() != nullptr)
        CHECK(kernels().isa == Isa::Avx2);
    CHECK(isa_name(Isa::Scalar) == "scalar");
    CHECK(isa_name(Isa::Avx2) == "avx2");
}

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

// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and must only be
// entered after the dispatcher has checked the CPU.

#include "chan3d/simd/kernels.hpp"
#include "kernels_detail.hpp"

#include <immintrin.h>

namespace chan3d::simd {
namespace {

struct SinCos {
    __m256d sin;
    __m256d cos;
};

// Quadrant reduction by pi/2 (two-part Cody-Waite with FMA) and minimax polynomials on
// [-pi/4, pi/4]. Accurate to a few ulp for |x| up to ~1e6, which covers array and Doppler phases.
inline SinCos sincos_pd(__m256d x)
{
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(0.63661977236758134308)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(1.5707963267948966), x);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(6.123233995736766e-17), r);
    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(1.58969099521155010221e-10);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507602534068634195e-08));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573137070700676789e-06));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698298579493134e-04));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332248946124e-03));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666324348e-01));
    const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(-1.13596475577881948265e-11);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757232129817482790e-09));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573143513906633035e-07));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872894767294178e-05));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888741095749e-03));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666666019037e-02));
    const __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), pc, _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    // Low mantissa bits of q + 1.5*2^52 hold the quadrant in two's complement.
    const __m256i qi = _mm256_castpd_si256(_mm256_add_pd(q, _mm256_set1_pd(6755399441055744.0)));
    const __m256i one = _mm256_set1_epi64x(1);
    const __m256i two = _mm256_set1_epi64x(2);
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qi, one), one));
    const __m256d sin_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(qi, two), 62));
    const __m256d cos_sign =
        _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(qi, one), two), 62));

    return {_mm256_xor_pd(_mm256_blendv_pd(s, c, swap), sin_sign),
            _mm256_xor_pd(_mm256_blendv_pd(c, s, swap), cos_sign)};
}

void cis_avx2(const double* phase, cdouble* out, std::size_t n)
{
    auto* o = reinterpret_cast<double*>(out);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const SinCos sc = sincos_pd(_mm256_loadu_pd(phase + i));
        // interleave (c0 s0 c1 s1) (c2 s2 c3 s3)
        const __m256d lo = _mm256_unpacklo_pd(sc.cos, sc.sin); // c0 s0 c2 s2
        const __m256d hi = _mm256_unpackhi_pd(sc.cos, sc.sin); // c1 s1 c3 s3
        _mm256_storeu_pd(o + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x20));
        _mm256_storeu_pd(o + 2 * i + 4, _mm256_permute2f128_pd(lo, hi, 0x31));
    }
    if (i < n)
        scalar_kernels().cis(phase + i, out + i, n - i);
}

void caxpy_avx2(cdouble a, const cdouble* x, cdouble* y, std::size_t n)
{
    const auto* xp = reinterpret_cast<const double*>(x);
    auto* yp = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai = _mm256_set1_pd(a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d xs = _mm256_permute_pd(xv, 0x5);
        const __m256d prod = _mm256_fmaddsub_pd(ar, xv, _mm256_mul_pd(ai, xs));
        _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yp + 2 * i), prod));
    }
    if (i < n)
        scalar_kernels().caxpy(a, x + i, y + i, n - i);
}

double sum_norm_avx2(const cdouble* v, std::size_t n)
{
    const auto* p = reinterpret_cast<const double*>(v);
    const std::size_t len = 2 * n;
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        const __m256d x = _mm256_loadu_pd(p + i);
        acc = _mm256_fmadd_pd(x, x, acc);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < len; ++i)
        s += p[i] * p[i];
    return s;
}

void array_factor_power_avx2(const cdouble* w, std::size_t m, const double* psi, double* out, std::size_t n)
{
    std::size_t i = 0;
    if (m > 0) {
        for (; i + 4 <= n; i += 4) {
            const SinCos z = sincos_pd(_mm256_loadu_pd(psi + i));
            // Horner in z = exp(j psi): p = (...(w[m-1] z + w[m-2]) z + ...) + w[0]
            __m256d pr = _mm256_set1_pd(w[m - 1].real());
            __m256d pi = _mm256_set1_pd(w[m - 1].imag());
            for (std::size_t k = m - 1; k-- > 0;) {
                const __m256d nr = _mm256_fmsub_pd(pr, z.cos, _mm256_fmsub_pd(pi, z.sin, _mm256_set1_pd(w[k].real())));
                const __m256d ni = _mm256_fmadd_pd(pr, z.sin, _mm256_fmadd_pd(pi, z.cos, _mm256_set1_pd(w[k].imag())));
                pr = nr;
                pi = ni;
            }
            _mm256_storeu_pd(out + i, _mm256_fmadd_pd(pr, pr, _mm256_mul_pd(pi, pi)));
        }
    }
    if (i < n)
        scalar_kernels().array_factor_power(w, m, psi + i, out + i, n - i);
}

constexpr KernelTable kAvx2{
    Isa::Avx2, cis_avx2, caxpy_avx2, sum_norm_avx2, array_factor_power_avx2,
};

} // namespace

namespace detail {
const KernelTable& avx2_table() noexcept { return kAvx2; }
} // namespace detail

} // namespace chan3d::simd

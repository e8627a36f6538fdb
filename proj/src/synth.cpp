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

#include "chan3d/synth.hpp"

#include "chan3d/errors.hpp"
#include "chan3d/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace chan3d {

double slow_fading_amplitude(double pathloss_db, double sf_db) noexcept
{
    return std::sqrt(std::pow(10.0, -(pathloss_db + sf_db) / 10.0));
}

namespace {

// Per-antenna data reused across sub-paths: element positions and one representative element per
// distinct slant (fields depend on the element only through its slant).
class SideCache {
public:
    explicit SideCache(const Antenna& a) : antenna_(a), positions_(a.geometry.positions())
    {
        const auto& elems = a.geometry.elements();
        slot_.resize(elems.size());
        for (std::size_t i = 0; i < elems.size(); ++i) {
            const auto it = std::find(slants_.begin(), slants_.end(), elems[i].slant);
            if (it == slants_.end()) {
                slot_[i] = slants_.size();
                slants_.push_back(elems[i].slant);
                representative_.push_back(i);
            } else {
                slot_[i] = static_cast<std::size_t>(it - slants_.begin());
            }
        }
        fields_.resize(slants_.size());
        phase_.resize(positions_.size());
        resp_.resize(positions_.size());
    }

    std::size_t size() const noexcept { return positions_.size(); }

    // v[i] = g_V,i a_i and h[i] = g_H,i a_i toward the global direction.
    void weighted_response(const AngleVector& global, double f, cdouble* v, cdouble* h)
    {
        for (std::size_t s = 0; s < slants_.size(); ++s)
            fields_[s] = antenna_.element_field(representative_[s], global);
        const Vec3 k = wave_vector(f, to_local(antenna_.orientation, global)).vector();
        for (std::size_t i = 0; i < positions_.size(); ++i)
            phase_[i] = dot(k, positions_[i]);
        simd::kernels().cis(phase_.data(), resp_.data(), resp_.size());
        for (std::size_t i = 0; i < positions_.size(); ++i) {
            const FieldPair& g = fields_[slot_[i]];
            v[i] = g.vertical * resp_[i];
            h[i] = g.horizontal * resp_[i];
        }
    }

private:
    const Antenna& antenna_;
    std::vector<Vec3> positions_;
    std::vector<double> slants_;
    std::vector<std::size_t> slot_;
    std::vector<std::size_t> representative_;
    std::vector<FieldPair> fields_;
    std::vector<double> phase_;
    std::vector<cdouble> resp_;
};

struct Synthesizer {
    const LinkContext& ctx;
    SideCache rx;
    SideCache tx;
    std::vector<cdouble> rv, rh, bv, bh, y0, y1;

    explicit Synthesizer(const LinkContext& c)
        : ctx(c), rx(*c.rx), tx(*c.tx), rv(rx.size()), rh(rx.size()), bv(tx.size()), bh(tx.size()), y0(tx.size()),
          y1(tx.size())
    {
    }

    // H(t) += amplitude e^{j k_r.v t} (g_R^T M g_T) a_R a_T^T for every time sample.
    void add_ray(std::vector<CMatrix>& out, std::span<const double> times, const AngleVector& departure,
                 const AngleVector& arrival, const PolarizationMatrix& m, double amplitude)
    {
        rx.weighted_response(arrival, ctx.frequency_hz, rv.data(), rh.data());
        tx.weighted_response(departure, ctx.frequency_hz, bv.data(), bh.data());
        for (std::size_t s = 0; s < tx.size(); ++s) {
            y0[s] = m[0] * bv[s] + m[1] * bh[s];
            y1[s] = m[2] * bv[s] + m[3] * bh[s];
        }
        const WaveVector kr = wave_vector(ctx.frequency_hz, arrival);
        const auto& kern = simd::kernels();
        const auto cols = tx.size();
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            const cdouble c = std::polar(amplitude, doppler_phase(kr, ctx.ue_velocity, times[ti]));
            CMatrix& h = out[ti];
            for (std::size_t u = 0; u < rx.size(); ++u) {
                cdouble* row = h.data() + u * cols;
                kern.caxpy(c * rv[u], y0.data(), row, cols);
                kern.caxpy(c * rh[u], y1.data(), row, cols);
            }
        }
    }

    std::vector<CMatrix> cluster(std::size_t n, std::span<const double> times, double diffuse_scale, double los_scale)
    {
        const auto rows = static_cast<Eigen::Index>(rx.size());
        const auto cols = static_cast<Eigen::Index>(tx.size());
        std::vector<CMatrix> out(times.size(), CMatrix::Zero(rows, cols));
        const double amp = slow_fading_amplitude(ctx.pathloss_db, ctx.sf_db);
        if (diffuse_scale > 0.0) {
            for (const Subpath& sp : ctx.clusters->clusters[n].subpaths)
                add_ray(out, times, sp.departure, sp.arrival, polarization_matrix(sp.pol, ctx.xpr_convention),
                        amp * diffuse_scale * std::sqrt(sp.power));
        }
        if (n == 0 && los_scale > 0.0) {
            const PolarizationMatrix m{std::polar(1.0, ctx.clusters->los_phase_vv), 0.0, 0.0,
                                       std::polar(1.0, ctx.clusters->los_phase_hh)};
            add_ray(out, times, ctx.los.departure, ctx.los.arrival, m, amp * los_scale);
        }
        return out;
    }
};

void check_context(const LinkContext& ctx)
{
    if (ctx.tx == nullptr || ctx.rx == nullptr || ctx.clusters == nullptr)
        throw InvalidInput("link context needs both antennas and a cluster set");
    if (ctx.tx->geometry.size() == 0 || ctx.rx->geometry.size() == 0)
        throw InvalidInput("link context antennas must have at least one element");
    if (!(ctx.frequency_hz > 0.0))
        throw InvalidInput("link context frequency must be positive");
}

void check_cluster(const LinkContext& ctx, std::size_t n)
{
    if (n >= ctx.clusters->clusters.size())
        throw InvalidInput("cluster index " + std::to_string(n) + " out of range");
}

std::pair<double, double> rice_scales(double k)
{
    if (!(k >= 0.0))
        throw InvalidInput("Rice factor must be non-negative");
    if (std::isinf(k))
        return {0.0, 1.0};
    return {std::sqrt(1.0 / (k + 1.0)), std::sqrt(k / (k + 1.0))};
}

} // namespace

CMatrix cluster_matrix_nlos(const LinkContext& ctx, std::size_t n, double t)
{
    check_context(ctx);
    check_cluster(ctx, n);
    Synthesizer s(ctx);
    const double times[] = {t};
    return std::move(s.cluster(n, times, 1.0, 0.0).front());
}

CMatrix cluster_matrix_with_los(const LinkContext& ctx, std::size_t n, double t, double k_rice)
{
    const auto [diffuse, los] = rice_scales(k_rice);
    check_context(ctx);
    check_cluster(ctx, n);
    Synthesizer s(ctx);
    const double times[] = {t};
    return std::move(s.cluster(n, times, diffuse, los).front());
}

ChannelRealization synthesize(const LinkContext& ctx, std::span<const double> times, ChannelSpace space)
{
    if (times.empty())
        throw InvalidInput("synthesize: empty time list");
    check_context(ctx);
    const auto [diffuse, los] = rice_scales(ctx.k_rice);

    const auto& clusters = ctx.clusters->clusters;
    std::vector<std::size_t> order(clusters.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return clusters[a].delay < clusters[b].delay; });

    ChannelRealization r;
    r.frequency_hz = ctx.frequency_hz;
    r.times.assign(times.begin(), times.end());
    r.space = space;
    r.taps.reserve(clusters.size());
    Synthesizer s(ctx);
    for (std::size_t n : order) {
        ChannelTap tap;
        tap.delay = clusters[n].delay;
        tap.samples = s.cluster(n, times, diffuse, los);
        if (space == ChannelSpace::Port)
            for (CMatrix& m : tap.samples)
                m = to_port_space(m, ctx.tx->geometry);
        r.taps.push_back(std::move(tap));
    }
    return r;
}

void write_realization(std::ostream& os, const ChannelRealization& r)
{
    char buf[64];
    os << "# chan3d-realization n_rx=" << r.rx_count() << " n_tx=" << r.tx_count() << " n_taps=" << r.taps.size()
       << " n_times=" << r.times.size();
    std::snprintf(buf, sizeof buf, "%.17g", r.frequency_hz);
    os << " frequency_hz=" << buf << " space=" << (r.space == ChannelSpace::Port ? "port" : "element") << '\n';
    for (std::size_t ti = 0; ti < r.times.size(); ++ti) {
        for (const ChannelTap& tap : r.taps) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g", r.times[ti], tap.delay);
            os << buf;
            const CMatrix& m = tap.samples[ti];
            for (Eigen::Index i = 0; i < m.size(); ++i) {
                std::snprintf(buf, sizeof buf, " %.17g %.17g", m.data()[i].real(), m.data()[i].imag());
                os << buf;
            }
            os << '\n';
        }
    }
}

ChannelRealization read_realization(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw IoError("realization: missing header");
    long n_rx = -1, n_tx = -1, n_taps = -1, n_times = -1;
    double freq = 0.0;
    char space[16] = {};
    if (std::sscanf(line.c_str(), "# chan3d-realization n_rx=%ld n_tx=%ld n_taps=%ld n_times=%ld frequency_hz=%lf space=%15s",
                    &n_rx, &n_tx, &n_taps, &n_times, &freq, space) != 6 ||
        n_rx < 0 || n_tx < 0 || n_taps < 0 || n_times < 0)
        throw IoError("realization: malformed header");

    ChannelRealization r;
    r.frequency_hz = freq;
    r.space = std::string(space) == "port" ? ChannelSpace::Port : ChannelSpace::Element;
    r.times.resize(static_cast<std::size_t>(n_times));
    r.taps.resize(static_cast<std::size_t>(n_taps));
    for (auto& tap : r.taps)
        tap.samples.assign(static_cast<std::size_t>(n_times), CMatrix(n_rx, n_tx));
    for (long ti = 0; ti < n_times; ++ti) {
        for (auto& tap : r.taps) {
            if (!std::getline(is, line))
                throw IoError("realization: truncated body");
            std::istringstream ls(line);
            double t = 0.0;
            if (!(ls >> t >> tap.delay))
                throw IoError("realization: malformed record");
            r.times[static_cast<std::size_t>(ti)] = t;
            CMatrix& m = tap.samples[static_cast<std::size_t>(ti)];
            for (Eigen::Index i = 0; i < m.size(); ++i) {
                double re = 0.0, im = 0.0;
                if (!(ls >> re >> im))
                    throw IoError("realization: record has too few entries");
                m.data()[i] = {re, im};
            }
        }
    }
    return r;
}

} // namespace chan3d

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

#include "chan3d/calib.hpp"

#include "chan3d/errors.hpp"
#include "chan3d/geom.hpp"
#include "chan3d/synth.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace chan3d {

double rsrp_fast_fading_db(double ptx_dbm, const ChannelRealization& r)
{
    if (r.taps.empty() || r.times.empty())
        throw InvalidInput("rsrp_fast_fading_db: empty realization");
    double acc = 0.0;
    for (const ChannelTap& tap : r.taps)
        for (const CMatrix& m : tap.samples)
            acc += m.squaredNorm();
    const double pairs = static_cast<double>(r.rx_count() * r.tx_count());
    return ptx_dbm + 10.0 * std::log10(acc / (static_cast<double>(r.times.size()) * pairs));
}

std::size_t attach(std::span<const double> rsrp)
{
    std::size_t best = rsrp.size();
    for (std::size_t i = 0; i < rsrp.size(); ++i)
        if (!std::isnan(rsrp[i]) && (best == rsrp.size() || rsrp[i] > rsrp[best]))
            best = i;
    if (best == rsrp.size())
        throw InvalidInput("attach: no candidate cell");
    return best;
}

double geometry_factor_db(std::span<const double> rsrp, std::size_t serving)
{
    if (serving >= rsrp.size())
        throw InvalidInput("geometry_factor_db: serving index out of range");
    // Powers are taken relative to the serving cell so very small RSRPs do not underflow.
    double interference = 0.0;
    for (std::size_t i = 0; i < rsrp.size(); ++i)
        if (i != serving)
            interference += std::pow(10.0, (rsrp[i] - rsrp[serving]) / 10.0);
    if (rsrp.size() < 2)
        return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(interference);
}

double angular_spread_deg(std::span<const double> angles, std::span<const double> powers)
{
    if (angles.size() != powers.size())
        throw InvalidInput("angular_spread_deg: size mismatch");
    double total = 0.0;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        total += powers[i];
        re += powers[i] * std::cos(angles[i]);
        im += powers[i] * std::sin(angles[i]);
    }
    if (!(total > 0.0))
        throw InvalidInput("angular_spread_deg: total power must be positive");
    const double mean = std::atan2(im, re);
    double acc = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const double mu = wrap_azimuth(angles[i] - mean);
        acc += powers[i] * mu * mu;
    }
    return rad2deg(std::sqrt(acc / total));
}

double delay_spread_s(std::span<const double> delays, std::span<const double> powers)
{
    if (delays.size() != powers.size())
        throw InvalidInput("delay_spread_s: size mismatch");
    double total = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < delays.size(); ++i) {
        total += powers[i];
        m1 += powers[i] * delays[i];
        m2 += powers[i] * delays[i] * delays[i];
    }
    if (!(total > 0.0))
        throw InvalidInput("delay_spread_s: total power must be positive");
    m1 /= total;
    m2 /= total;
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

std::vector<double> hermitian_eigenvalues(const CMatrix& a)
{
    if (a.rows() != a.cols())
        throw InvalidInput("hermitian_eigenvalues: matrix must be square");
    Eigen::MatrixXcd m = a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> top_eigenvalues(const ChannelRealization& r, std::size_t count)
{
    if (r.taps.empty() || r.times.empty())
        throw InvalidInput("top_eigenvalues: empty realization");
    const Eigen::Index n = r.rx_count();
    CMatrix cov = CMatrix::Zero(n, n);
    for (const ChannelTap& tap : r.taps)
        for (const CMatrix& h : tap.samples)
            cov.noalias() += h * h.adjoint();
    cov /= static_cast<double>(r.times.size());
    std::vector<double> ev = hermitian_eigenvalues(cov);
    for (double& x : ev)
        x = std::max(x, 0.0);
    ev.resize(count, 0.0);
    return ev;
}

std::vector<CdfPoint> empirical_cdf(std::span<const double> samples)
{
    std::vector<double> v;
    v.reserve(samples.size());
    for (double x : samples)
        if (std::isfinite(x))
            v.push_back(x);
    if (v.empty())
        throw InvalidInput("empirical_cdf: no finite samples");
    std::sort(v.begin(), v.end());
    std::vector<CdfPoint> out(v.size());
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = {v[i], static_cast<double>(i + 1) / n};
    return out;
}

double cdf_quantile(std::span<const CdfPoint> cdf, double p)
{
    if (cdf.empty())
        throw InvalidInput("cdf_quantile: empty CDF");
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), p,
                                     [](const CdfPoint& c, double q) { return c.probability < q - 1e-15; });
    return it == cdf.end() ? cdf.back().value : it->value;
}

void write_report_csv(std::ostream& os, std::span<const DropReport> reports)
{
    os << "ue_id,site,cell,cl_db,gf_db,asd,asa,esd,esa,ds,l1,l2\n";
    char buf[512];
    for (const DropReport& r : reports) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.ue_id,
                      r.site, r.cell, r.cl_db, r.gf_db, r.asd, r.asa, r.esd, r.esa, r.ds, r.l1, r.l2);
        os << buf;
    }
}

} // namespace chan3d

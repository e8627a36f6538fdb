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
#include "chan3d/ssp.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <numeric>

using namespace chan3d;

namespace {

// Circular RMS spread written out directly: wrapped deviations from the power-weighted circular mean.
double spread_oracle_deg(const std::vector<double>& a, const std::vector<double>& p)
{
    std::complex<double> s{};
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += p[i] * std::exp(std::complex<double>(0, a[i]));
        total += p[i];
    }
    const double mean = std::arg(s);
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::remainder(a[i] - mean, 2 * oracle::pi);
        acc += p[i] * d * d;
    }
    return oracle::deg(std::sqrt(acc / total));
}

SmallScaleInputs nlos_inputs()
{
    SmallScaleInputs in;
    in.state = LinkState::Nlos;
    in.lsp = {0.0, 0.0, 3.6e-7, 14.0, 55.0, 8.0, 18.0};
    in.los = los_angles({0, 0, 25}, {150, 80, 1.5});
    in.d_2d = std::hypot(150.0, 80.0);
    in.h_ue = 1.5;
    in.esd_mean_log10 = 0.9;
    return in;
}

void check_invariants(const ClusterSet& set)
{
    REQUIRE_FALSE(set.clusters.empty());
    CHECK(set.clusters.front().delay == 0.0);
    for (std::size_t n = 1; n < set.clusters.size(); ++n)
        CHECK(set.clusters[n].delay >= set.clusters[n - 1].delay);
    CHECK(std::abs(set.total_power() - 1.0) <= 1e-9);
    for (const Cluster& c : set.clusters) {
        double p = 0.0;
        for (const Subpath& s : c.subpaths) {
            p += s.power;
            CHECK(s.pol.kappa > 0.0);
            for (double ph : {s.pol.phi_vv, s.pol.phi_vh, s.pol.phi_hv, s.pol.phi_hh}) {
                CHECK(ph >= 0.0);
                CHECK(ph < 2 * oracle::pi);
            }
            CHECK(s.departure.zenith >= 0.0);
            CHECK(s.departure.zenith <= oracle::pi);
            CHECK(s.arrival.zenith >= 0.0);
            CHECK(s.arrival.zenith <= oracle::pi);
            CHECK(s.departure.azimuth >= -oracle::pi);
            CHECK(s.departure.azimuth < oracle::pi);
        }
        CHECK(p == doctest::Approx(c.power).epsilon(1e-12));
    }
    CHECK(set.los_phase_vv >= 0.0);
    CHECK(set.los_phase_vv < 2 * oracle::pi);
}

} // namespace

TEST_CASE("ray offset table is symmetric with zero mean")
{
    const SubpathOffsets o;
    CHECK(o.alpha.size() == 20);
    CHECK_NOTHROW(o.validate());
    CHECK(std::accumulate(o.alpha.begin(), o.alpha.end(), 0.0) == 0.0);
    SubpathOffsets bad;
    bad.alpha = {0.1, -0.2};
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad.alpha = {0.1, -0.1};
    bad.c_asa_deg = -1;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}

TEST_CASE("delays")
{
    Rng rng(1);
    CHECK(generate_delays(1e-7, 1, 3.0, rng) == std::vector<double>{0.0});
    for (int i = 0; i < 1000; ++i) {
        const auto d = generate_delays(2e-7, 20, 2.3, rng);
        CHECK(d.front() == 0.0);
        CHECK(std::is_sorted(d.begin(), d.end()));
    }
    CHECK_THROWS_AS(generate_delays(0.0, 3, 3.0, rng), InvalidInput);
    CHECK_THROWS_AS(generate_delays(1e-7, 0, 3.0, rng), InvalidInput);
}

TEST_CASE("the exponential delay/power profile has RMS delay spread ds")
{
    // Delays are Exp(r ds) and powers exp(-tau (r-1)/(r ds)), so the power-weighted delay density is
    // proportional to exp(-tau/ds): an exponential with standard deviation ds. Subtracting the minimum leaves the
    // other delays exponential by memorylessness, so the oracle applies to the pooled non-zero delays.
    const double ds = 1e-7;
    const double r = 3.0;
    Rng rng(12);
    double w = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (int trial = 0; trial < 100000 / 20; ++trial) {
        const auto d = generate_delays(ds, 20, r, rng);
        const auto p = generate_cluster_powers(d, ds, r, 0.0, rng);
        for (std::size_t n = 1; n < d.size(); ++n) {
            const double weight = p[n] / p[0];
            w += weight;
            m1 += weight * d[n];
            m2 += weight * d[n] * d[n];
        }
    }
    const double sd = std::sqrt(m2 / w - (m1 / w) * (m1 / w));
    CHECK(std::abs(sd / ds - 1.0) <= 0.05);
}

TEST_CASE("cluster powers")
{
    Rng rng(2);
    const std::vector<double> one{0.0};
    CHECK(generate_cluster_powers(one, 1e-7, 3.0, 3.0, rng) == std::vector<double>{1.0});
    const std::vector<double> same(5, 4e-8);
    for (double p : generate_cluster_powers(same, 1e-7, 3.0, 0.0, rng))
        CHECK(p == doctest::Approx(0.2).epsilon(1e-14));
    for (int i = 0; i < 1000; ++i) {
        const auto d = generate_delays(3e-7, 20, 2.3, rng);
        const auto p = generate_cluster_powers(d, 3e-7, 2.3, 3.0, rng);
        double total = 0.0;
        for (double x : p)
            for (int m = 0; m < 20; ++m)
                total += x / 20.0;
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("cluster angles collapse for a vanishing spread")
{
    Rng rng(3);
    const std::vector<double> p{0.4, 0.3, 0.2, 0.1};
    for (AngleKind kind : {AngleKind::Azimuth, AngleKind::Zenith}) {
        const auto a = generate_cluster_angles(kind, 1e-12, p, 1.2, rng);
        for (double x : a)
            CHECK(std::abs(oracle::deg(x - 1.2)) <= 1e-6);
    }
    const auto z = generate_cluster_angles(AngleKind::Zenith, 0.0, p, 1.2, rng, 5.0);
    for (double x : z)
        CHECK(x == doctest::Approx(1.2 + oracle::rad(5.0)));
    CHECK_THROWS_AS(generate_cluster_angles(AngleKind::Azimuth, -1.0, p, 0.0, rng), InvalidInput);
}

TEST_CASE("cluster angle statistics")
{
    Rng rng(4);
    const double target = 20.0;
    const double zen0 = oracle::rad(100.0);
    double spread_sum = 0.0;
    double zen_sum = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        const auto d = generate_delays(2e-7, 20, 2.3, rng);
        const auto p = generate_cluster_powers(d, 2e-7, 2.3, 3.0, rng);
        const auto az = generate_cluster_angles(AngleKind::Azimuth, target, p, 0.5, rng);
        spread_sum += spread_oracle_deg(az, p);
        const auto zen = generate_cluster_angles(AngleKind::Zenith, 8.0, p, zen0, rng);
        double m = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            m += p[i] * zen[i];
        zen_sum += m;
    }
    CHECK(std::abs(spread_sum / trials / target - 1.0) <= 0.10);
    CHECK(std::abs(oracle::deg(zen_sum / trials - zen0)) <= 0.5);
}

TEST_CASE("stronger clusters sit closer to the mean")
{
    Rng rng(5);
    std::vector<double> p(20);
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = std::exp(-0.3 * static_cast<double>(i));
    std::vector<double> dev(p.size(), 0.0);
    for (int t = 0; t < 2000; ++t) {
        const auto a = generate_cluster_angles(AngleKind::Azimuth, 15.0, p, 0.0, rng);
        for (std::size_t i = 0; i < p.size(); ++i)
            dev[i] += std::abs(a[i]);
    }
    CHECK(dev.front() < dev[5]);
    CHECK(dev[5] < dev[15]);
}

TEST_CASE("anchored angles put the first cluster on the LOS direction")
{
    Rng rng(6);
    const std::vector<double> p{0.5, 0.2, 0.2, 0.1};
    const auto a = generate_cluster_angles(AngleKind::Azimuth, 0.0, p, 0.7, rng, 0.0, true);
    CHECK(a[0] == doctest::Approx(0.7));
}

TEST_CASE("reflect_zenith")
{
    CHECK(reflect_zenith(-0.2) == doctest::Approx(0.2));
    CHECK(reflect_zenith(oracle::pi + 0.3) == doctest::Approx(oracle::pi - 0.3));
    CHECK(reflect_zenith(1.0) == 1.0);
}

TEST_CASE("expand_subpaths")
{
    ClusterAngles c{{0.1, -0.4}, {1.0, 2.0}, {1.5, 1.7}, {1.4, 1.2}};
    SubpathOffsets zero;
    const auto same = expand_subpaths(c, zero);
    for (std::size_t n = 0; n < 2; ++n)
        for (const auto& s : same[n]) {
            CHECK(s.departure.azimuth == doctest::Approx(c.aod[n]));
            CHECK(s.arrival.azimuth == doctest::Approx(c.aoa[n]));
            CHECK(s.departure.zenith == doctest::Approx(c.zod[n]));
            CHECK(s.arrival.zenith == doctest::Approx(c.zoa[n]));
        }

    SubpathOffsets o;
    o.c_asd_deg = 2;
    o.c_asa_deg = 15;
    o.c_esd_deg = 3;
    o.c_esa_deg = 7;
    Rng rng(7);
    for (Rng* r : {static_cast<Rng*>(nullptr), &rng}) {
        const auto e = expand_subpaths(c, o, r);
        for (std::size_t n = 0; n < 2; ++n) {
            double m[4] = {0, 0, 0, 0};
            for (const auto& s : e[n]) {
                m[0] += s.departure.azimuth;
                m[1] += s.arrival.azimuth;
                m[2] += s.departure.zenith;
                m[3] += s.arrival.zenith;
            }
            CHECK(m[0] / 20 == doctest::Approx(c.aod[n]).epsilon(1e-12));
            CHECK(m[1] / 20 == doctest::Approx(c.aoa[n]).epsilon(1e-12));
            CHECK(m[2] / 20 == doctest::Approx(c.zod[n]).epsilon(1e-12));
            CHECK(m[3] / 20 == doctest::Approx(c.zoa[n]).epsilon(1e-12));
        }
    }

    SubpathOffsets pair;
    pair.alpha = {0.5, -0.5};
    pair.c_esd_deg = 2;
    const auto p = expand_subpaths(c, pair);
    CHECK(p[0][0].departure.zenith == doctest::Approx(1.5 + oracle::rad(1.0)));
    CHECK(p[0][1].departure.zenith == doctest::Approx(1.5 - oracle::rad(1.0)));

    ClusterAngles bad = c;
    bad.zoa.pop_back();
    CHECK_THROWS_AS(expand_subpaths(bad, o), InvalidInput);
}

TEST_CASE("polarization matrix")
{
    PolarizationDraw d{0.0, 0.1, 0.2, 0.3, 0.4};
    const PolarizationMatrix m0 = polarization_matrix(d);
    CHECK(std::abs(m0[1]) == 0.0);
    CHECK(std::abs(m0[2]) == 0.0);
    CHECK(std::abs(m0[0] - std::polar(1.0, 0.1)) < 1e-15);
    CHECK(std::abs(m0[3] - std::polar(1.0, 0.4)) < 1e-15);

    Rng rng(8);
    std::vector<double> xpr;
    for (int i = 0; i < 100000; ++i) {
        const PolarizationDraw p = draw_polarization(rng, -8.0, 4.0);
        const PolarizationMatrix m = polarization_matrix(p);
        REQUIRE(std::abs(std::abs(m[0]) - 1.0) < 1e-15);
        REQUIRE(std::abs(std::abs(m[3]) - 1.0) < 1e-15);
        REQUIRE(std::abs(std::abs(m[1]) - std::sqrt(p.kappa)) < 1e-15);
        REQUIRE(std::abs(std::abs(m[2]) - std::sqrt(p.kappa)) < 1e-15);
        const PolarizationMatrix inv = polarization_matrix(p, XprConvention::Inverse);
        REQUIRE(std::abs(std::abs(inv[1]) - std::sqrt(1.0 / p.kappa)) < 1e-12);
        xpr.push_back(10.0 * std::log10(p.kappa));
    }
    CHECK(std::abs(oracle::mean(xpr) + 8.0) <= 0.1);
}

TEST_CASE("generate_small_scale invariants and determinism")
{
    for (Scenario sc : {Scenario::UMa, Scenario::UMi})
        for (LinkState st : {LinkState::Los, LinkState::Nlos, LinkState::O2i}) {
            const SspSpec spec = default_ssp_spec(sc);
            CHECK_NOTHROW(spec.validate());
            SmallScaleInputs in = nlos_inputs();
            in.state = st;
            for (std::uint64_t seed = 0; seed < 50; ++seed) {
                Rng a(seed);
                Rng b(seed);
                const ClusterSet x = generate_small_scale(spec, in, a);
                const ClusterSet y = generate_small_scale(spec, in, b);
                check_invariants(x);
                CHECK(x.clusters.size() == spec.for_state(st).n_clusters);
                REQUIRE(x.clusters.size() == y.clusters.size());
                for (std::size_t n = 0; n < x.clusters.size(); ++n)
                    for (std::size_t m = 0; m < x.clusters[n].subpaths.size(); ++m) {
                        const Subpath& p = x.clusters[n].subpaths[m];
                        const Subpath& q = y.clusters[n].subpaths[m];
                        CHECK(p.power == q.power);
                        CHECK(p.departure == q.departure);
                        CHECK(p.arrival == q.arrival);
                        CHECK(p.pol.kappa == q.pol.kappa);
                        CHECK(p.pol.phi_hv == q.pol.phi_hv);
                    }
            }
        }
}

TEST_CASE("LOS clusters are anchored on the LOS directions")
{
    const SspSpec spec = default_ssp_spec(Scenario::UMa);
    SmallScaleInputs in = nlos_inputs();
    in.state = LinkState::Los;
    Rng rng(10);
    const ClusterSet s = generate_small_scale(spec, in, rng);
    double az = 0.0;
    for (const Subpath& p : s.clusters.front().subpaths)
        az += p.departure.azimuth;
    CHECK(az / 20.0 == doctest::Approx(in.los.departure.azimuth).epsilon(1e-9));
}

TEST_CASE("sub-cluster split keeps power and ordering")
{
    SspSpec spec = default_ssp_spec(Scenario::UMa);
    spec.split_strongest_clusters = true;
    CHECK_NOTHROW(spec.validate());
    const SmallScaleInputs in = nlos_inputs();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        const ClusterSet s = generate_small_scale(spec, in, rng);
        check_invariants(s);
        CHECK(s.clusters.size() == spec.nlos.n_clusters + 4);
        CHECK(s.subpath_count() == 20 * spec.nlos.n_clusters);
        std::size_t ten = 0, six = 0, four = 0;
        for (const Cluster& c : s.clusters) {
            ten += c.subpaths.size() == 10;
            six += c.subpaths.size() == 6;
            four += c.subpaths.size() == 4;
        }
        CHECK(ten == 2);
        CHECK(six == 2);
        CHECK(four == 2);
    }
    spec.ray_offsets = {0.1, -0.1};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("SSP spec validation names the field")
{
    SspSpec spec = default_ssp_spec(Scenario::UMa);
    spec.nlos.r_tau = 0.0;
    try {
        spec.validate();
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "ssp.nlos.r_tau");
    }
    spec = default_ssp_spec(Scenario::UMa);
    spec.ray_offsets = {0.3, 0.1};
    try {
        spec.validate();
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "ssp.ray_offsets");
    }
}

TEST_CASE("library spread estimator agrees with the direct formula")
{
    Rng rng(13);
    std::uniform_real_distribution<double> u(-oracle::pi, oracle::pi);
    std::uniform_real_distribution<double> w(0.01, 1.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(17), p(17);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = u(rng);
            p[i] = w(rng);
        }
        CHECK(std::abs(angular_spread_deg(a, p) - spread_oracle_deg(a, p)) <= 1e-10);
    }
}

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

#include "chan3d/errors.hpp"
#include "chan3d/lsp.hpp"
#include "doctest.h"
#include "oracles.hpp"

#include <random>

using namespace chan3d;

namespace {

LinkGeometry link_at(double d_2d, double h_bs, double h_ue, bool los, bool indoor = false)
{
    return make_link_geometry({0, 0, h_bs}, {d_2d, 0, h_ue}, indoor, los);
}

// A spec whose spreads are narrow enough that the 104/52 degree caps never bind.
LspStateSpec narrow(LspStateSpec s)
{
    for (std::size_t i = 0; i < kLspCount; ++i) {
        s.marginals[i].mu_table = {};
        s.marginals[i].mu = i < 2 ? 3.0 : (i == 2 ? -7.0 : 1.0);
        s.marginals[i].sigma = i < 2 ? 4.0 : 0.1;
    }
    return s;
}

std::array<double, kLspCount> log_values(const LargeScaleParams& p)
{
    return {p.sf_db, p.k_factor_db, std::log10(p.ds), std::log10(p.asd), std::log10(p.asa), std::log10(p.esd),
            std::log10(p.esa)};
}

} // namespace

TEST_CASE("link geometry")
{
    const LinkGeometry g = link_at(120.0, 25.0, 7.5, true);
    CHECK(g.d_2d == doctest::Approx(120.0));
    CHECK(g.d_3d * g.d_3d == doctest::Approx(120.0 * 120.0 + 17.5 * 17.5).epsilon(1e-14));
    CHECK(link_state(g) == LinkState::Los);
    CHECK(link_state(link_at(120.0, 25.0, 7.5, false)) == LinkState::Nlos);
    CHECK(link_state(link_at(120.0, 25.0, 7.5, true, true)) == LinkState::O2i);
}

TEST_CASE("UMa NLOS pathloss at 200 m matches a hand evaluation")
{
    const PathlossParams p = default_pathloss_params(Scenario::UMa);
    const LinkGeometry g = make_link_geometry({0, 0, 25}, {std::sqrt(200.0 * 200.0 - 23.5 * 23.5), 0, 1.5}, false, false);
    REQUIRE(g.d_3d == doctest::Approx(200.0).epsilon(1e-14));
    // 161.04 - 7.1 log W + 7.5 log h - (24.37 - 3.7 (h/hBS)^2) log hBS + (43.42 - 3.1 log hBS)(log d - 3)
    //   + 20 log fc - (3.2 (log 17.625)^2 - 4.97), W = h = 20 m, hBS = 25 m, fc = 2 GHz.
    CHECK(pathloss_db(Scenario::UMa, p, g, 2e9) == doctest::Approx(109.5042435146).epsilon(1e-11));
}

TEST_CASE("UMa LOS pathloss on both sides of the breakpoint")
{
    const PathlossParams p = default_pathloss_params(Scenario::UMa);
    const double dbp = 4.0 * 24.0 * 0.5 * 2e9 / oracle::c0;
    const LinkGeometry near = link_at(100.0, 25.0, 1.5, true);
    CHECK(pathloss_db(Scenario::UMa, p, near, 2e9) ==
          doctest::Approx(22 * std::log10(near.d_3d) + 28 + 20 * std::log10(2.0)));
    const LinkGeometry far = link_at(600.0, 25.0, 1.5, true);
    CHECK(pathloss_db(Scenario::UMa, p, far, 2e9) ==
          doctest::Approx(40 * std::log10(far.d_3d) + 28 + 20 * std::log10(2.0) - 9 * std::log10(dbp * dbp + 23.5 * 23.5)));
}

TEST_CASE("UMi NLOS pathloss form")
{
    const PathlossParams p = default_pathloss_params(Scenario::UMi);
    CHECK(p.ue_height_correction_db_per_m == doctest::Approx(0.3));
    const LinkGeometry g = link_at(150.0, 10.0, 4.5, false);
    const double nlos = 36.7 * std::log10(g.d_3d) + 22.7 + 26 * std::log10(2.0) - 0.3 * 3.0;
    CHECK(pathloss_db(Scenario::UMi, p, g, 2e9) == doctest::Approx(nlos));
}

TEST_CASE("doubling the distance adds 10 n log10 2 in NLOS")
{
    for (Scenario s : {Scenario::UMa, Scenario::UMi}) {
        const PathlossParams p = default_pathloss_params(s);
        const double h_bs = s == Scenario::UMa ? 25.0 : 10.0;
        LinkGeometry a = link_at(300.0, h_bs, 1.5, false);
        LinkGeometry b = a;
        b.d_3d *= 2.0;
        b.d_2d = std::sqrt(b.d_3d * b.d_3d - (h_bs - 1.5) * (h_bs - 1.5));
        const double n = nlos_pathloss_exponent(s, h_bs);
        CHECK(pathloss_db(s, p, b, 2e9) - pathloss_db(s, p, a, 2e9) == doctest::Approx(10 * n * std::log10(2.0)));
    }
}

TEST_CASE("UE height correction and penetration loss")
{
    const PathlossParams p = default_pathloss_params(Scenario::UMa);
    const LinkGeometry ref = link_at(250.0, 25.0, 1.5, false);
    PathlossParams zero = p;
    zero.ue_height_correction_db_per_m = 0.0;
    CHECK(pathloss_db(Scenario::UMa, zero, ref, 2e9) == pathloss_db(Scenario::UMa, p, ref, 2e9));

    LinkGeometry high = link_at(250.0, 25.0, 1.5, false);
    high.h_ue = 13.5; // hold d_3d fixed so only the correction term changes
    CHECK(pathloss_db(Scenario::UMa, zero, high, 2e9) - pathloss_db(Scenario::UMa, p, high, 2e9) ==
          doctest::Approx(0.6 * 12.0));

    const LinkGeometry in = link_at(250.0, 25.0, 1.5, false, true);
    CHECK(pathloss_db(Scenario::UMa, p, in, 2e9) - pathloss_db(Scenario::UMa, p, ref, 2e9) == doctest::Approx(20.0));
}

TEST_CASE("pathloss errors")
{
    const PathlossParams p = default_pathloss_params(Scenario::UMa);
    LinkGeometry g = link_at(0.0, 1.5, 1.5, true);
    CHECK_THROWS_AS(pathloss_db(Scenario::UMa, p, g, 2e9), DegenerateGeometry);
    CHECK_THROWS_AS(pathloss_db(Scenario::UMa, p, link_at(10, 25, 1.5, true), 0.0), InvalidInput);
}

TEST_CASE("pathloss is monotone and continuous in distance and height")
{
    for (Scenario s : {Scenario::UMa, Scenario::UMi}) {
        const PathlossParams p = default_pathloss_params(s);
        const double h_bs = s == Scenario::UMa ? 25.0 : 10.0;
        for (bool los : {true, false})
            for (double h_ue : {1.5, 4.5, 10.5, 22.5}) {
                double prev = pathloss_db(s, p, link_at(10.0, h_bs, h_ue, los), 2e9);
                for (double d = 10.01; d < 2000.0; d *= 1.001) {
                    const double pl = pathloss_db(s, p, link_at(d, h_bs, h_ue, los), 2e9);
                    REQUIRE(pl >= prev - 1e-12);
                    REQUIRE(pl - prev < 0.05);
                    prev = pl;
                }
            }
        for (bool los : {true, false})
            for (double d : {50.0, 150.0, 300.0, 700.0}) {
                double prev = pathloss_db(s, p, link_at(d, h_bs, 1.5, los), 2e9);
                // The LOS breakpoint term falls like -18 log10(h_ue - 1), about 16 dB/m at 1.5 m.
                for (double h = 1.501; h < 23.0; h += 0.001) {
                    const double pl = pathloss_db(s, p, link_at(d, h_bs, h, los), 2e9);
                    REQUIRE(std::abs(pl - prev) < 0.05);
                    prev = pl;
                }
            }
    }
}

TEST_CASE("LOS probability")
{
    LosProbabilitySpec exp18;
    CHECK(los_probability(Scenario::UMa, exp18, 10.0, 1.5) == 1.0);
    CHECK(los_probability(Scenario::UMa, exp18, 18.0 + 63.0, 1.5) == doctest::Approx(std::exp(-1.0)));
    LosProbabilitySpec itu{LosModel::Itu, 18.0, 63.0};
    const double d = 100.0;
    CHECK(los_probability(Scenario::UMa, itu, d, 1.5) ==
          doctest::Approx(18.0 / d * (1 - std::exp(-d / 63.0)) + std::exp(-d / 63.0)));
    CHECK(los_probability(Scenario::UMa, itu, d, 22.5) > los_probability(Scenario::UMa, itu, d, 1.5));
    double prev = 1.0;
    for (double x = 1.0; x < 1500.0; x += 1.0) {
        const double pr = los_probability(Scenario::UMi, exp18, x, 1.5);
        REQUIRE(pr <= prev + 1e-15);
        REQUIRE(pr >= 0.0);
        prev = pr;
    }
}

TEST_CASE("distance table interpolation")
{
    DistanceTable t{{0.0, 100.0}, {1.5, 22.5}, {1.0, 2.0, 3.0, 5.0}};
    CHECK_NOTHROW(t.validate());
    CHECK(t.eval(0.0, 1.5) == 1.0);
    CHECK(t.eval(100.0, 22.5) == 5.0);
    CHECK(t.eval(50.0, 1.5) == doctest::Approx(2.0));
    CHECK(t.eval(50.0, 12.0) == doctest::Approx(0.5 * (1.5 + 4.0)));
    CHECK(t.eval(1e6, 100.0) == 5.0);
    CHECK(t.eval(-5.0, 0.0) == 1.0);
    t.values.pop_back();
    CHECK_THROWS_AS(t.validate(), InvalidInput);
    DistanceTable u{{100.0, 0.0}, {1.5}, {1.0, 2.0}};
    CHECK_THROWS_AS(u.validate(), InvalidInput);
}

TEST_CASE("degenerate distributions reproduce the means")
{
    LspDistributionSpec spec = default_lsp_spec(Scenario::UMa);
    LspStateSpec& s = spec.nlos;
    s.correlation = {};
    for (std::size_t i = 0; i < kLspCount; ++i) {
        s.correlation[i * kLspCount + i] = 1.0;
        s.marginals[i].sigma = 0.0;
        s.marginals[i].mu_table = {};
    }
    s.marginals[0].mu = -2.0;
    s.marginals[1].mu = 4.0;
    s.marginals[2].mu = -6.5;
    s.marginals[3].mu = 1.2;
    s.marginals[4].mu = 1.5;
    s.marginals[5].mu = 0.9;
    s.marginals[6].mu = 1.1;
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const LargeScaleParams p = draw_lsps(spec, link_at(200, 25, 1.5, false), rng);
        CHECK(p.sf_db == -2.0);
        CHECK(p.k_factor_db == 4.0);
        CHECK(p.ds == doctest::Approx(std::pow(10.0, -6.5)));
        CHECK(p.asd == doctest::Approx(std::pow(10.0, 1.2)));
        CHECK(p.asa == doctest::Approx(std::pow(10.0, 1.5)));
        CHECK(p.esd == doctest::Approx(std::pow(10.0, 0.9)));
        CHECK(p.esa == doctest::Approx(std::pow(10.0, 1.1)));
    }
}

TEST_CASE("perfect correlation gives identical normalized draws")
{
    LspDistributionSpec spec = default_lsp_spec(Scenario::UMa);
    LspStateSpec& s = spec.los;
    s = narrow(s);
    s.correlation = {};
    for (std::size_t i = 0; i < kLspCount; ++i)
        s.correlation[i * kLspCount + i] = 1.0;
    const auto ds = static_cast<std::size_t>(Lsp::DS);
    const auto asd = static_cast<std::size_t>(Lsp::ASD);
    s.correlation[ds * kLspCount + asd] = s.correlation[asd * kLspCount + ds] = 1.0;
    s.marginals[asd] = s.marginals[ds];
    const LspModel model(spec);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const LargeScaleParams p = model.draw(link_at(80, 25, 1.5, true), rng);
        CHECK(p.asd == doctest::Approx(p.ds).epsilon(1e-12));
    }
}

TEST_CASE("empirical cross-correlation matches the configured matrix")
{
    for (Scenario sc : {Scenario::UMa, Scenario::UMi})
        for (LinkState st : {LinkState::Los, LinkState::Nlos, LinkState::O2i}) {
            if (sc == Scenario::UMi && st == LinkState::O2i)
                continue;
            LspDistributionSpec spec = default_lsp_spec(sc);
            LspStateSpec& s = st == LinkState::Los ? spec.los : st == LinkState::Nlos ? spec.nlos : spec.o2i;
            s = narrow(s);
            const LspModel model(spec);
            const LinkGeometry g = link_at(150, 25, 1.5, st == LinkState::Los, st == LinkState::O2i);
            Rng rng(99);
            const std::size_t n = 100000;
            std::array<std::vector<double>, kLspCount> cols;
            for (auto& c : cols)
                c.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                const auto v = log_values(model.draw(g, rng));
                for (std::size_t k = 0; k < kLspCount; ++k)
                    cols[k].push_back(v[k]);
            }
            for (std::size_t a = 0; a < kLspCount; ++a)
                for (std::size_t b = a + 1; b < kLspCount; ++b) {
                    CAPTURE(a);
                    CAPTURE(b);
                    CHECK(std::abs(oracle::correlation(cols[a], cols[b]) - s.correlation[a * kLspCount + b]) <= 0.03);
                }
        }
}

TEST_CASE("SF moments and marginal distributions after mixing")
{
    const LspDistributionSpec spec = default_lsp_spec(Scenario::UMa);
    const LspModel model(spec);
    const LinkGeometry g = link_at(250, 25, 1.5, false);
    Rng rng(2024);
    std::vector<double> sf;
    for (int i = 0; i < 100000; ++i)
        sf.push_back(model.draw(g, rng).sf_db);
    const double sigma = spec.nlos.marginal(Lsp::SF).sigma;
    CHECK(std::abs(oracle::mean(sf) - spec.nlos.marginal(Lsp::SF).mu) <= 0.1);
    CHECK(std::abs(oracle::stddev(sf) / sigma - 1.0) <= 0.02);

    LspDistributionSpec nspec = spec;
    nspec.nlos = narrow(nspec.nlos);
    const LspModel nmodel(nspec);
    std::array<std::vector<double>, kLspCount> cols;
    for (int i = 0; i < 10000; ++i) {
        const auto v = log_values(nmodel.draw(g, rng));
        for (std::size_t k = 0; k < kLspCount; ++k)
            cols[k].push_back(v[k]);
    }
    for (std::size_t k = 0; k < kLspCount; ++k) {
        const double mu = nspec.nlos.marginals[k].mu;
        const double sd = nspec.nlos.marginals[k].sigma;
        const double d = oracle::ks_statistic(cols[k], [&](double x) { return oracle::normal_cdf((x - mu) / sd); });
        CAPTURE(k);
        CHECK(oracle::ks_pvalue(d, cols[k].size()) > 0.01);
    }
}

TEST_CASE("spreads are capped")
{
    LspDistributionSpec spec = default_lsp_spec(Scenario::UMa);
    for (std::size_t i = 3; i < kLspCount; ++i) {
        spec.nlos.marginals[i].mu = 3.0;
        spec.nlos.marginals[i].mu_table = {};
    }
    Rng rng(1);
    const LargeScaleParams p = LspModel(spec).draw(link_at(100, 25, 1.5, false), rng);
    CHECK(p.asd == kMaxAzimuthSpreadDeg);
    CHECK(p.asa == kMaxAzimuthSpreadDeg);
    CHECK(p.esd == kMaxZenithSpreadDeg);
    CHECK(p.esa == kMaxZenithSpreadDeg);
}

TEST_CASE("invalid specs are configuration errors")
{
    LspDistributionSpec spec = default_lsp_spec(Scenario::UMa);
    auto& c = spec.los.correlation;
    c = {};
    for (std::size_t i = 0; i < kLspCount; ++i)
        c[i * kLspCount + i] = 1.0;
    c[0 * kLspCount + 1] = c[1 * kLspCount + 0] = 0.9;
    c[0 * kLspCount + 2] = c[2 * kLspCount + 0] = 0.9;
    c[1 * kLspCount + 2] = c[2 * kLspCount + 1] = -0.9;
    try {
        LspModel m(spec);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "lsp.los.correlation");
    }

    spec = default_lsp_spec(Scenario::UMa);
    spec.o2i.marginals[2].sigma = -1.0;
    try {
        LspModel m(spec);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "lsp.o2i.marginals.DS.sigma");
    }
}

TEST_CASE("psd_cholesky reproduces the matrix")
{
    for (Scenario sc : {Scenario::UMa, Scenario::UMi}) {
        const LspDistributionSpec spec = default_lsp_spec(sc);
        for (const LspStateSpec* s : {&spec.los, &spec.nlos, &spec.o2i}) {
            const auto l = psd_cholesky(s->correlation);
            for (std::size_t i = 0; i < kLspCount; ++i)
                for (std::size_t j = 0; j < kLspCount; ++j) {
                    double v = 0.0;
                    for (std::size_t k = 0; k < kLspCount; ++k)
                        v += l[i * kLspCount + k] * l[j * kLspCount + k];
                    CHECK(v == doctest::Approx(s->correlation[i * kLspCount + j]).epsilon(1e-9).scale(1.0));
                }
        }
    }
}

TEST_CASE("shared site draws")
{
    const LspModel model(default_lsp_spec(Scenario::UMa));
    const LinkGeometry g = link_at(180, 25, 1.5, false);
    const LargeScaleParams a = shared_site_lsps(model, g, 77, 12, 4);
    CHECK(a == shared_site_lsps(model, g, 77, 12, 4));
    CHECK_FALSE(a == shared_site_lsps(model, g, 78, 12, 4));

    std::vector<double> s1;
    std::vector<double> s2;
    for (std::size_t ue = 0; ue < 10000; ++ue) {
        s1.push_back(shared_site_lsps(model, g, 5, ue, 0).sf_db);
        s2.push_back(shared_site_lsps(model, g, 5, ue, 1).sf_db);
    }
    CHECK(std::abs(oracle::correlation(s1, s2)) < 0.05);
}

TEST_CASE("correlated field statistics")
{
    Rng rng(8);
    const double dc = 50.0;
    const CorrelatedField f(0, 0, 2000, 2000, 5.0, dc, rng);
    CHECK(f.nx() == 401);
    CHECK(f.ny() == 401);
    std::vector<double> all;
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t j = 0; j < f.ny(); ++j)
        for (std::size_t i = 0; i < f.nx(); ++i) {
            const double x = 5.0 * static_cast<double>(i);
            const double y = 5.0 * static_cast<double>(j);
            all.push_back(f.at(x, y));
            if (i + 10 < f.nx()) {
                a.push_back(f.at(x, y));
                b.push_back(f.at(x + 50.0, y));
            }
        }
    CHECK(std::abs(oracle::mean(all)) < 0.1);
    CHECK(std::abs(oracle::stddev(all) - 1.0) < 0.05);
    CHECK(std::abs(oracle::correlation(a, b) - std::exp(-1.0)) < 0.05);
    CHECK(f.at(-100, -100) == f.at(0, 0));
    CHECK(f.at(2.4, 0) == f.at(0, 0));
    CHECK_THROWS_AS(CorrelatedField(0, 0, 10, 10, 0.0, 5.0, rng), InvalidInput);
}

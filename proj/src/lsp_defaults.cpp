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

// Default large-scale parameter tables. Working domains as documented on LspMarginal.

#include "chan3d/lsp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace chan3d {

namespace {

using Matrix7 = std::array<double, kLspCount * kLspCount>;

DistanceTable tabulate(const std::function<double(double, double)>& f, std::vector<double> heights)
{
    DistanceTable t;
    for (double d = 0.0; d <= 1000.0; d += 50.0)
        t.d_2d_m.push_back(d);
    t.d_2d_m.push_back(2000.0);
    t.d_2d_m.push_back(5000.0);
    t.h_ue_m = std::move(heights);
    for (double d : t.d_2d_m)
        for (double h : t.h_ue_m)
            t.values.push_back(f(d, h));
    return t;
}

LspStateSpec make_state(std::array<std::array<double, 2>, kLspCount> mu_sigma, DistanceTable esd_mu, Matrix7 corr,
                        std::array<double, kLspCount> decorrelation)
{
    LspStateSpec s;
    for (std::size_t i = 0; i < kLspCount; ++i)
        s.marginals[i] = {mu_sigma[i][0], mu_sigma[i][1], {}};
    const auto esd = static_cast<std::size_t>(Lsp::ESD);
    s.marginals[esd].mu = esd_mu.eval(0.0, esd_mu.h_ue_m.front());
    s.marginals[esd].mu_table = std::move(esd_mu);
    s.correlation = corr;
    s.decorrelation_m = decorrelation;
    return s;
}

// Order: SF, K, DS, ASD, ASA, ESD, ESA.
constexpr Matrix7 kUmaLos{
    1.0, 0.0, -0.4, -0.5, -0.5, 0.0, -0.8,
    0.0, 1.0, -0.4, 0.0, -0.2, 0.0, 0.0,
    -0.4, -0.4, 1.0, 0.4, 0.8, -0.2, 0.0,
    -0.5, 0.0, 0.4, 1.0, 0.0, 0.5, 0.0,
    -0.5, -0.2, 0.8, 0.0, 1.0, -0.3, 0.4,
    0.0, 0.0, -0.2, 0.5, -0.3, 1.0, 0.0,
    -0.8, 0.0, 0.0, 0.0, 0.4, 0.0, 1.0,
};

constexpr Matrix7 kUmaNlos{
    1.0, 0.0, -0.4, -0.6, 0.0, 0.0, -0.4,
    0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    -0.4, 0.0, 1.0, 0.4, 0.6, -0.5, 0.0,
    -0.6, 0.0, 0.4, 1.0, 0.4, 0.5, -0.1,
    0.0, 0.0, 0.6, 0.4, 1.0, 0.0, 0.0,
    0.0, 0.0, -0.5, 0.5, 0.0, 1.0, 0.0,
    -0.4, 0.0, 0.0, -0.1, 0.0, 0.0, 1.0,
};

constexpr Matrix7 kO2i{
    1.0, 0.0, -0.5, 0.2, 0.0, 0.0, 0.0,
    0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    -0.5, 0.0, 1.0, 0.4, 0.4, -0.6, -0.2,
    0.2, 0.0, 0.4, 1.0, 0.0, -0.2, 0.0,
    0.0, 0.0, 0.4, 0.0, 1.0, 0.0, 0.5,
    0.0, 0.0, -0.6, -0.2, 0.0, 1.0, 0.5,
    0.0, 0.0, -0.2, 0.0, 0.5, 0.5, 1.0,
};

constexpr Matrix7 kUmiLos{
    1.0, 0.5, -0.4, -0.5, -0.4, 0.0, 0.0,
    0.5, 1.0, -0.7, -0.2, -0.3, 0.0, 0.0,
    -0.4, -0.7, 1.0, 0.5, 0.8, 0.0, 0.2,
    -0.5, -0.2, 0.5, 1.0, 0.4, 0.5, 0.3,
    -0.4, -0.3, 0.8, 0.4, 1.0, 0.0, 0.0,
    0.0, 0.0, 0.0, 0.5, 0.0, 1.0, 0.0,
    0.0, 0.0, 0.2, 0.3, 0.0, 0.0, 1.0,
};

constexpr Matrix7 kUmiNlos{
    1.0, 0.0, -0.7, 0.0, -0.4, 0.0, 0.0,
    0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0,
    -0.7, 0.0, 1.0, 0.0, 0.4, -0.5, 0.0,
    0.0, 0.0, 0.0, 1.0, 0.0, 0.5, 0.5,
    -0.4, 0.0, 0.4, 0.0, 1.0, 0.0, 0.2,
    0.0, 0.0, -0.5, 0.5, 0.0, 1.0, 0.0,
    0.0, 0.0, 0.0, 0.5, 0.2, 0.0, 1.0,
};

const std::vector<double> kHeights{1.5, 22.5};

} // namespace

LspDistributionSpec default_lsp_spec(Scenario scenario)
{
    LspDistributionSpec s;
    if (scenario == Scenario::UMa) {
        const auto esd_los = [](double d, double h) { return std::max(-0.5, -2.1 * d / 1000.0 - 0.01 * (h - 1.5) + 0.75); };
        const auto esd_nlos = [](double d, double h) { return std::max(-0.5, -2.1 * d / 1000.0 - 0.01 * (h - 1.5) + 0.9); };
        s.los = make_state({{{0.0, 4.0}, {9.0, 3.5}, {-7.03, 0.66}, {1.15, 0.28}, {1.81, 0.20}, {0.0, 0.40}, {0.95, 0.16}}},
                           tabulate(esd_los, kHeights), kUmaLos, {37.0, 12.0, 30.0, 18.0, 15.0, 15.0, 15.0});
        s.nlos = make_state({{{0.0, 6.0}, {0.0, 0.0}, {-6.44, 0.39}, {1.41, 0.28}, {1.87, 0.11}, {0.0, 0.49}, {1.26, 0.16}}},
                            tabulate(esd_nlos, kHeights), kUmaNlos, {50.0, 0.0, 40.0, 50.0, 50.0, 50.0, 50.0});
        s.o2i = make_state({{{0.0, 7.0}, {0.0, 0.0}, {-6.62, 0.32}, {1.25, 0.42}, {1.76, 0.16}, {0.0, 0.49}, {1.01, 0.43}}},
                           tabulate(esd_nlos, kHeights), kO2i, {7.0, 0.0, 10.0, 11.0, 17.0, 25.0, 25.0});
    } else {
        const double h_bs = 10.0;
        const auto esd_los = [h_bs](double d, double h) {
            return std::max(-0.5, -14.8 * d / 1000.0 + 0.01 * std::abs(h - h_bs) + 0.83);
        };
        const auto esd_nlos = [h_bs](double d, double h) {
            return std::max(-0.5, -3.1 * d / 1000.0 + 0.01 * std::max(h - h_bs, 0.0) + 0.2);
        };
        const std::vector<double> heights{1.5, 10.0, 22.5};
        s.los = make_state({{{0.0, 3.0}, {9.0, 5.0}, {-7.19, 0.40}, {1.20, 0.43}, {1.75, 0.19}, {0.0, 0.35}, {0.60, 0.16}}},
                           tabulate(esd_los, heights), kUmiLos, {10.0, 15.0, 7.0, 8.0, 8.0, 12.0, 12.0});
        s.nlos = make_state({{{0.0, 4.0}, {0.0, 0.0}, {-6.89, 0.54}, {1.41, 0.17}, {1.84, 0.15}, {0.0, 0.35}, {0.88, 0.16}}},
                            tabulate(esd_nlos, heights), kUmiNlos, {13.0, 0.0, 10.0, 10.0, 9.0, 10.0, 10.0});
        s.o2i = make_state({{{0.0, 7.0}, {0.0, 0.0}, {-6.62, 0.32}, {1.25, 0.42}, {1.76, 0.16}, {0.0, 0.35}, {1.01, 0.43}}},
                           tabulate(esd_nlos, heights), kO2i, {7.0, 0.0, 10.0, 11.0, 17.0, 25.0, 25.0});
    }
    return s;
}

} // namespace chan3d

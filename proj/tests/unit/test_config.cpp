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

#include "chan3d/config.hpp"
#include "chan3d/errors.hpp"
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

using namespace chan3d;

namespace {

std::string field_of(const std::string& text)
{
    try {
        (void)parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

} // namespace

TEST_CASE("a minimal config resolves to the scenario defaults")
{
    RunConfig cfg = parse_config_text(R"({"seed": 42})");
    RunConfig expect = default_config(Scenario::UMa);
    expect.seed = 42;
    CHECK(cfg == expect);

    RunConfig umi = parse_config_text(R"({"seed": 3, "scenario": "UMi"})");
    CHECK(umi.layout.isd_m == 200.0);
    CHECK(umi.layout.h_bs_m == 10.0);
    CHECK(umi.los.d2_m == 36.0);
    CHECK(umi.pathloss.ue_height_correction_db_per_m == 0.3);
    CHECK_NOTHROW(validate_config(umi));
}

TEST_CASE("the seed is required unless overridden")
{
    CHECK(field_of("{}") == "seed");
    CHECK(parse_config_text("{}", 9).seed == 9);
    CHECK(parse_config_text(R"({"seed": 1})", 9).seed == 9);
}

TEST_CASE("invalid configs name the offending field")
{
    CHECK(field_of(R"({"seed": 1, "layout": {"isd_m": -500}})") == "layout.isd_m");
    CHECK(field_of(R"({"seed": 1, "layout": {"isd": 500}})") == "layout.isd");
    CHECK(field_of(R"({"seed": 1, "bogus": true})") == "bogus");
    CHECK(field_of(R"({"seed": 1, "n_ue": "many"})") == "n_ue");
    CHECK(field_of(R"({"seed": 1, "n_ue": -4})") == "n_ue");
    CHECK(field_of(R"({"seed": 1, "phase": 3})") == "phase");
    CHECK(field_of(R"({"seed": 1, "drop_mode": "4d"})") == "drop_mode");
    CHECK(field_of(R"({"seed": 1, "ue": {"indoor_probability": 2}})") == "ue.indoor_probability");
    CHECK(field_of(R"({"seed": 1, "sweep": {"d_v": [0.5, "x"]}})") == "sweep.d_v[1]");
    CHECK(field_of(R"({"seed": 1, "bs_antenna": {"rows": 10, "elements_per_port": 3}})").rfind("bs_antenna", 0) == 0);
    CHECK(field_of(R"({"seed": 1, "lsp": {"los": {"correlation": [[1]]}}})") == "lsp.los.correlation");
    CHECK(field_of(R"({"seed": 1, "ssp": {"nlos": {"r_tau": 0}}})") == "ssp.nlos.r_tau");
    CHECK(field_of(R"({"seed": 1, "ssp": {"ray_offsets": [0.1, 0.2]}})") == "ssp.ray_offsets");
    CHECK(field_of("[1, 2]") == "<root>");
    CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);
}

TEST_CASE("a non positive semi-definite correlation matrix is rejected at load time")
{
    std::string rows;
    for (int i = 0; i < 7; ++i) {
        std::string row = "[";
        for (int j = 0; j < 7; ++j) {
            double v = i == j ? 1.0 : 0.0;
            if ((i == 0 && j == 1) || (i == 1 && j == 0) || (i == 0 && j == 2) || (i == 2 && j == 0))
                v = 0.9;
            if ((i == 1 && j == 2) || (i == 2 && j == 1))
                v = -0.9;
            row += std::to_string(v) + (j < 6 ? "," : "]");
        }
        rows += row + (i < 6 ? "," : "");
    }
    CHECK(field_of(R"({"seed": 1, "lsp": {"nlos": {"correlation": [)" + rows + "]}}}") == "lsp.nlos.correlation");
}

TEST_CASE("emitted configs parse back to the same value")
{
    for (Scenario s : {Scenario::UMa, Scenario::UMi}) {
        RunConfig cfg = default_config(s);
        CHECK(parse_config_text(emit_config(cfg)) == cfg);
        cfg.seed = 123456789012345ULL;
        cfg.phase = 2;
        cfg.drop_mode = DropMode::Legacy2d;
        cfg.times_s = {0.0, 0.0125};
        cfg.ue_antenna.polarization = Polarization::Cross;
        cfg.bs_antenna.polarization = Polarization::Cross;
        cfg.bs_antenna.slant_deg = 45.0;
        cfg.bs_antenna.columns = 2;
        cfg.bs_antenna.field_model = FieldModel::LocalToGlobal;
        cfg.los.model = LosModel::Itu;
        cfg.ssp.xpr_convention = XprConvention::Inverse;
        cfg.ssp.split_strongest_clusters = true;
        cfg.sweep.downtilt_deg = {3.0, 7.25};
        cfg.sweep.d_v = {};
        cfg.wrap_around = true;
        cfg.lsp.nlos.marginals[3].sigma = 0.123456789;
        cfg.pathloss.use_3d_distance = false;
        const RunConfig back = parse_config_text(emit_config(cfg));
        CHECK(back == cfg);
        CHECK(emit_config(back) == emit_config(cfg));
    }
}

TEST_CASE("config hash ignores output directory and worker count")
{
    RunConfig a = default_config(Scenario::UMa);
    RunConfig b = a;
    b.output_dir = "elsewhere";
    b.workers = 8;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(emit_experiment_config(a) == emit_experiment_config(b));
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(emit_experiment_config(a).find("workers") == std::string::npos);
    CHECK(emit_experiment_config(a).find("output_dir") == std::string::npos);
}

TEST_CASE("config files")
{
    const auto dir = std::filesystem::temp_directory_path() / "chan3d_test_config";
    std::filesystem::create_directories(dir);
    const auto path = dir / "run.json";
    {
        std::ofstream os(path);
        os << R"({"seed": 17, "n_ue": 114, "sweep": {"downtilt_deg": [8]}})";
    }
    const RunConfig cfg = parse_config(path);
    CHECK(cfg.seed == 17);
    CHECK(cfg.n_ue == 114);
    CHECK(cfg.sweep.downtilt_deg == std::vector<double>{8.0});
    CHECK(parse_config(path, 5).seed == 5);
    CHECK_THROWS_AS(parse_config(dir / "missing.json"), IoError);
    std::filesystem::remove_all(dir);
}

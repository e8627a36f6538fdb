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

// chan3d: batch driver for calibration campaigns.
//
//   chan3d run --config cfg.json [--seed N] [--phase 1|2] [--downtilt 6,9,12] [--dv 0.5,0.8]
//              [--drop-mode 3d|legacy2d] [--output DIR] [--workers N] [-v]
//   chan3d defaults [--scenario UMa|UMi]
//   chan3d check --config cfg.json

#include "chan3d/campaign.hpp"
#include "chan3d/config.hpp"
#include "chan3d/errors.hpp"
#include "chan3d/simd/kernels.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> phase;
    std::vector<double> downtilt;
    std::vector<double> d_v;
    std::optional<std::string> drop_mode;
    std::optional<std::string> output;
    std::optional<std::size_t> workers;
    int verbosity = 0;
    bool quiet = false;
};

int run(const RunOptions& o)
{
    chan3d::RunConfig cfg = chan3d::parse_config(o.config, o.seed);
    if (o.phase)
        cfg.phase = *o.phase;
    if (!o.downtilt.empty())
        cfg.sweep.downtilt_deg = o.downtilt;
    if (!o.d_v.empty())
        cfg.sweep.d_v = o.d_v;
    if (o.drop_mode)
        cfg.drop_mode = *o.drop_mode == "legacy2d" ? chan3d::DropMode::Legacy2d : chan3d::DropMode::ThreeD;
    if (o.output)
        cfg.output_dir = *o.output;
    if (o.workers)
        cfg.workers = *o.workers;
    chan3d::validate_config(cfg);

    const auto start = std::chrono::steady_clock::now();
    chan3d::LogFn log;
    if (!o.quiet)
        log = [](const std::string& m) { std::fprintf(stderr, "chan3d: %s\n", m.c_str()); };
    if (o.verbosity > 0 && log)
        log(std::string("kernels: ") + std::string(chan3d::simd::isa_name(chan3d::simd::kernels().isa)));

    const chan3d::CampaignResult result = chan3d::run_campaign(cfg, true, log);
    if (!o.quiet) {
        for (const auto& f : result.files)
            std::printf("%s\n", f.string().c_str());
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::fprintf(stderr, "chan3d: %zu sweep point(s), %zu files, %.1f s\n", result.points.size(), result.files.size(), secs);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"3D stochastic MIMO channel and system-level calibration simulator"};
    app.require_subcommand(1);

    RunOptions ro;
    CLI::App* run_cmd = app.add_subcommand("run", "Run a calibration campaign");
    run_cmd->add_option("-c,--config", ro.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-s,--seed", ro.seed, "Master seed (overrides the config)");
    run_cmd->add_option("-p,--phase", ro.phase, "Metric phase")->check(CLI::IsMember({1, 2}));
    run_cmd->add_option("--downtilt", ro.downtilt, "Downtilt sweep in degrees")->delimiter(',');
    run_cmd->add_option("--dv", ro.d_v, "Vertical element spacing sweep in wavelengths")->delimiter(',');
    run_cmd->add_option("--drop-mode", ro.drop_mode, "UE dropping")->check(CLI::IsMember({"3d", "legacy2d"}));
    run_cmd->add_option("-o,--output", ro.output, "Output directory");
    run_cmd->add_option("-j,--workers", ro.workers, "Worker threads")->check(CLI::Range(1, 1024));
    run_cmd->add_flag("-v,--verbose", ro.verbosity, "More log output");
    run_cmd->add_flag("-q,--quiet", ro.quiet, "No log output");

    std::string scenario = "UMa";
    CLI::App* defaults_cmd = app.add_subcommand("defaults", "Print the complete default configuration");
    defaults_cmd->add_option("--scenario", scenario, "Scenario")->check(CLI::IsMember({"UMa", "UMi"}));

    std::string check_path;
    CLI::App* check_cmd = app.add_subcommand("check", "Validate a configuration and print its hash");
    check_cmd->add_option("-c,--config", check_path, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return run(ro);
        if (defaults_cmd->parsed()) {
            std::cout << chan3d::emit_config(
                chan3d::default_config(scenario == "UMi" ? chan3d::Scenario::UMi : chan3d::Scenario::UMa));
            return 0;
        }
        if (check_cmd->parsed()) {
            const chan3d::RunConfig cfg = chan3d::parse_config(check_path);
            std::printf("ok config_hash=%016llx\n", static_cast<unsigned long long>(chan3d::config_hash(cfg)));
            return 0;
        }
    } catch (const chan3d::ConfigError& e) {
        std::fprintf(stderr, "chan3d: configuration error: %s\n", e.what());
        return 2;
    } catch (const chan3d::IoError& e) {
        std::fprintf(stderr, "chan3d: I/O error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "chan3d: error: %s\n", e.what());
        return 1;
    }
    return 0;
}

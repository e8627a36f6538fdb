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

#include "chan3d/campaign.hpp"

#include "chan3d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace chan3d {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn)
{
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        threads.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<SweepPoint> sweep_points(const RunConfig& cfg)
{
    std::vector<double> tilts = cfg.sweep.downtilt_deg;
    std::vector<double> dvs = cfg.sweep.d_v;
    if (tilts.empty())
        tilts.push_back(cfg.bs_antenna.downtilt_deg);
    if (dvs.empty())
        dvs.push_back(cfg.bs_antenna.d_v);
    std::vector<SweepPoint> out;
    for (double t : tilts)
        for (double d : dvs)
            out.push_back({t, d});
    return out;
}

std::string sweep_tag(const RunConfig& cfg, const SweepPoint& p)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s_tilt%g_dv%g", cfg.drop_mode == DropMode::ThreeD ? "3d" : "legacy2d",
                  p.downtilt_deg, p.d_v);
    return buf;
}

namespace {

RunConfig effective_config(const RunConfig& cfg)
{
    validate_config(cfg);
    RunConfig c = cfg;
    if (c.drop_mode == DropMode::Legacy2d) {
        c.bs_antenna.pattern = c.legacy2d.pattern;
        c.pathloss.use_3d_distance = c.legacy2d.use_3d_distance;
    }
    return c;
}

struct BsModel {
    ArrayGeometry geometry = ArrayGeometry::single_element();
    PatternModel pattern;
    std::array<Rotation, 3> orientations;
};

BsModel make_bs_model(const RunConfig& cfg, const SweepPoint& p)
{
    const BsAntennaConfig& a = cfg.bs_antenna;
    const double lambda = wavelength(cfg.carrier_hz);
    BsModel m;
    PanelSpec ps;
    ps.polarization = a.polarization;
    ps.slant = deg2rad(a.slant_deg);
    if (a.pattern == PatternKind::ItuPort) {
        m.pattern = {PatternKind::ItuPort, a.itu_port};
        m.pattern.spec.tilt_deg = p.downtilt_deg;
    } else {
        ps.rows = a.rows;
        ps.columns = a.columns;
        ps.d_v = p.d_v;
        ps.d_h = a.d_h;
        ps.elements_per_port = a.elements_per_port;
        ps.tilt_zenith = kPi / 2.0 + deg2rad(p.downtilt_deg);
        m.pattern = {a.pattern, a.element};
    }
    m.geometry = ArrayGeometry::uniform_panel(ps, lambda);
    for (std::size_t k = 0; k < 3; ++k)
        m.orientations[k] = Rotation::from_euler(deg2rad(120.0 * static_cast<double>(k)), deg2rad(a.mechanical_tilt_deg), 0.0);
    return m;
}

Antenna make_ue_antenna(const RunConfig& cfg)
{
    Antenna ant;
    PanelSpec ps;
    ps.polarization = cfg.ue_antenna.polarization;
    ps.slant = cfg.ue_antenna.polarization == Polarization::Cross ? kPi / 4.0 : 0.0;
    ant.geometry = ArrayGeometry::uniform_panel(ps, wavelength(cfg.carrier_hz));
    ant.pattern = {cfg.ue_antenna.pattern, PatternSpec::element_3gpp()};
    return ant;
}

void fill_spreads(const ClusterSet& set, double k, const LosAngles& los, DropReport& r)
{
    const double diffuse = 1.0 / (k + 1.0);
    const double direct = k / (k + 1.0);
    std::vector<double> p, aod, aoa, zod, zoa, tau, tau_p;
    for (std::size_t n = 0; n < set.clusters.size(); ++n) {
        const Cluster& c = set.clusters[n];
        tau.push_back(c.delay);
        tau_p.push_back(c.power * diffuse + (n == 0 ? direct : 0.0));
        for (const Subpath& sp : c.subpaths) {
            p.push_back(sp.power * diffuse);
            aod.push_back(sp.departure.azimuth);
            aoa.push_back(sp.arrival.azimuth);
            zod.push_back(sp.departure.zenith);
            zoa.push_back(sp.arrival.zenith);
        }
    }
    if (direct > 0.0) {
        p.push_back(direct);
        aod.push_back(los.departure.azimuth);
        aoa.push_back(los.arrival.azimuth);
        zod.push_back(los.departure.zenith);
        zoa.push_back(los.arrival.zenith);
    }
    r.asd = angular_spread_deg(aod, p);
    r.asa = angular_spread_deg(aoa, p);
    r.esd = angular_spread_deg(zod, p);
    r.esa = angular_spread_deg(zoa, p);
    r.ds = delay_spread_s(tau, tau_p);
}

} // namespace

Campaign::Campaign(const RunConfig& cfg)
    : cfg_(effective_config(cfg)), layout_(cfg_.layout), lsp_model_(cfg_.lsp)
{
    Rng drop_rng = substream(cfg_.seed, StreamTag::Drop);
    ues_ = cfg_.drop_mode == DropMode::ThreeD ? drop_ues(cfg_.n_ue, layout_, cfg_.ue, drop_rng)
                                              : legacy_2d_drop(cfg_.n_ue, layout_, cfg_.ue, drop_rng);
    build_links();
}

void Campaign::build_links()
{
    const std::size_t n_sites = layout_.sites().size();
    links_.assign(ues_.size() * n_sites, LinkRecord{});
    std::vector<std::array<double, kLspCount>> normals(links_.size());

    parallel_for(ues_.size(), cfg_.workers, [&](std::size_t u) {
        const Ue& ue = ues_[u];
        for (std::size_t s = 0; s < n_sites; ++s) {
            LinkRecord& rec = links_[u * n_sites + s];
            rec.bs_position = layout_.site_image(s, ue.position, cfg_.wrap_around);
            const double d_2d = horizontal_distance(rec.bs_position, ue.position);
            Rng los_rng = substream(cfg_.seed, StreamTag::LosState, {u, s});
            const bool los =
                std::uniform_real_distribution<double>(0.0, 1.0)(los_rng) < los_probability(cfg_.scenario, cfg_.los, d_2d, ue.position.z);
            rec.geometry = make_link_geometry(rec.bs_position, ue.position, ue.indoor, los);
            rec.angles = los_angles(rec.bs_position, ue.position);
            rec.pathloss_db = pathloss_db(cfg_.scenario, cfg_.pathloss, rec.geometry, cfg_.carrier_hz);
            Rng lsp_rng = substream(cfg_.seed, StreamTag::LargeScale, {u, s});
            normals[u * n_sites + s] = draw_standard_normals(lsp_rng);
        }
    });

    if (cfg_.lsp_spatial_correlation)
        apply_spatial_fields(normals);

    parallel_for(ues_.size(), cfg_.workers, [&](std::size_t u) {
        for (std::size_t s = 0; s < n_sites; ++s) {
            LinkRecord& rec = links_[u * n_sites + s];
            rec.lsp = lsp_model_.from_normals(rec.geometry, normals[u * n_sites + s]);
            const LspStateSpec& st = cfg_.lsp.for_state(link_state(rec.geometry));
            rec.esd_mean_log10 = st.marginal(Lsp::ESD).mean_at(rec.geometry.d_2d, rec.geometry.h_ue);
        }
    });
}

// Replaces the i.i.d. normals of spatially correlated LSPs by samples of one field per
// (site, link state, LSP). Phase 1 only consumes shadow fading, so only that field is built there.
void Campaign::apply_spatial_fields(std::vector<std::array<double, kLspCount>>& normals) const
{
    const std::size_t n_sites = layout_.sites().size();
    const double spacing = cfg_.lsp_grid_spacing_m;
    double x0 = ues_.front().position.x, x1 = x0, y0 = ues_.front().position.y, y1 = y0;
    for (const Ue& ue : ues_) {
        x0 = std::min(x0, ue.position.x);
        x1 = std::max(x1, ue.position.x);
        y0 = std::min(y0, ue.position.y);
        y1 = std::max(y1, ue.position.y);
    }
    const std::size_t n_lsp = cfg_.phase == 1 ? 1 : kLspCount;

    parallel_for(n_sites, cfg_.workers, [&](std::size_t s) {
        for (LinkState state : {LinkState::Los, LinkState::Nlos, LinkState::O2i}) {
            std::vector<std::size_t> members;
            for (std::size_t u = 0; u < ues_.size(); ++u)
                if (link_state(links_[u * n_sites + s].geometry) == state)
                    members.push_back(u);
            if (members.empty())
                continue;
            const LspStateSpec& st = cfg_.lsp.for_state(state);
            for (std::size_t i = 0; i < n_lsp; ++i) {
                const double d = st.decorrelation_m[i];
                if (!(d > 0.0))
                    continue;
                Rng rng = substream(cfg_.seed, StreamTag::SpatialField, {s, static_cast<std::uint64_t>(state), i});
                const CorrelatedField field(x0 - spacing, y0 - spacing, x1 + spacing, y1 + spacing, spacing, d, rng);
                for (std::size_t u : members)
                    normals[u * n_sites + s][i] = field.at(ues_[u].position.x, ues_[u].position.y);
            }
        }
    });
}

PointResult Campaign::evaluate(const SweepPoint& point) const
{
    return cfg_.phase == 1 ? evaluate_phase1(point) : evaluate_phase2(point);
}

PointResult Campaign::evaluate_phase1(const SweepPoint& point) const
{
    const BsModel bs = make_bs_model(cfg_, point);
    const PatternModel ue_pattern{cfg_.ue_antenna.pattern, PatternSpec::element_3gpp()};
    const double lambda = wavelength(cfg_.carrier_hz);
    const std::size_t n_sites = layout_.sites().size();
    const std::size_t n_cells = layout_.cell_count();

    PointResult result;
    result.point = point;
    result.reports.resize(ues_.size());
    parallel_for(ues_.size(), cfg_.workers, [&](std::size_t u) {
        std::vector<AngleVector> local(n_cells);
        std::vector<double> g_t(n_cells);
        std::vector<double> rsrp(n_cells);
        for (std::size_t s = 0; s < n_sites; ++s)
            for (std::size_t k = 0; k < 3; ++k)
                local[3 * s + k] = to_local(bs.orientations[k], link(u, s).angles.departure);
        if (bs.pattern.kind == PatternKind::ItuPort) {
            for (std::size_t c = 0; c < n_cells; ++c)
                g_t[c] = port_gain_itu_db(bs.pattern.spec, local[c]);
        } else {
            composite_gain_db(bs.pattern, bs.geometry, 0, local, lambda, g_t);
        }
        for (std::size_t c = 0; c < n_cells; ++c) {
            const LinkRecord& rec = link(u, c / 3);
            const double g_r = ue_pattern.gain_db(rec.angles.arrival);
            rsrp[c] = rsrp_db(layout_.cell(c).ptx_dbm, g_t[c], g_r, rec.pathloss_db, rec.lsp.sf_db);
        }
        const std::size_t serving = attach(rsrp);
        DropReport& r = result.reports[u];
        r.ue_id = u;
        r.site = serving / 3;
        r.cell = serving % 3;
        r.cl_db = coupling_gain_db(rsrp[serving], layout_.cell(serving).ptx_dbm);
        r.gf_db = geometry_factor_db(rsrp, serving);
    });
    return result;
}

PointResult Campaign::evaluate_phase2(const SweepPoint& point) const
{
    const BsModel bs = make_bs_model(cfg_, point);
    std::array<Antenna, 3> tx;
    for (std::size_t k = 0; k < 3; ++k)
        tx[k] = Antenna{bs.geometry, bs.orientations[k], bs.pattern, cfg_.bs_antenna.field_model};
    const Antenna rx = make_ue_antenna(cfg_);
    const std::size_t n_sites = layout_.sites().size();
    const std::size_t n_cells = layout_.cell_count();
    const std::size_t n_dump = std::min(cfg_.dump_realizations, ues_.size());

    PointResult result;
    result.point = point;
    result.reports.resize(ues_.size());
    result.serving_realizations.resize(n_dump);
    parallel_for(ues_.size(), cfg_.workers, [&](std::size_t u) {
        const Ue& ue = ues_[u];
        std::vector<ClusterSet> sets(n_cells);
        std::vector<ChannelRealization> reals(n_cells);
        std::vector<double> rsrp(n_cells);
        std::vector<double> k_rice(n_cells, 0.0);
        for (std::size_t s = 0; s < n_sites; ++s) {
            const LinkRecord& rec = link(u, s);
            const LinkState state = link_state(rec.geometry);
            const SmallScaleInputs in{state, rec.lsp, rec.angles, rec.geometry.d_2d, rec.geometry.h_ue, rec.esd_mean_log10};
            for (std::size_t k = 0; k < 3; ++k) {
                const std::size_t c = 3 * s + k;
                Rng rng = substream(cfg_.seed, StreamTag::SmallScale, {u, c});
                sets[c] = generate_small_scale(cfg_.ssp, in, rng);
                k_rice[c] = state == LinkState::Los ? db_to_linear(rec.lsp.k_factor_db) : 0.0;
                const LinkContext ctx{cfg_.carrier_hz, &sets[c], &tx[k], &rx, rec.pathloss_db, rec.lsp.sf_db,
                                      k_rice[c], rec.angles, ue.velocity, cfg_.ssp.xpr_convention};
                reals[c] = synthesize(ctx, cfg_.times_s, ChannelSpace::Port);
                rsrp[c] = rsrp_fast_fading_db(layout_.cell(c).ptx_dbm, reals[c]);
            }
        }
        const std::size_t serving = attach(rsrp);
        DropReport& r = result.reports[u];
        r.ue_id = u;
        r.site = serving / 3;
        r.cell = serving % 3;
        r.cl_db = coupling_gain_db(rsrp[serving], layout_.cell(serving).ptx_dbm);
        r.gf_db = geometry_factor_db(rsrp, serving);
        fill_spreads(sets[serving], k_rice[serving], link(u, serving / 3).angles, r);
        const std::vector<double> ev = top_eigenvalues(reals[serving], 2);
        r.l1 = ev[0];
        r.l2 = ev[1];
        if (u < n_dump)
            result.serving_realizations[u] = std::move(reals[serving]);
    });
    return result;
}

void write_cdf_file(const std::filesystem::path& path, const std::string& metric, std::span<const double> samples,
                    const RunConfig& cfg, const SweepPoint& point)
{
    const std::vector<CdfPoint> cdf = empirical_cdf(samples);
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    char buf[256];
    out << "# chan3d empirical CDF\n";
    out << "# metric=" << metric << "\n";
    std::snprintf(buf, sizeof buf, "# config_hash=%016llx seed=%llu scenario=%s phase=%d drop_mode=%s downtilt_deg=%g d_v=%g\n",
                  static_cast<unsigned long long>(config_hash(cfg)), static_cast<unsigned long long>(cfg.seed),
                  std::string(to_string(cfg.scenario)).c_str(), cfg.phase,
                  cfg.drop_mode == DropMode::ThreeD ? "3d" : "legacy2d", point.downtilt_deg, point.d_v);
    out << buf;
    out << "# samples=" << cdf.size() << "\n# columns: value probability\n";
    for (const CdfPoint& p : cdf) {
        std::snprintf(buf, sizeof buf, "%.10g %.10g\n", p.value, p.probability);
        out << buf;
    }
    if (!out)
        throw IoError("failed writing " + path.string());
}

CampaignResult run_campaign(const RunConfig& cfg, bool write_files, const LogFn& log)
{
    const auto say = [&](const std::string& m) {
        if (log)
            log(m);
    };
    std::filesystem::path dir(cfg.output_dir);
    if (write_files) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir))
            throw IoError("cannot create output directory " + dir.string());
    }

    say("dropping " + std::to_string(cfg.n_ue) + " UEs and drawing link parameters");
    const Campaign campaign(cfg);
    const RunConfig& eff = campaign.config();

    CampaignResult result;
    if (write_files) {
        const auto path = dir / "config_used.json";
        std::ofstream out(path, std::ios::binary);
        out << emit_experiment_config(cfg);
        if (!out)
            throw IoError("cannot write " + path.string());
        result.files.push_back(path);
    }

    for (const SweepPoint& p : sweep_points(eff)) {
        const std::string tag = sweep_tag(eff, p);
        say("evaluating " + tag);
        PointResult pr = campaign.evaluate(p);
        if (write_files) {
            std::vector<std::pair<std::string, std::vector<double>>> metrics;
            const auto column = [&](auto get) {
                std::vector<double> v;
                v.reserve(pr.reports.size());
                for (const DropReport& r : pr.reports)
                    v.push_back(get(r));
                return v;
            };
            metrics.emplace_back("gf_db", column([](const DropReport& r) { return r.gf_db; }));
            metrics.emplace_back("cl_db", column([](const DropReport& r) { return r.cl_db; }));
            if (eff.phase == 2) {
                metrics.emplace_back("asd_deg", column([](const DropReport& r) { return r.asd; }));
                metrics.emplace_back("asa_deg", column([](const DropReport& r) { return r.asa; }));
                metrics.emplace_back("esd_deg", column([](const DropReport& r) { return r.esd; }));
                metrics.emplace_back("esa_deg", column([](const DropReport& r) { return r.esa; }));
                metrics.emplace_back("ds_s", column([](const DropReport& r) { return r.ds; }));
                metrics.emplace_back("l1_db", column([](const DropReport& r) { return 10.0 * std::log10(r.l1); }));
                metrics.emplace_back("l2_db", column([](const DropReport& r) { return 10.0 * std::log10(r.l2); }));
            }
            for (const auto& [name, values] : metrics) {
                if (std::none_of(values.begin(), values.end(), [](double x) { return std::isfinite(x); }))
                    continue;
                const std::string stem = name.substr(0, name.find('_'));
                const auto path = dir / (stem + "_cdf_" + tag + ".txt");
                write_cdf_file(path, name, values, cfg, p);
                result.files.push_back(path);
            }
            const auto report_path = dir / ("report_" + tag + ".csv");
            std::ofstream rep(report_path, std::ios::binary);
            write_report_csv(rep, pr.reports);
            if (!rep)
                throw IoError("cannot write " + report_path.string());
            result.files.push_back(report_path);

            if (!pr.serving_realizations.empty()) {
                const auto dump_path = dir / ("realizations_" + tag + ".txt");
                std::ofstream dump(dump_path, std::ios::binary);
                for (std::size_t u = 0; u < pr.serving_realizations.size(); ++u) {
                    dump << "# ue=" << u << " site=" << pr.reports[u].site << " cell=" << pr.reports[u].cell << "\n";
                    write_realization(dump, pr.serving_realizations[u]);
                }
                if (!dump)
                    throw IoError("cannot write " + dump_path.string());
                result.files.push_back(dump_path);
            }
        }
        result.points.push_back(std::move(pr));
    }
    return result;
}

} // namespace chan3d

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

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace chan3d {

namespace {

using Json = nlohmann::ordered_json;

template <class E>
using NameTable = std::vector<std::pair<E, const char*>>;

const NameTable<Scenario> kScenarioNames{{Scenario::UMa, "UMa"}, {Scenario::UMi, "UMi"}};
const NameTable<DropMode> kDropModeNames{{DropMode::ThreeD, "3d"}, {DropMode::Legacy2d, "legacy2d"}};
const NameTable<Polarization> kPolarizationNames{{Polarization::Single, "single"}, {Polarization::Cross, "cross"}};
const NameTable<PatternKind> kPatternNames{
    {PatternKind::Isotropic, "isotropic"}, {PatternKind::Element3gpp, "element_3gpp"}, {PatternKind::ItuPort, "itu_port"}};
const NameTable<FieldModel> kFieldModelNames{{FieldModel::Slant36814, "slant"}, {FieldModel::LocalToGlobal, "lcs"}};
const NameTable<LosModel> kLosModelNames{{LosModel::Exp18, "exp18"}, {LosModel::Itu, "itu"}};
const NameTable<XprConvention> kXprNames{{XprConvention::Direct, "direct"}, {XprConvention::Inverse, "inverse"}};

template <class E>
const char* name_of(E v, const NameTable<E>& table)
{
    for (const auto& [e, n] : table)
        if (e == v)
            return n;
    return "?";
}

std::string join(const std::string& path, std::string_view key)
{
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// ---------------------------------------------------------------- emit

Json table_json(const DistanceTable& t)
{
    return Json{{"d_2d_m", t.d_2d_m}, {"h_ue_m", t.h_ue_m}, {"values", t.values}};
}

Json pattern_json(const PatternSpec& p, bool with_tilt)
{
    Json j{{"g_max_dbi", p.g_max_dbi}, {"a_m_db", p.a_m_db}, {"sla_v_db", p.sla_v_db},
           {"phi_3db_deg", p.phi_3db_deg}, {"theta_3db_deg", p.theta_3db_deg}};
    if (with_tilt)
        j["tilt_deg"] = p.tilt_deg;
    return j;
}

Json lsp_state_json(const LspStateSpec& s)
{
    Json marginals = Json::object();
    Json decorrelation = Json::object();
    for (std::size_t i = 0; i < kLspCount; ++i) {
        const auto& m = s.marginals[i];
        marginals[std::string(kLspNames[i])] = Json{{"mu", m.mu}, {"sigma", m.sigma}, {"mu_table", table_json(m.mu_table)}};
        decorrelation[std::string(kLspNames[i])] = s.decorrelation_m[i];
    }
    Json corr = Json::array();
    for (std::size_t i = 0; i < kLspCount; ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < kLspCount; ++k)
            row.push_back(s.correlation[i * kLspCount + k]);
        corr.push_back(std::move(row));
    }
    return Json{{"marginals", std::move(marginals)}, {"correlation", std::move(corr)}, {"decorrelation_m", std::move(decorrelation)}};
}

Json ssp_state_json(const SspStateSpec& s)
{
    return Json{{"n_clusters", s.n_clusters},
                {"r_tau", s.r_tau},
                {"cluster_shadow_sigma_db", s.cluster_shadow_sigma_db},
                {"xpr_mu_db", s.xpr_mu_db},
                {"xpr_sigma_db", s.xpr_sigma_db},
                {"c_asd_deg", s.c_asd_deg},
                {"c_asa_deg", s.c_asa_deg},
                {"c_esa_deg", s.c_esa_deg},
                {"c_esd_scale", s.c_esd_scale},
                {"esd_offset_deg", table_json(s.esd_offset_deg)}};
}

Json to_json(const RunConfig& c)
{
    Json j;
    j["scenario"] = name_of(c.scenario, kScenarioNames);
    j["seed"] = c.seed;
    j["n_ue"] = c.n_ue;
    j["carrier_hz"] = c.carrier_hz;
    j["phase"] = c.phase;
    j["drop_mode"] = name_of(c.drop_mode, kDropModeNames);
    j["output_dir"] = c.output_dir;
    j["workers"] = c.workers;
    j["times_s"] = c.times_s;
    j["dump_realizations"] = c.dump_realizations;
    j["layout"] = Json{{"n_rings", c.layout.n_rings}, {"isd_m", c.layout.isd_m}, {"h_bs_m", c.layout.h_bs_m},
                       {"ptx_dbm", c.layout.ptx_dbm}, {"wrap_around", c.wrap_around}};
    j["ue"] = Json{{"indoor_probability", c.ue.indoor_probability},
                   {"min_floors", c.ue.min_floors},
                   {"max_floors", c.ue.max_floors},
                   {"floor_height_m", c.ue.floor_height_m},
                   {"ground_height_m", c.ue.ground_height_m},
                   {"min_distance_m", c.ue.min_distance_m},
                   {"speed_kmh", c.ue.speed_kmh},
                   {"equal_per_cell", c.ue.equal_per_cell},
                   {"antenna",
                    Json{{"polarization", name_of(c.ue_antenna.polarization, kPolarizationNames)},
                         {"pattern", name_of(c.ue_antenna.pattern, kPatternNames)}}}};
    const BsAntennaConfig& a = c.bs_antenna;
    j["bs_antenna"] = Json{{"rows", a.rows},
                           {"columns", a.columns},
                           {"d_v", a.d_v},
                           {"d_h", a.d_h},
                           {"elements_per_port", a.elements_per_port},
                           {"polarization", name_of(a.polarization, kPolarizationNames)},
                           {"slant_deg", a.slant_deg},
                           {"downtilt_deg", a.downtilt_deg},
                           {"mechanical_tilt_deg", a.mechanical_tilt_deg},
                           {"pattern", name_of(a.pattern, kPatternNames)},
                           {"field_model", name_of(a.field_model, kFieldModelNames)},
                           {"element", pattern_json(a.element, true)},
                           {"itu_port", pattern_json(a.itu_port, false)}};
    const PathlossParams& p = c.pathloss;
    j["pathloss"] = Json{{"ue_height_correction_db_per_m", p.ue_height_correction_db_per_m},
                         {"building_height_m", p.building_height_m},
                         {"street_width_m", p.street_width_m},
                         {"environment_height_m", p.environment_height_m},
                         {"penetration_loss_db", p.penetration_loss_db},
                         {"use_3d_distance", p.use_3d_distance},
                         {"los_model", name_of(c.los.model, kLosModelNames)},
                         {"los_d1_m", c.los.d1_m},
                         {"los_d2_m", c.los.d2_m}};
    j["lsp"] = Json{{"spatial_correlation", c.lsp_spatial_correlation},
                    {"grid_spacing_m", c.lsp_grid_spacing_m},
                    {"los", lsp_state_json(c.lsp.los)},
                    {"nlos", lsp_state_json(c.lsp.nlos)},
                    {"o2i", lsp_state_json(c.lsp.o2i)}};
    j["ssp"] = Json{{"ray_offsets", c.ssp.ray_offsets},
                    {"random_coupling", c.ssp.random_coupling},
                    {"split_strongest_clusters", c.ssp.split_strongest_clusters},
                    {"subcluster_delay_ns", c.ssp.subcluster_delay_ns},
                    {"xpr_convention", name_of(c.ssp.xpr_convention, kXprNames)},
                    {"los", ssp_state_json(c.ssp.los)},
                    {"nlos", ssp_state_json(c.ssp.nlos)},
                    {"o2i", ssp_state_json(c.ssp.o2i)}};
    j["sweep"] = Json{{"downtilt_deg", c.sweep.downtilt_deg}, {"d_v", c.sweep.d_v}};
    j["legacy2d"] = Json{{"pattern", name_of(c.legacy2d.pattern, kPatternNames)},
                         {"use_3d_distance", c.legacy2d.use_3d_distance}};
    return j;
}

// ---------------------------------------------------------------- strict merge

std::string kind_name(const Json& j)
{
    if (j.is_number_unsigned())
        return "a non-negative integer";
    if (j.is_number_integer())
        return "an integer";
    if (j.is_number())
        return "a number";
    if (j.is_string())
        return "a string";
    if (j.is_boolean())
        return "a boolean";
    if (j.is_array())
        return "an array";
    return "an object";
}

bool same_kind(const Json& def, const Json& user)
{
    if (def.is_number_unsigned())
        return user.is_number_unsigned();
    if (def.is_number_integer())
        return user.is_number_integer();
    if (def.is_number())
        return user.is_number();
    return def.type() == user.type();
}

void merge(Json& base, const Json& user, const std::string& path)
{
    if (!user.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string p = join(path, it.key());
        if (!base.contains(it.key()))
            throw ConfigError(p, "unknown key");
        Json& b = base[it.key()];
        if (b.is_object()) {
            merge(b, it.value(), p);
            continue;
        }
        if (!same_kind(b, it.value()))
            throw ConfigError(p, "expected " + kind_name(b));
        b = it.value();
    }
}

// ---------------------------------------------------------------- read

class Reader {
public:
    Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

    Reader sub(std::string_view key) const { return Reader(at(key), join(path_, key)); }
    const std::string& path() const noexcept { return path_; }
    std::string field(std::string_view key) const { return join(path_, key); }

    double num(std::string_view key) const
    {
        const Json& v = at(key);
        if (!v.is_number())
            throw ConfigError(field(key), "expected a number");
        return v.get<double>();
    }
    std::uint64_t u64(std::string_view key) const
    {
        const Json& v = at(key);
        if (!v.is_number_unsigned())
            throw ConfigError(field(key), "expected a non-negative integer");
        return v.get<std::uint64_t>();
    }
    std::size_t size(std::string_view key) const { return static_cast<std::size_t>(u64(key)); }
    int integer(std::string_view key) const
    {
        const Json& v = at(key);
        if (!v.is_number_integer())
            throw ConfigError(field(key), "expected an integer");
        return v.get<int>();
    }
    bool boolean(std::string_view key) const
    {
        const Json& v = at(key);
        if (!v.is_boolean())
            throw ConfigError(field(key), "expected a boolean");
        return v.get<bool>();
    }
    std::string str(std::string_view key) const
    {
        const Json& v = at(key);
        if (!v.is_string())
            throw ConfigError(field(key), "expected a string");
        return v.get<std::string>();
    }
    std::vector<double> nums(std::string_view key) const { return numbers(at(key), field(key)); }

    template <class E>
    E enumeration(std::string_view key, const NameTable<E>& table) const
    {
        const std::string s = str(key);
        std::string allowed;
        for (const auto& [e, n] : table) {
            if (s == n)
                return e;
            allowed += allowed.empty() ? n : std::string(", ") + n;
        }
        throw ConfigError(field(key), "unknown value '" + s + "' (expected one of: " + allowed + ")");
    }

    const Json& at(std::string_view key) const
    {
        const std::string k(key);
        if (!j_.is_object() || !j_.contains(k))
            throw ConfigError(field(key), "missing required key");
        return j_.at(k);
    }

    static std::vector<double> numbers(const Json& v, const std::string& path)
    {
        if (!v.is_array())
            throw ConfigError(path, "expected an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

private:
    const Json& j_;
    std::string path_;
};

DistanceTable read_table(const Reader& r)
{
    DistanceTable t{r.nums("d_2d_m"), r.nums("h_ue_m"), r.nums("values")};
    try {
        t.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(r.path(), e.what());
    }
    return t;
}

PatternSpec read_pattern(const Reader& r, bool with_tilt)
{
    PatternSpec p{r.num("g_max_dbi"), r.num("a_m_db"), r.num("sla_v_db"), r.num("phi_3db_deg"), r.num("theta_3db_deg"),
                  with_tilt ? r.num("tilt_deg") : 0.0};
    try {
        p.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(r.path(), e.what());
    }
    return p;
}

LspStateSpec read_lsp_state(const Reader& r)
{
    LspStateSpec s;
    const Reader marginals = r.sub("marginals");
    const Reader decorrelation = r.sub("decorrelation_m");
    for (std::size_t i = 0; i < kLspCount; ++i) {
        const Reader m = marginals.sub(kLspNames[i]);
        s.marginals[i] = {m.num("mu"), m.num("sigma"), read_table(m.sub("mu_table"))};
        s.decorrelation_m[i] = decorrelation.num(kLspNames[i]);
    }
    const Json& corr = r.at("correlation");
    const std::string cpath = r.field("correlation");
    if (!corr.is_array() || corr.size() != kLspCount)
        throw ConfigError(cpath, "expected a 7x7 array");
    for (std::size_t i = 0; i < kLspCount; ++i) {
        const std::vector<double> row = Reader::numbers(corr[i], cpath + "[" + std::to_string(i) + "]");
        if (row.size() != kLspCount)
            throw ConfigError(cpath + "[" + std::to_string(i) + "]", "expected 7 entries");
        std::copy(row.begin(), row.end(), s.correlation.begin() + static_cast<std::ptrdiff_t>(i * kLspCount));
    }
    return s;
}

SspStateSpec read_ssp_state(const Reader& r)
{
    SspStateSpec s;
    s.n_clusters = r.size("n_clusters");
    s.r_tau = r.num("r_tau");
    s.cluster_shadow_sigma_db = r.num("cluster_shadow_sigma_db");
    s.xpr_mu_db = r.num("xpr_mu_db");
    s.xpr_sigma_db = r.num("xpr_sigma_db");
    s.c_asd_deg = r.num("c_asd_deg");
    s.c_asa_deg = r.num("c_asa_deg");
    s.c_esa_deg = r.num("c_esa_deg");
    s.c_esd_scale = r.num("c_esd_scale");
    s.esd_offset_deg = read_table(r.sub("esd_offset_deg"));
    return s;
}

RunConfig from_json(const Json& j)
{
    const Reader r(j, "");
    RunConfig c;
    c.scenario = r.enumeration("scenario", kScenarioNames);
    c.seed = r.u64("seed");
    c.n_ue = r.size("n_ue");
    c.carrier_hz = r.num("carrier_hz");
    c.phase = r.integer("phase");
    c.drop_mode = r.enumeration("drop_mode", kDropModeNames);
    c.output_dir = r.str("output_dir");
    c.workers = r.size("workers");
    c.times_s = r.nums("times_s");
    c.dump_realizations = r.size("dump_realizations");

    const Reader layout = r.sub("layout");
    c.layout = {layout.size("n_rings"), layout.num("isd_m"), layout.num("h_bs_m"), layout.num("ptx_dbm")};
    c.wrap_around = layout.boolean("wrap_around");

    const Reader ue = r.sub("ue");
    c.ue.indoor_probability = ue.num("indoor_probability");
    c.ue.min_floors = ue.integer("min_floors");
    c.ue.max_floors = ue.integer("max_floors");
    c.ue.floor_height_m = ue.num("floor_height_m");
    c.ue.ground_height_m = ue.num("ground_height_m");
    c.ue.min_distance_m = ue.num("min_distance_m");
    c.ue.speed_kmh = ue.num("speed_kmh");
    c.ue.equal_per_cell = ue.boolean("equal_per_cell");
    const Reader ua = ue.sub("antenna");
    c.ue_antenna.polarization = ua.enumeration("polarization", kPolarizationNames);
    c.ue_antenna.pattern = ua.enumeration("pattern", kPatternNames);

    const Reader bs = r.sub("bs_antenna");
    BsAntennaConfig& a = c.bs_antenna;
    a.rows = bs.size("rows");
    a.columns = bs.size("columns");
    a.d_v = bs.num("d_v");
    a.d_h = bs.num("d_h");
    a.elements_per_port = bs.size("elements_per_port");
    a.polarization = bs.enumeration("polarization", kPolarizationNames);
    a.slant_deg = bs.num("slant_deg");
    a.downtilt_deg = bs.num("downtilt_deg");
    a.mechanical_tilt_deg = bs.num("mechanical_tilt_deg");
    a.pattern = bs.enumeration("pattern", kPatternNames);
    a.field_model = bs.enumeration("field_model", kFieldModelNames);
    a.element = read_pattern(bs.sub("element"), true);
    a.itu_port = read_pattern(bs.sub("itu_port"), false);

    const Reader pl = r.sub("pathloss");
    c.pathloss.ue_height_correction_db_per_m = pl.num("ue_height_correction_db_per_m");
    c.pathloss.building_height_m = pl.num("building_height_m");
    c.pathloss.street_width_m = pl.num("street_width_m");
    c.pathloss.environment_height_m = pl.num("environment_height_m");
    c.pathloss.penetration_loss_db = pl.num("penetration_loss_db");
    c.pathloss.use_3d_distance = pl.boolean("use_3d_distance");
    c.los.model = pl.enumeration("los_model", kLosModelNames);
    c.los.d1_m = pl.num("los_d1_m");
    c.los.d2_m = pl.num("los_d2_m");

    const Reader lsp = r.sub("lsp");
    c.lsp_spatial_correlation = lsp.boolean("spatial_correlation");
    c.lsp_grid_spacing_m = lsp.num("grid_spacing_m");
    c.lsp.los = read_lsp_state(lsp.sub("los"));
    c.lsp.nlos = read_lsp_state(lsp.sub("nlos"));
    c.lsp.o2i = read_lsp_state(lsp.sub("o2i"));

    const Reader ssp = r.sub("ssp");
    c.ssp.ray_offsets = ssp.nums("ray_offsets");
    c.ssp.random_coupling = ssp.boolean("random_coupling");
    c.ssp.split_strongest_clusters = ssp.boolean("split_strongest_clusters");
    c.ssp.subcluster_delay_ns = ssp.num("subcluster_delay_ns");
    c.ssp.xpr_convention = ssp.enumeration("xpr_convention", kXprNames);
    c.ssp.los = read_ssp_state(ssp.sub("los"));
    c.ssp.nlos = read_ssp_state(ssp.sub("nlos"));
    c.ssp.o2i = read_ssp_state(ssp.sub("o2i"));

    const Reader sweep = r.sub("sweep");
    c.sweep.downtilt_deg = sweep.nums("downtilt_deg");
    c.sweep.d_v = sweep.nums("d_v");

    const Reader legacy = r.sub("legacy2d");
    c.legacy2d.pattern = legacy.enumeration("pattern", kPatternNames);
    c.legacy2d.use_3d_distance = legacy.boolean("use_3d_distance");
    return c;
}

void require(bool ok, const std::string& field, const std::string& message)
{
    if (!ok)
        throw ConfigError(field, message);
}

bool finite_positive(double v)
{
    return std::isfinite(v) && v > 0.0;
}

} // namespace

RunConfig default_config(Scenario scenario)
{
    RunConfig c;
    c.scenario = scenario;
    c.pathloss = default_pathloss_params(scenario);
    c.lsp = default_lsp_spec(scenario);
    c.ssp = default_ssp_spec(scenario);
    if (scenario == Scenario::UMi) {
        c.layout.isd_m = 200.0;
        c.layout.h_bs_m = 10.0;
        c.layout.ptx_dbm = 41.0;
        c.ue.min_distance_m = 10.0;
        c.los.d2_m = 36.0;
    }
    return c;
}

void validate_config(const RunConfig& c)
{
    require(c.n_ue >= 1, "n_ue", "must be at least 1");
    require(finite_positive(c.carrier_hz), "carrier_hz", "must be positive");
    require(c.phase == 1 || c.phase == 2, "phase", "must be 1 or 2");
    require(c.workers >= 1 && c.workers <= 1024, "workers", "must be between 1 and 1024");
    require(!c.times_s.empty(), "times_s", "must not be empty");
    for (double t : c.times_s)
        require(std::isfinite(t), "times_s", "must be finite");

    require(c.layout.n_rings <= 10, "layout.n_rings", "must be at most 10");
    require(finite_positive(c.layout.isd_m), "layout.isd_m", "must be positive");
    require(finite_positive(c.layout.h_bs_m), "layout.h_bs_m", "must be positive");
    require(std::isfinite(c.layout.ptx_dbm), "layout.ptx_dbm", "must be finite");
    c.ue.validate();
    require(c.ue.min_distance_m < c.layout.isd_m / std::sqrt(3.0), "ue.min_distance_m", "must be below the cell radius");

    const BsAntennaConfig& a = c.bs_antenna;
    require(a.rows >= 1, "bs_antenna.rows", "must be at least 1");
    require(a.columns >= 1, "bs_antenna.columns", "must be at least 1");
    require(finite_positive(a.d_v), "bs_antenna.d_v", "must be positive");
    require(finite_positive(a.d_h), "bs_antenna.d_h", "must be positive");
    require(a.elements_per_port >= 1 && a.rows % a.elements_per_port == 0, "bs_antenna.elements_per_port",
            "must be at least 1 and divide rows");
    require(std::abs(a.downtilt_deg) <= 90.0, "bs_antenna.downtilt_deg", "must lie in [-90, 90]");
    require(std::abs(a.mechanical_tilt_deg) <= 90.0, "bs_antenna.mechanical_tilt_deg", "must lie in [-90, 90]");
    require(std::isfinite(a.slant_deg), "bs_antenna.slant_deg", "must be finite");

    for (double t : c.sweep.downtilt_deg)
        require(std::abs(t) <= 90.0, "sweep.downtilt_deg", "entries must lie in [-90, 90]");
    for (double d : c.sweep.d_v)
        require(finite_positive(d), "sweep.d_v", "entries must be positive");

    require(std::isfinite(c.pathloss.penetration_loss_db), "pathloss.penetration_loss_db", "must be finite");
    require(finite_positive(c.pathloss.building_height_m), "pathloss.building_height_m", "must be positive");
    require(finite_positive(c.pathloss.street_width_m), "pathloss.street_width_m", "must be positive");
    require(c.pathloss.environment_height_m >= 0.0 && c.pathloss.environment_height_m < c.ue.ground_height_m,
            "pathloss.environment_height_m", "must be non-negative and below the UE ground height");
    require(finite_positive(c.los.d1_m), "pathloss.los_d1_m", "must be positive");
    require(finite_positive(c.los.d2_m), "pathloss.los_d2_m", "must be positive");

    require(finite_positive(c.lsp_grid_spacing_m), "lsp.grid_spacing_m", "must be positive");
    const LspModel model(c.lsp);
    c.ssp.validate();
}

std::string emit_config(const RunConfig& cfg)
{
    return to_json(cfg).dump(2) + "\n";
}

std::string emit_experiment_config(const RunConfig& cfg)
{
    Json j = to_json(cfg);
    j.erase("output_dir");
    j.erase("workers");
    return j.dump(2) + "\n";
}

RunConfig parse_config_text(std::string_view text, std::optional<std::uint64_t> seed_override)
{
    Json user;
    try {
        user = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    if (!user.is_object())
        throw ConfigError("<root>", "expected an object");

    Scenario scenario = Scenario::UMa;
    if (user.contains("scenario")) {
        Json probe{{"scenario", user["scenario"]}};
        scenario = Reader(probe, "").enumeration("scenario", kScenarioNames);
    }
    if (seed_override)
        user["seed"] = *seed_override;
    else if (!user.contains("seed"))
        throw ConfigError("seed", "missing required key");

    Json merged = to_json(default_config(scenario));
    merge(merged, user, "");
    RunConfig cfg = from_json(merged);
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), seed_override);
}

std::uint64_t config_hash(const RunConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : emit_experiment_config(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace chan3d

/**
 * @file config.hpp
 * @brief Scenario configuration: JSON schema, defaults, validation and model builders
 *
 * Keys (all SI units; [] = optional, default in parentheses):
 *
 *   grid                 {N_r, N_theta, N_z, radius, depth}
 *   soil_zones           [{alpha, n_vg, theta_r, theta_s, K_s}, ...]
 *   [sector_zones]       zone index per sector (quadrant split over the zones)
 *   [estimator_soil_zones]  nominal soil the estimator believes in (= soil_zones)
 *   [soil_shift]         {step, soil_zones, [sector_zones], [visible_to_estimator] (true)}
 *   [feddes]             {h1, h2, h3, h4} (-0.1, -0.25, -4, -150)
 *   [root_depth]         (0.3)    [specific_storage] (1e-5)
 *   [bottom_boundary]    "free_drainage" | "water_table" | "no_flux"
 *   [n_substeps]         explicit sub-steps per interval (derived from cfl_reference_head)
 *   [cfl_reference_head] wettest head used to derive n_substeps (-0.5)
 *   [initial_truth]      per-quadrant heads (-13.5, -14.0, -12.7, -11.5)
 *   [initial_guess]      per-quadrant heads (-10.0, -12.0, -9.0, -14.0)
 *   sensors | sensor_lattice {n_r, n_theta, layers}
 *   [delta] (1800)  [steps] (1440)  [N_fd] (250)  [th_e] (40)  [th_C] (1.0)
 *   [slope_limit] (0.05)  [scheme] ("performance"; string or list)
 *   [time_trigger_period] (N_fd)  [stride] (1)  [static_horizon] (N_fd)
 *   [process_noise_var] (1e-7)  [measurement_noise_var] (0.8)
 *   [Q] (1.0)  [R] (0.08)  [P0_diag] (1.0)  [P0_offdiag] (5e-5)
 *   [seed] (1)
 *   [forcing]            {irrigation_rate, pivot_sector_steps, pivot_start_sector,
 *                         ring_profile, rain, et, kc}; series are either a number
 *                         or [[start_step, value], ...]
 *   [forecast_error]     {irrigation_rate, rain, et} additive series
 *   [snapshot_steps]     steps whose full states are exported (first and last)
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/estimation/adaptive.hpp"
#include "soilmor/estimation/covariance.hpp"
#include "soilmor/hydrology/forcing.hpp"
#include "soilmor/hydrology/grid.hpp"
#include "soilmor/hydrology/richards.hpp"
#include "soilmor/hydrology/sensors.hpp"
#include "soilmor/types.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace soilmor::scenario {

using nlohmann::json;

enum class Scheme {
    performance,
    static_model,
    time_triggered,
};

inline std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::performance:
        return "performance";
    case Scheme::static_model:
        return "static";
    case Scheme::time_triggered:
        return "time-triggered";
    }
    return "unknown";
}

inline Scheme parse_scheme(const std::string& name) {
    if (name == "performance") return Scheme::performance;
    if (name == "static") return Scheme::static_model;
    if (name == "time-triggered") return Scheme::time_triggered;
    throw ValidationError("scheme", "unknown scheme '" + name + "'");
}

struct SoilShift {
    std::size_t step = 0;
    hydrology::SoilField soil;
    bool visible_to_estimator = true;
};

struct ScenarioConfig {
    hydrology::CylindricalGrid grid;
    hydrology::SoilField soil;
    std::optional<hydrology::SoilField> estimator_soil;
    std::optional<SoilShift> soil_shift;
    hydrology::RichardsOptions richards;  ///< substeps already resolved
    double cfl_reference_head = -0.5;

    std::array<double, 4> initial_truth{-13.5, -14.0, -12.7, -11.5};
    std::array<double, 4> initial_guess{-10.0, -12.0, -9.0, -14.0};
    std::vector<Index> sensors;

    double delta = 1800.0;
    std::size_t steps = 1440;
    Index N_fd = 250;
    double th_e = 40.0;
    double th_C = 1.0;
    double slope_limit = 0.05;
    std::vector<Scheme> schemes{Scheme::performance};
    Index time_trigger_period = 0;
    Index stride = 1;
    Index static_horizon = 0;

    double process_noise_var = 1e-7;
    double measurement_noise_var = 0.8;
    double Q = 1.0;
    double R = 0.08;
    double P0_diag = 1.0;
    double P0_offdiag = 5e-5;
    std::uint64_t seed = 1;

    hydrology::PivotIrrigation pivot;
    hydrology::PiecewiseConstant rain;
    hydrology::PiecewiseConstant et;
    hydrology::PiecewiseConstant kc;
    std::optional<hydrology::ForecastError> forecast_error;

    std::vector<std::size_t> snapshot_steps;

    Index n_x() const { return grid.size(); }
    Index n_y() const { return static_cast<Index>(sensors.size()); }
};

namespace detail {

inline void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ValidationError(where.empty() ? "config" : where, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items())
        if (!ok.count(key)) throw ValidationError(where.empty() ? key : where + "." + key, "unknown key");
}

template <class T>
T read(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) throw ValidationError(path, "required key missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(path, std::string("wrong type: ") + e.what());
    }
}

template <class T>
T read_or(const json& j, const char* key, const std::string& path, T fallback) {
    return j.contains(key) ? read<T>(j, key, path) : fallback;
}

inline hydrology::PiecewiseConstant read_series(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) return {};
    const json& v = j.at(key);
    if (v.is_number()) return hydrology::PiecewiseConstant::constant(v.get<double>());
    if (!v.is_array()) throw ValidationError(path, "expected a number or [[step, value], ...]");
    std::vector<std::pair<std::size_t, double>> points;
    for (const auto& item : v) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number_unsigned() || !item[1].is_number())
            throw ValidationError(path, "each breakpoint must be [step, value]");
        points.emplace_back(item[0].get<std::size_t>(), item[1].get<double>());
    }
    return hydrology::PiecewiseConstant(std::move(points));
}

inline hydrology::VanGenuchtenParams read_soil(const json& j, const std::string& path) {
    reject_unknown(j, path, {"alpha", "n_vg", "theta_r", "theta_s", "K_s"});
    hydrology::VanGenuchtenParams p;
    p.alpha = read<double>(j, "alpha", path + ".alpha");
    p.n_vg = read<double>(j, "n_vg", path + ".n_vg");
    p.theta_r = read<double>(j, "theta_r", path + ".theta_r");
    p.theta_s = read<double>(j, "theta_s", path + ".theta_s");
    p.K_s = read<double>(j, "K_s", path + ".K_s");
    p.validate(path);
    return p;
}

inline std::vector<hydrology::VanGenuchtenParams> read_zones(const json& j, const char* key, const std::string& path) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty())
        throw ValidationError(path, "expected a non-empty list of soil parameter sets");
    std::vector<hydrology::VanGenuchtenParams> zones;
    for (std::size_t i = 0; i < j.at(key).size(); ++i)
        zones.push_back(read_soil(j.at(key)[i], path + "[" + std::to_string(i) + "]"));
    return zones;
}

inline std::array<double, 4> read_quadrants(const json& j, const char* key, std::array<double, 4> fallback) {
    if (!j.contains(key)) return fallback;
    const auto v = read<std::vector<double>>(j, key, key);
    if (v.size() != 4) throw ValidationError(key, "expected four per-quadrant values");
    for (double x : v)
        if (!std::isfinite(x)) throw ValidationError(key, "values must be finite");
    return {v[0], v[1], v[2], v[3]};
}

inline void require_positive(double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(key, "must be > 0");
}

inline void require_nonnegative(double v, const char* key) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError(key, "must be >= 0");
}

}  // namespace detail

/// Parses and validates a configuration document.
inline ScenarioConfig parse_config(const json& j) {
    using namespace detail;
    reject_unknown(j, "",
                   {"grid", "soil_zones", "sector_zones", "estimator_soil_zones", "soil_shift", "feddes", "root_depth",
                    "specific_storage", "bottom_boundary", "n_substeps", "cfl_reference_head", "initial_truth",
                    "initial_guess", "sensors", "sensor_lattice", "delta", "steps", "N_fd", "th_e", "th_C",
                    "slope_limit", "scheme", "time_trigger_period", "stride", "static_horizon", "process_noise_var",
                    "measurement_noise_var", "Q", "R", "P0_diag", "P0_offdiag", "seed", "forcing", "forecast_error",
                    "snapshot_steps"});
    ScenarioConfig cfg;

    if (!j.contains("grid")) throw ValidationError("grid", "required key missing");
    const json& g = j.at("grid");
    reject_unknown(g, "grid", {"N_r", "N_theta", "N_z", "radius", "depth"});
    cfg.grid = hydrology::CylindricalGrid(read<Index>(g, "N_r", "N_r"), read<Index>(g, "N_theta", "N_theta"),
                                          read<Index>(g, "N_z", "N_z"), read<double>(g, "radius", "radius"),
                                          read<double>(g, "depth", "depth"));

    cfg.soil.zones = read_zones(j, "soil_zones", "soil_zones");
    cfg.soil.sector_zone = read_or<std::vector<Index>>(j, "sector_zones", "sector_zones", {});
    cfg.soil.validate(cfg.grid.n_theta());
    if (j.contains("estimator_soil_zones")) {
        hydrology::SoilField est{read_zones(j, "estimator_soil_zones", "estimator_soil_zones"), cfg.soil.sector_zone};
        est.validate(cfg.grid.n_theta(), "estimator_soil_zones");
        cfg.estimator_soil = est;
    }
    if (j.contains("soil_shift")) {
        const json& s = j.at("soil_shift");
        reject_unknown(s, "soil_shift", {"step", "soil_zones", "sector_zones", "visible_to_estimator"});
        SoilShift shift;
        shift.step = read<std::size_t>(s, "step", "soil_shift.step");
        shift.soil.zones = read_zones(s, "soil_zones", "soil_shift.soil_zones");
        shift.soil.sector_zone =
            read_or<std::vector<Index>>(s, "sector_zones", "soil_shift.sector_zones", cfg.soil.sector_zone);
        shift.soil.validate(cfg.grid.n_theta(), "soil_shift.soil_zones");
        shift.visible_to_estimator = read_or<bool>(s, "visible_to_estimator", "soil_shift.visible_to_estimator", true);
        cfg.soil_shift = shift;
    }

    if (j.contains("feddes")) {
        const json& f = j.at("feddes");
        reject_unknown(f, "feddes", {"h1", "h2", "h3", "h4"});
        cfg.richards.feddes.h1 = read_or<double>(f, "h1", "feddes.h1", cfg.richards.feddes.h1);
        cfg.richards.feddes.h2 = read_or<double>(f, "h2", "feddes.h2", cfg.richards.feddes.h2);
        cfg.richards.feddes.h3 = read_or<double>(f, "h3", "feddes.h3", cfg.richards.feddes.h3);
        cfg.richards.feddes.h4 = read_or<double>(f, "h4", "feddes.h4", cfg.richards.feddes.h4);
    }
    cfg.richards.feddes.validate();
    cfg.richards.root_depth = read_or<double>(j, "root_depth", "root_depth", 0.3);
    if (!(cfg.richards.root_depth >= 0.0 && cfg.richards.root_depth <= cfg.grid.depth()))
        throw ValidationError("root_depth", "must lie within [0, depth]");
    cfg.richards.specific_storage = read_or<double>(j, "specific_storage", "specific_storage", 1e-5);
    require_nonnegative(cfg.richards.specific_storage, "specific_storage");
    const auto bottom = read_or<std::string>(j, "bottom_boundary", "bottom_boundary", "free_drainage");
    if (bottom == "free_drainage")
        cfg.richards.bottom = hydrology::BottomBoundary::free_drainage;
    else if (bottom == "water_table")
        cfg.richards.bottom = hydrology::BottomBoundary::water_table;
    else if (bottom == "no_flux")
        cfg.richards.bottom = hydrology::BottomBoundary::no_flux;
    else
        throw ValidationError("bottom_boundary", "unknown boundary '" + bottom + "'");

    cfg.initial_truth = read_quadrants(j, "initial_truth", cfg.initial_truth);
    cfg.initial_guess = read_quadrants(j, "initial_guess", cfg.initial_guess);

    if (j.contains("sensors") && j.contains("sensor_lattice"))
        throw ValidationError("sensors", "give either sensors or sensor_lattice, not both");
    if (j.contains("sensors")) {
        cfg.sensors = read<std::vector<Index>>(j, "sensors", "sensors");
    } else if (j.contains("sensor_lattice")) {
        const json& l = j.at("sensor_lattice");
        reject_unknown(l, "sensor_lattice", {"n_r", "n_theta", "layers"});
        cfg.sensors = hydrology::SensorLayout::lattice(cfg.grid, read<Index>(l, "n_r", "sensor_lattice.n_r"),
                                                       read<Index>(l, "n_theta", "sensor_lattice.n_theta"),
                                                       read<std::vector<Index>>(l, "layers", "sensor_lattice.layers"))
                          .nodes();
    } else {
        throw ValidationError("sensors", "required key missing");
    }
    if (cfg.sensors.empty()) throw ValidationError("sensors", "must not be empty");
    for (Index s : cfg.sensors)
        if (s < 0 || s >= cfg.grid.size()) throw ValidationError("sensors", "node " + std::to_string(s) + " outside grid");

    cfg.delta = read_or<double>(j, "delta", "delta", cfg.delta);
    require_positive(cfg.delta, "delta");
    cfg.steps = read_or<std::size_t>(j, "steps", "steps", cfg.steps);
    if (cfg.steps == 0) throw ValidationError("steps", "must be > 0");
    cfg.N_fd = read_or<Index>(j, "N_fd", "N_fd", cfg.N_fd);
    if (cfg.N_fd < 1) throw ValidationError("N_fd", "must be >= 1");
    cfg.th_e = read_or<double>(j, "th_e", "th_e", cfg.th_e);
    require_positive(cfg.th_e, "th_e");
    cfg.th_C = read_or<double>(j, "th_C", "th_C", cfg.th_C);
    if (!(cfg.th_C > 0.0)) throw ValidationError("th_C", "must be > 0");
    cfg.slope_limit = read_or<double>(j, "slope_limit", "slope_limit", cfg.slope_limit);
    require_positive(cfg.slope_limit, "slope_limit");

    if (j.contains("scheme")) {
        cfg.schemes.clear();
        const json& s = j.at("scheme");
        if (s.is_string()) {
            cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
        } else if (s.is_array() && !s.empty()) {
            for (const auto& item : s) {
                if (!item.is_string()) throw ValidationError("scheme", "expected scheme names");
                cfg.schemes.push_back(parse_scheme(item.get<std::string>()));
            }
        } else {
            throw ValidationError("scheme", "expected a scheme name or a list of names");
        }
    }
    cfg.time_trigger_period = read_or<Index>(j, "time_trigger_period", "time_trigger_period", 0);
    if (cfg.time_trigger_period < 0) throw ValidationError("time_trigger_period", "must be >= 0");
    cfg.stride = read_or<Index>(j, "stride", "stride", 1);
    if (cfg.stride < 1) throw ValidationError("stride", "must be >= 1");
    cfg.static_horizon = read_or<Index>(j, "static_horizon", "static_horizon", 0);
    if (cfg.static_horizon < 0) throw ValidationError("static_horizon", "must be >= 0");

    cfg.process_noise_var = read_or<double>(j, "process_noise_var", "process_noise_var", cfg.process_noise_var);
    require_nonnegative(cfg.process_noise_var, "process_noise_var");
    cfg.measurement_noise_var =
        read_or<double>(j, "measurement_noise_var", "measurement_noise_var", cfg.measurement_noise_var);
    require_nonnegative(cfg.measurement_noise_var, "measurement_noise_var");
    cfg.Q = read_or<double>(j, "Q", "Q", cfg.Q);
    require_nonnegative(cfg.Q, "Q");
    cfg.R = read_or<double>(j, "R", "R", cfg.R);
    require_positive(cfg.R, "R");
    cfg.P0_diag = read_or<double>(j, "P0_diag", "P0_diag", cfg.P0_diag);
    cfg.P0_offdiag = read_or<double>(j, "P0_offdiag", "P0_offdiag", cfg.P0_offdiag);
    if (!estimation::UniformCovariance{cfg.P0_diag, cfg.P0_offdiag}.positive_semidefinite(cfg.grid.size()))
        throw ValidationError("P0_diag", "P0 must be positive semidefinite");
    cfg.seed = read_or<std::uint64_t>(j, "seed", "seed", cfg.seed);

    const json forcing = j.contains("forcing") ? j.at("forcing") : json::object();
    reject_unknown(forcing, "forcing",
                   {"irrigation_rate", "pivot_sector_steps", "pivot_start_sector", "ring_profile", "rain", "et", "kc"});
    cfg.pivot.rate = read_series(forcing, "irrigation_rate", "forcing.irrigation_rate");
    cfg.pivot.sector_steps = read_or<Index>(forcing, "pivot_sector_steps", "forcing.pivot_sector_steps", 1);
    cfg.pivot.start_sector = read_or<Index>(forcing, "pivot_start_sector", "forcing.pivot_start_sector", 0);
    if (cfg.pivot.start_sector < 0 || cfg.pivot.start_sector >= cfg.grid.n_theta())
        throw ValidationError("forcing.pivot_start_sector", "must be a valid sector");
    cfg.pivot.ring_profile = read_or<std::vector<double>>(forcing, "ring_profile", "forcing.ring_profile", {});
    cfg.rain = read_series(forcing, "rain", "forcing.rain");
    cfg.et = read_series(forcing, "et", "forcing.et");
    cfg.kc = forcing.contains("kc") ? read_series(forcing, "kc", "forcing.kc") : hydrology::PiecewiseConstant::constant(1.0);
    if (j.contains("forecast_error")) {
        const json& fe = j.at("forecast_error");
        reject_unknown(fe, "forecast_error", {"irrigation_rate", "rain", "et"});
        hydrology::ForecastError err;
        err.irrigation_rate = read_series(fe, "irrigation_rate", "forecast_error.irrigation_rate");
        err.rain = read_series(fe, "rain", "forecast_error.rain");
        err.et = read_series(fe, "et", "forecast_error.et");
        cfg.forecast_error = err;
    }
    // Builds once to run the schedule's own checks.
    hydrology::InputSchedule(cfg.grid.n_r(), cfg.grid.n_theta(), cfg.pivot, cfg.rain, cfg.et, cfg.kc);

    cfg.snapshot_steps = read_or<std::vector<std::size_t>>(j, "snapshot_steps", "snapshot_steps",
                                                           {0, cfg.steps - 1});
    for (std::size_t s : cfg.snapshot_steps)
        if (s >= cfg.steps) throw ValidationError("snapshot_steps", "step " + std::to_string(s) + " beyond run");

    cfg.cfl_reference_head = read_or<double>(j, "cfl_reference_head", "cfl_reference_head", cfg.cfl_reference_head);
    if (j.contains("n_substeps")) {
        cfg.richards.substeps = read<Index>(j, "n_substeps", "n_substeps");
        if (cfg.richards.substeps < 1) throw ValidationError("n_substeps", "must be >= 1");
    } else {
        auto all = cfg.soil;
        if (cfg.estimator_soil)
            all.zones.insert(all.zones.end(), cfg.estimator_soil->zones.begin(), cfg.estimator_soil->zones.end());
        if (cfg.soil_shift)
            all.zones.insert(all.zones.end(), cfg.soil_shift->soil.zones.begin(), cfg.soil_shift->soil.zones.end());
        all.sector_zone.clear();
        auto opts = cfg.richards;
        opts.substeps = 1;
        cfg.richards.substeps =
            hydrology::RichardsModel(cfg.grid, all, opts).stable_substeps(cfg.delta, cfg.cfl_reference_head);
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline FullState quadrant_state(const hydrology::CylindricalGrid& grid, const std::array<double, 4>& values) {
    FullState x{Vector(grid.size())};
    for (Index i = 0; i < grid.size(); ++i)
        x.h[i] = values[static_cast<std::size_t>(grid.quadrant(grid.coord(i).i_theta))];
    return x;
}

inline hydrology::InputSchedule true_schedule(const ScenarioConfig& cfg) {
    return hydrology::InputSchedule(cfg.grid.n_r(), cfg.grid.n_theta(), cfg.pivot, cfg.rain, cfg.et, cfg.kc);
}

inline hydrology::InputSchedule estimator_schedule(const ScenarioConfig& cfg) {
    auto s = true_schedule(cfg);
    return cfg.forecast_error ? s.with_forecast_error(*cfg.forecast_error) : s;
}

inline hydrology::RichardsTransition truth_transition(const ScenarioConfig& cfg) {
    hydrology::RichardsTransition t(hydrology::RichardsModel(cfg.grid, cfg.soil, cfg.richards), true_schedule(cfg),
                                    cfg.delta);
    if (cfg.soil_shift) t.add_shift(cfg.soil_shift->step, hydrology::RichardsModel(cfg.grid, cfg.soil_shift->soil, cfg.richards));
    return t;
}

inline hydrology::RichardsTransition estimator_transition(const ScenarioConfig& cfg) {
    hydrology::RichardsTransition t(
        hydrology::RichardsModel(cfg.grid, cfg.estimator_soil.value_or(cfg.soil), cfg.richards),
        estimator_schedule(cfg), cfg.delta);
    if (cfg.soil_shift && cfg.soil_shift->visible_to_estimator)
        t.add_shift(cfg.soil_shift->step, hydrology::RichardsModel(cfg.grid, cfg.soil_shift->soil, cfg.richards));
    return t;
}

inline hydrology::SensorLayout sensor_layout(const ScenarioConfig& cfg) {
    return hydrology::SensorLayout(cfg.sensors, cfg.grid.size());
}

inline estimation::NoiseConfig noise_config(const ScenarioConfig& cfg) {
    estimation::NoiseConfig n;
    n.Q = {cfg.Q, 0.0};
    n.P0 = {cfg.P0_diag, cfg.P0_offdiag};
    n.R = cfg.R * Matrix::Identity(cfg.n_y(), cfg.n_y());
    return n;
}

inline estimation::AdaptiveOptions adaptive_options(const ScenarioConfig& cfg, Scheme scheme) {
    estimation::AdaptiveOptions o;
    switch (scheme) {
    case Scheme::performance:
        o.mode = estimation::TriggerMode::performance;
        break;
    case Scheme::static_model:
        o.mode = estimation::TriggerMode::static_model;
        o.identification_horizon = cfg.static_horizon;
        break;
    case Scheme::time_triggered:
        o.mode = estimation::TriggerMode::time_triggered;
        break;
    }
    o.th_e = cfg.th_e;
    o.th_C = cfg.th_C;
    o.slope_limit = cfg.slope_limit;
    o.n_fd = cfg.N_fd;
    o.period = cfg.time_trigger_period;
    o.stride = cfg.stride;
    return o;
}

}  // namespace soilmor::scenario

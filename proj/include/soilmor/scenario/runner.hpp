/**
 * @file runner.hpp
 * @brief Truth simulation, measurement synthesis and per-scheme estimation runs
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/estimation/adaptive.hpp"
#include "soilmor/hydrology/sensors.hpp"
#include "soilmor/scenario/config.hpp"
#include "soilmor/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace soilmor::scenario {

struct TruthRun {
    std::vector<FullState> states;      ///< x(t_k), k = 0 .. steps-1
    std::vector<Vector> measurements;   ///< y(t_k)
    hydrology::WaterBudget budget;      ///< integrated over the run [m^3]
    double max_head = -std::numeric_limits<double>::infinity();
};

/**
 * @brief Simulates the true field with additive process noise and samples the sensors.
 *
 * Draw order is fixed (process noise for interval k, then measurement noise
 * for step k+1) so that a seed reproduces the run exactly.
 */
inline TruthRun run_truth(const ScenarioConfig& cfg) {
    const auto model = truth_transition(cfg);
    const auto sensors = sensor_layout(cfg);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> process(0.0, std::sqrt(cfg.process_noise_var));
    std::normal_distribution<double> measurement(0.0, std::sqrt(cfg.measurement_noise_var));
    auto draw = [&rng](std::normal_distribution<double>& dist, Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v[i] = dist(rng);
        return v;
    };

    TruthRun run;
    run.states.reserve(cfg.steps);
    run.measurements.reserve(cfg.steps);
    FullState x = quadrant_state(cfg.grid, cfg.initial_truth);
    for (std::size_t k = 0; k < cfg.steps; ++k) {
        if (k > 0) {
            try {
                x = model.advance(x, k - 1, run.budget);
            } catch (Error& e) {
                e.attach_step(k);
                throw;
            }
            if (cfg.process_noise_var > 0.0) x.h += draw(process, x.size());
        }
        run.max_head = std::max(run.max_head, x.h.maxCoeff());
        run.measurements.push_back(hydrology::observe(x, sensors, draw(measurement, sensors.size())));
        run.states.push_back(x);
    }
    return run;
}

/// 100 * sum|x_hat - x| / sum|x| over all nodes.
inline double percent_mae(const FullState& estimate, const FullState& truth) {
    if (estimate.size() != truth.size()) throw DimensionMismatch("estimate and truth differ in size");
    const double denom = truth.h.cwiseAbs().sum();
    if (!(denom > 0.0)) throw DegenerateReference("true state is identically zero");
    return 100.0 * (estimate.h - truth.h).cwiseAbs().sum() / denom;
}

struct StateSnapshot {
    std::size_t step = 0;
    FullState truth;
    FullState estimate;
};

struct RunArtifacts {
    Scheme scheme = Scheme::performance;
    double delta = 0.0;
    std::vector<double> percent_mae;
    estimation::EstimationTrace trace;
    std::vector<StateSnapshot> snapshots;
};

inline RunArtifacts run_scheme(const ScenarioConfig& cfg, Scheme scheme, const TruthRun& truth) {
    if (truth.states.size() != truth.measurements.size())
        throw DimensionMismatch("truth states and measurements differ in length");
    RunArtifacts out;
    out.scheme = scheme;
    out.delta = cfg.delta;
    out.percent_mae.reserve(truth.states.size());
    const auto model = estimator_transition(cfg);
    auto observer = [&](std::size_t k, const FullState& est) {
        out.percent_mae.push_back(percent_mae(est, truth.states[k]));
        if (std::find(cfg.snapshot_steps.begin(), cfg.snapshot_steps.end(), k) != cfg.snapshot_steps.end())
            out.snapshots.push_back({k, truth.states[k], est});
    };
    out.trace = estimation::run_adaptive_estimation(model, adaptive_options(cfg, scheme), noise_config(cfg),
                                                    sensor_layout(cfg), quadrant_state(cfg.grid, cfg.initial_guess),
                                                    truth.measurements, observer);
    return out;
}

}  // namespace soilmor::scenario

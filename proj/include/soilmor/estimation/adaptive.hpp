/**
 * @file adaptive.hpp
 * @brief Performance-triggered reduced EKF loop
 *
 * For k = 0 .. n-1:
 *   1. if k == 0, or the trigger fires on the latest e_L and its slope, simulate
 *      N_fd steps from the latest estimate, cluster the trajectories, build
 *      U^(m+1) and move the filter onto it;
 *   2. predict over interval k-1 (k > 0) and update with y(k);
 *   3. lift the estimate to the full grid;
 *   4. evaluate e_L from that estimate over the next N_fd intervals.
 *
 * Every forecast uses the model as known at its launch step (`known_at`), so
 * a scheduled parameter change only enters once it has happened.
 *
 * Static and time-triggered modes replace the trigger test of step 1 with
 * "never" and "every `period` steps".
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/estimation/covariance.hpp"
#include "soilmor/estimation/ekf.hpp"
#include "soilmor/estimation/error_metric.hpp"
#include "soilmor/estimation/trigger.hpp"
#include "soilmor/hydrology/sensors.hpp"
#include "soilmor/reduction/clustering.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/reduction/snapshots.hpp"
#include "soilmor/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace soilmor::estimation {

enum class TriggerMode {
    performance,
    static_model,
    time_triggered,
};

struct AdaptiveOptions {
    TriggerMode mode = TriggerMode::performance;
    double th_e = 40.0;
    double th_C = 1.0;
    double slope_limit = 0.05;
    Index n_fd = 250;
    Index period = 0;                  ///< time-triggered period; 0 means N_fd
    Index stride = 1;                  ///< evaluate e_L every `stride` steps
    Index identification_horizon = 0;  ///< snapshot horizon; 0 means N_fd

    Index effective_period() const { return period > 0 ? period : n_fd; }
    Index effective_horizon() const { return identification_horizon > 0 ? identification_horizon : n_fd; }

    void validate() const {
        if (!(th_e > 0.0)) throw ValidationError("th_e", "must be > 0");
        if (!(th_C > 0.0)) throw ValidationError("th_C", "must be > 0");
        if (!(slope_limit > 0.0)) throw ValidationError("slope_limit", "must be > 0");
        if (n_fd < 1) throw ValidationError("N_fd", "must be >= 1");
        if (period < 0) throw ValidationError("time_trigger_period", "must be >= 0");
        if (stride < 1) throw ValidationError("stride", "must be >= 1");
        if (identification_horizon < 0) throw ValidationError("static_horizon", "must be >= 0");
    }
};

/// Per-step estimation record.
struct EstimationRecord {
    std::size_t step = 0;
    double e_L = std::numeric_limits<double>::quiet_NaN();     ///< latest evaluated e_L
    double edot_L = 0.0;
    bool metric_evaluated = false;
    Index r_m = 0;
    Index model_index = 0;
    bool triggered = false;
    double iter_seconds = 0.0;
};

struct ModelChange {
    std::size_t step = 0;            ///< iteration that re-identified
    std::size_t snapshot_origin = 0; ///< interval the snapshots start from
    Index model_index = 0;
    Index r_m = 0;
    double trigger_e_L = std::numeric_limits<double>::quiet_NaN();  ///< e_L that fired (NaN at k = 0)
    double trigger_edot_L = 0.0;
    double refit_e_L = 0.0;          ///< e_L of the new model over its own snapshot window
};

struct EstimationTrace {
    std::vector<EstimationRecord> records;
    std::vector<ModelChange> changes;

    std::size_t identifications() const { return changes.size(); }
};

using StepObserver = std::function<void(std::size_t k, const FullState& estimate)>;

template <TransitionModel M>
EstimationTrace run_adaptive_estimation(const M& model, const AdaptiveOptions& options, const NoiseConfig& noise,
                                        const hydrology::SensorLayout& sensors, const FullState& initial_guess,
                                        const std::vector<Vector>& measurements,
                                        const StepObserver& observer = {}) {
    options.validate();
    noise.validate(initial_guess.size(), sensors.size());
    if (sensors.state_size() != initial_guess.size())
        throw DimensionMismatch("sensor layout and initial guess disagree on N_x");

    using clock = std::chrono::steady_clock;
    EstimationTrace trace;
    trace.records.reserve(measurements.size());
    TriggerState trigger(options.th_e, options.slope_limit);

    reduction::ProjectionMatrix u;
    ReducedEkfState filter;
    FullState estimate = initial_guess;
    Index model_count = 0;
    const Index horizon = options.effective_horizon();
    const Index refit_window = std::min(horizon, options.n_fd);

    for (std::size_t k = 0; k < measurements.size(); ++k) {
        const auto t0 = clock::now();
        EstimationRecord rec;
        rec.step = k;
        try {
            bool fire = k == 0;
            if (!fire) {
                switch (options.mode) {
                case TriggerMode::performance:
                    fire = trigger.fires();
                    break;
                case TriggerMode::time_triggered:
                    fire = static_cast<Index>(k) % options.effective_period() == 0;
                    break;
                case TriggerMode::static_model:
                    break;
                }
            }

            if (fire) {
                const std::size_t origin = k == 0 ? 0 : k - 1;
                const auto& forecast = known_at(model, origin);
                const auto snapshots = reduction::generate_snapshots(forecast, estimate, origin, horizon);
                auto u_new = reduction::build_projection(
                    reduction::cluster_trajectories(snapshots, options.th_C), ++model_count);
                filter = k == 0 ? initialize_filter(estimate, u_new, noise, sensors)
                                : transfer_model(filter, u, u_new, noise, sensors);
                ModelChange change;
                change.step = k;
                change.snapshot_origin = origin;
                change.model_index = u_new.model_index();
                change.r_m = u_new.cols();
                if (k > 0) {
                    change.trigger_e_L = trigger.latest();
                    change.trigger_edot_L = slope_estimate(trigger);
                }
                change.refit_e_L = error_metric_against(snapshots, forecast, u_new, refit_window);
                trace.changes.push_back(change);
                u = std::move(u_new);
                rec.triggered = true;
            }

            if (k > 0) filter = ekf_predict(filter, u, known_at(model, k - 1), k - 1);
            filter = ekf_update(filter, measurements[k], noise.R);
            estimate = reconstruct(filter, u);
            if (observer) observer(k, estimate);

            if (static_cast<Index>(k) % options.stride == 0) {
                trigger.record(compute_error_metric(known_at(model, k), estimate, k, options.n_fd, u));
                rec.metric_evaluated = true;
            }
        } catch (Error& e) {
            e.attach_step(k);
            throw;
        }
        rec.e_L = trigger.latest();
        rec.edot_L = slope_estimate(trigger);
        rec.r_m = u.cols();
        rec.model_index = u.model_index();
        rec.iter_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        trace.records.push_back(rec);
    }
    return trace;
}

}  // namespace soilmor::estimation

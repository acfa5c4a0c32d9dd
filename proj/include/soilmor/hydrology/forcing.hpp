/**
 * @file forcing.hpp
 * @brief Surface inputs, weather forcing and their piecewise-constant schedules
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace soilmor::hydrology {

/// Pivot irrigation for one sampling interval: per-ring rates on the active sector.
struct SurfaceInput {
    Vector u;                  ///< irrigation rate per ring [m/s], length N_r
    Index active_sector = 0;   ///< azimuthal index under the pivot arm
};

/// Weather forcing held constant over one sampling interval.
struct EnvironmentForcing {
    double et = 0.0;    ///< reference evapotranspiration [m/s]
    double kc = 0.0;    ///< crop coefficient [-]
    double rain = 0.0;  ///< precipitation [m/s], applied to every surface node
};

/**
 * @brief Step-indexed piecewise-constant series.
 *
 * Each breakpoint (start_step, value) holds until the next one. Before the
 * first breakpoint the series is zero.
 */
class PiecewiseConstant {
public:
    PiecewiseConstant() = default;

    explicit PiecewiseConstant(std::vector<std::pair<std::size_t, double>> breakpoints)
        : points_(std::move(breakpoints)) {
        std::stable_sort(points_.begin(), points_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    static PiecewiseConstant constant(double value) { return PiecewiseConstant({{0, value}}); }

    double at(std::size_t k) const {
        double value = 0.0;
        for (const auto& [start, v] : points_) {
            if (start > k) break;
            value = v;
        }
        return value;
    }

    bool empty() const { return points_.empty(); }
    const std::vector<std::pair<std::size_t, double>>& breakpoints() const { return points_; }

    /// Throws ValidationError(key) if any value is negative or non-finite.
    void require_nonnegative(const std::string& key) const {
        for (const auto& [start, v] : points_) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw ValidationError(key, "values must be finite and >= 0 (step " +
                                               std::to_string(start) + ")");
        }
    }

private:
    std::vector<std::pair<std::size_t, double>> points_;
};

/// Center-pivot sweep: the arm dwells `sector_steps` intervals on each sector.
struct PivotIrrigation {
    PiecewiseConstant rate;            ///< application rate under the arm [m/s]
    Index sector_steps = 1;
    Index start_sector = 0;
    std::vector<double> ring_profile;  ///< optional per-ring multipliers, length N_r
};

/// Additive errors the estimator sees on top of the true input series.
struct ForecastError {
    PiecewiseConstant irrigation_rate;
    PiecewiseConstant rain;
    PiecewiseConstant et;
};

/**
 * @brief Irrigation and weather inputs for every sampling interval.
 *
 * Serves both the open-loop forecast used for model identification and the
 * inputs driving the truth simulation.
 */
class InputSchedule {
public:
    InputSchedule() = default;

    InputSchedule(Index n_r, Index n_theta, PivotIrrigation pivot, PiecewiseConstant rain,
                  PiecewiseConstant et, PiecewiseConstant kc)
        : n_r_(n_r), n_theta_(n_theta), pivot_(std::move(pivot)), rain_(std::move(rain)),
          et_(std::move(et)), kc_(std::move(kc)) {
        if (n_r_ <= 0 || n_theta_ <= 0)
            throw ValidationError("grid", "schedule needs positive N_r and N_theta");
        if (pivot_.sector_steps <= 0)
            throw ValidationError("pivot_sector_steps", "must be > 0");
        if (!pivot_.ring_profile.empty() && static_cast<Index>(pivot_.ring_profile.size()) != n_r_)
            throw ValidationError("ring_profile", "length must equal N_r");
        for (double w : pivot_.ring_profile)
            if (!(w >= 0.0)) throw ValidationError("ring_profile", "entries must be >= 0");
        pivot_.rate.require_nonnegative("irrigation_rate");
        rain_.require_nonnegative("rain");
        et_.require_nonnegative("et");
        kc_.require_nonnegative("kc");
    }

    SurfaceInput input(std::size_t k) const {
        SurfaceInput in;
        in.active_sector = active_sector(k);
        double rate = pivot_.rate.at(k);
        if (error_) rate = std::max(0.0, rate + error_->irrigation_rate.at(k));
        in.u = Vector::Constant(n_r_, rate);
        if (!pivot_.ring_profile.empty())
            for (Index i = 0; i < n_r_; ++i) in.u[i] *= pivot_.ring_profile[static_cast<std::size_t>(i)];
        return in;
    }

    EnvironmentForcing forcing(std::size_t k) const {
        EnvironmentForcing f;
        f.et = et_.at(k);
        f.kc = kc_.at(k);
        f.rain = rain_.at(k);
        if (error_) {
            f.et = std::max(0.0, f.et + error_->et.at(k));
            f.rain = std::max(0.0, f.rain + error_->rain.at(k));
        }
        return f;
    }

    Index active_sector(std::size_t k) const {
        const auto sweep = static_cast<Index>(k) / pivot_.sector_steps;
        return (pivot_.start_sector + sweep) % n_theta_;
    }

    /// Copy of this schedule as seen through the given forecast errors.
    InputSchedule with_forecast_error(ForecastError error) const {
        InputSchedule out = *this;
        out.error_ = std::move(error);
        return out;
    }

    Index n_r() const { return n_r_; }
    Index n_theta() const { return n_theta_; }

private:
    Index n_r_ = 0;
    Index n_theta_ = 0;
    PivotIrrigation pivot_;
    PiecewiseConstant rain_;
    PiecewiseConstant et_;
    PiecewiseConstant kc_;
    std::optional<ForecastError> error_;
};

}  // namespace soilmor::hydrology

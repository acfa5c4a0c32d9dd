/**
 * @file trigger.hpp
 * @brief e_L history and its rising-slope filter
 */

#pragma once

#include "soilmor/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>

namespace soilmor::estimation {

class TriggerState {
public:
    static constexpr std::size_t kWindow = 10;

    TriggerState() = default;

    explicit TriggerState(double th_e, double slope_limit = 0.05) : th_e_(th_e), slope_limit_(slope_limit) {
        if (!(th_e > 0.0)) throw ValidationError("th_e", "must be > 0");
        if (!(slope_limit > 0.0)) throw ValidationError("slope_limit", "must be > 0");
    }

    void record(double e_l) {
        if (!(e_l >= 0.0)) throw NonFiniteState("e_L must be finite and >= 0");
        history_.push_back(e_l);
        while (history_.size() > kWindow + 1) history_.pop_front();
    }

    const std::deque<double>& history() const { return history_; }
    bool empty() const { return history_.empty(); }
    double latest() const { return history_.empty() ? std::numeric_limits<double>::quiet_NaN() : history_.back(); }
    double th_e() const { return th_e_; }
    double slope_limit() const { return slope_limit_; }

    /// e_L > th_e and the rising slope has reached the limit.
    bool fires() const;

private:
    double th_e_ = 40.0;
    double slope_limit_ = 0.05;
    std::deque<double> history_;
};

/**
 * @brief Mean of the last ten first differences of e_L, falls counted as zero.
 *
 * Zero until eleven values have been recorded.
 */
inline double slope_estimate(const TriggerState& t) {
    const auto& h = t.history();
    if (h.size() < TriggerState::kWindow + 1) return 0.0;
    double sum = 0.0;
    for (std::size_t i = h.size() - TriggerState::kWindow; i < h.size(); ++i)
        sum += std::max(0.0, h[i] - h[i - 1]);
    return sum / static_cast<double>(TriggerState::kWindow);
}

inline bool TriggerState::fires() const {
    return !history_.empty() && latest() > th_e_ && slope_estimate(*this) >= slope_limit_;
}

}  // namespace soilmor::estimation

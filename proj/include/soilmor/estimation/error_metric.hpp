/**
 * @file error_metric.hpp
 * @brief Open-loop prediction error e_L between the reduced and full models
 *
 *   e_L = 1/N_x sum_{j=1}^{N_fd} sum_i |x~_i(t_{k+j}) - x_i(t_{k+j})|
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/reduction/reduced_model.hpp"
#include "soilmor/reduction/snapshots.hpp"
#include "soilmor/types.hpp"

#include <cstddef>

namespace soilmor::estimation {

/// e_L of U against a full trajectory that is already known (rows 0..N_fd).
template <TransitionModel M>
double error_metric_against(const reduction::SnapshotMatrix& full, const M& model,
                            const reduction::ProjectionMatrix& u, Index n_fd) {
    if (n_fd < 1 || n_fd > full.horizon()) throw ValidationError("N_fd", "must lie in [1, snapshot horizon]");
    const Index n_x = full.nodes();
    ReducedState xi = reduction::reduce_state(u, FullState{full.data.row(0).transpose()});
    double total = 0.0;
    for (Index j = 1; j <= n_fd; ++j) {
        xi = reduction::reduced_step(u, xi, model, full.origin_step + static_cast<std::size_t>(j - 1));
        const Vector lifted = u.lift(xi.xi);
        total += (lifted - full.data.row(j).transpose()).cwiseAbs().sum();
    }
    return total / static_cast<double>(n_x);
}

/// Simulates both models N_fd steps from x_hat (the reduced one from U^T x_hat) and compares.
template <TransitionModel M>
double compute_error_metric(const M& model, const FullState& x_hat, std::size_t origin, Index n_fd,
                            const reduction::ProjectionMatrix& u) {
    const auto full = reduction::generate_snapshots(model, x_hat, origin, n_fd);
    return error_metric_against(full, model, u, n_fd);
}

}  // namespace soilmor::estimation

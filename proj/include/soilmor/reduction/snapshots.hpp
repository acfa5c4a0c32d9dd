/**
 * @file snapshots.hpp
 * @brief Noise-free state trajectories used to identify a reduced model
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/types.hpp"

#include <cstddef>

namespace soilmor::reduction {

/// Rows are time samples x(t_k), ..., x(t_{k+N_fd}); columns are nodes.
struct SnapshotMatrix {
    Matrix data;
    std::size_t origin_step = 0;

    Index horizon() const { return data.rows() - 1; }
    Index nodes() const { return data.cols(); }
};

template <TransitionModel M>
SnapshotMatrix generate_snapshots(const M& model, const FullState& x0, std::size_t origin_step,
                                  Index n_fd) {
    if (n_fd < 1) throw ValidationError("N_fd", "must be >= 1");
    SnapshotMatrix out;
    out.origin_step = origin_step;
    out.data.resize(n_fd + 1, x0.size());
    out.data.row(0) = x0.h.transpose();
    FullState x = x0;
    for (Index j = 1; j <= n_fd; ++j) {
        x = model.advance(x, origin_step + static_cast<std::size_t>(j - 1));
        out.data.row(j) = x.h.transpose();
    }
    return out;
}

}  // namespace soilmor::reduction

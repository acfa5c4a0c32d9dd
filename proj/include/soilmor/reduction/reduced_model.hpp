/**
 * @file reduced_model.hpp
 * @brief Galerkin-projected reduced dynamics xi' = U^T step(U xi)
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/hydrology/richards.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/types.hpp"

#include <cstddef>

namespace soilmor::reduction {

/// One sampling interval of the reduced model: lift, advance with the full model, project.
template <TransitionModel M>
ReducedState reduced_step(const ProjectionMatrix& u, const ReducedState& xi, const M& model, std::size_t k) {
    if (xi.size() != u.cols()) throw DimensionMismatch("reduced state does not match projection");
    return reduce_state(u, model.advance(lift_state(u, xi), k));
}

inline ReducedState reduced_step(const ProjectionMatrix& u, const ReducedState& xi,
                                 const hydrology::RichardsModel& model, const hydrology::SurfaceInput& in,
                                 const hydrology::EnvironmentForcing& forcing, double dt) {
    if (xi.size() != u.cols()) throw DimensionMismatch("reduced state does not match projection");
    return reduce_state(u, model.step(lift_state(u, xi), in, forcing, dt));
}

/// Reduced trajectory over n steps from xi0, starting at interval `origin`; row j is step j.
template <TransitionModel M>
Matrix reduced_trajectory(const ProjectionMatrix& u, const ReducedState& xi0, const M& model,
                          std::size_t origin, Index n) {
    Matrix out(n + 1, xi0.size());
    out.row(0) = xi0.xi.transpose();
    ReducedState xi = xi0;
    for (Index j = 1; j <= n; ++j) {
        xi = reduced_step(u, xi, model, origin + static_cast<std::size_t>(j - 1));
        out.row(j) = xi.xi.transpose();
    }
    return out;
}

}  // namespace soilmor::reduction

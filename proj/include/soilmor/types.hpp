/**
 * @file types.hpp
 * @brief Core vector types shared by every soilmor module
 */

#pragma once

#include <Eigen/Dense>

#include <concepts>
#include <cstddef>

namespace soilmor {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Pressure head at every grid node [m].
struct FullState {
    Vector h;

    Index size() const { return h.size(); }
};

/// Cluster-weighted coordinates of a reduced model.
struct ReducedState {
    Vector xi;

    Index size() const { return xi.size(); }
};

/**
 * @brief A discrete-time full-order model advanced one sampling interval at a time.
 *
 * `advance(x, k)` maps the state at t_k to t_{k+1} using whatever inputs the
 * model has scheduled for interval k. Reduction, snapshot generation and the
 * filter are all written against this concept so that tests can inject
 * linear dynamics in place of the Richards simulator.
 */
template <class M>
concept TransitionModel = requires(const M& m, const FullState& x, std::size_t k) {
    { m.advance(x, k) } -> std::same_as<FullState>;
};

/**
 * Models whose parameters change over time may expose `as_of(k)`: the model as
 * known at step k, used unchanged for every later interval. Forecasts launched
 * at step k go through it so they never see a change that happens after k.
 */
template <class M>
concept KnowledgeTimed = TransitionModel<M> && requires(const M& m, std::size_t k) {
    { m.as_of(k) } -> TransitionModel;
};

template <TransitionModel M>
decltype(auto) known_at(const M& m, std::size_t k) {
    if constexpr (KnowledgeTimed<M>)
        return m.as_of(k);
    else
        return (m);
}

}  // namespace soilmor

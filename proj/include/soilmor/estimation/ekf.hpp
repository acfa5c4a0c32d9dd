/**
 * @file ekf.hpp
 * @brief Extended Kalman filter operating in reduced coordinates
 *
 * Prediction:  xi^-  = f_rd(xi),   P^- = A_d P A_d^T + Q_r
 * Update:      K = P^- C_r^T (R + C_r P^- C_r^T)^-1
 *              xi = xi^- + K (y - C_r xi^-),   P = (I - K C_r) P^-
 *
 * with f_rd(xi) = U^T step(U xi) and C_r = C U. A_d is a forward-difference
 * Jacobian of f_rd; every covariance is symmetrized after it is formed.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/estimation/covariance.hpp"
#include "soilmor/hydrology/sensors.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/reduction/reduced_model.hpp"
#include "soilmor/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace soilmor::estimation {

struct ReducedEkfState {
    ReducedState xi_hat;
    Matrix P_r;
    Matrix Q_r;
    Matrix C_r;
    Index model_index = 0;
};

inline void symmetrize(Matrix& p) { p = 0.5 * (p + p.transpose()).eval(); }

/// C U for a row-selection C: row s copies row `node_s` of U.
inline Matrix reduced_output_map(const hydrology::SensorLayout& sensors, const reduction::ProjectionMatrix& u) {
    if (sensors.state_size() != u.rows()) throw DimensionMismatch("sensor layout and projection disagree on N_x");
    Matrix c = Matrix::Zero(sensors.size(), u.cols());
    for (Index s = 0; s < sensors.size(); ++s) {
        const Index node = sensors.nodes()[static_cast<std::size_t>(s)];
        c(s, u.cluster_of(node)) = u.weight(u.cluster_of(node));
    }
    return c;
}

inline ReducedEkfState initialize_filter(const FullState& x_hat0, const reduction::ProjectionMatrix& u,
                                         const NoiseConfig& noise, const hydrology::SensorLayout& sensors) {
    ReducedEkfState s;
    s.xi_hat = reduction::reduce_state(u, x_hat0);
    s.P_r = noise.P0.congruence(u);
    s.Q_r = noise.Q.congruence(u);
    s.C_r = reduced_output_map(sensors, u);
    s.model_index = u.model_index();
    return s;
}

/// Forward-difference perturbation for coordinate value v.
inline double jacobian_step(double v) { return std::max(1e-6, 1e-6 * std::abs(v)); }

/**
 * @brief A_d = d f_rd / d xi at xi by forward differences.
 *
 * `f0` must be f_rd(xi); one further model evaluation is made per column.
 */
template <TransitionModel M>
Matrix reduced_jacobian(const reduction::ProjectionMatrix& u, const ReducedState& xi, const M& model,
                        std::size_t k, const Vector& f0) {
    const Index r = xi.size();
    Matrix a(r, r);
    ReducedState probe = xi;
    for (Index j = 0; j < r; ++j) {
        const double delta = jacobian_step(xi.xi[j]);
        probe.xi[j] = xi.xi[j] + delta;
        Vector fj;
        try {
            fj = reduction::reduced_step(u, probe, model, k).xi;
        } catch (const UnstableStep& e) {
            throw JacobianFailure("column " + std::to_string(j) + ": " + e.message());
        } catch (const NonFiniteState& e) {
            throw JacobianFailure("column " + std::to_string(j) + ": " + e.message());
        }
        if (!fj.allFinite()) throw JacobianFailure("column " + std::to_string(j) + " is non-finite");
        a.col(j) = (fj - f0) / delta;
        probe.xi[j] = xi.xi[j];
    }
    return a;
}

/// Propagates the filter over interval k (from t_k to t_{k+1}).
template <TransitionModel M>
ReducedEkfState ekf_predict(const ReducedEkfState& s, const reduction::ProjectionMatrix& u, const M& model,
                            std::size_t k) {
    if (s.xi_hat.size() != u.cols() || s.P_r.rows() != u.cols())
        throw DimensionMismatch("filter state does not match the active projection");
    ReducedEkfState out = s;
    out.xi_hat = reduction::reduced_step(u, s.xi_hat, model, k);
    const Matrix a = reduced_jacobian(u, s.xi_hat, model, k, out.xi_hat.xi);
    out.P_r = a * s.P_r * a.transpose() + s.Q_r;
    symmetrize(out.P_r);
    return out;
}

inline ReducedEkfState ekf_update(const ReducedEkfState& s, const Vector& y, const Matrix& r) {
    if (y.size() != s.C_r.rows()) throw DimensionMismatch("measurement length differs from N_y");
    if (r.rows() != y.size() || r.cols() != y.size()) throw DimensionMismatch("R must be N_y x N_y");
    Matrix innovation_cov = r + s.C_r * s.P_r * s.C_r.transpose();
    symmetrize(innovation_cov);
    Eigen::LLT<Matrix> llt(innovation_cov);
    if (llt.info() != Eigen::Success || !(llt.rcond() > 1e-14))
        throw SingularInnovation("R + C_r P_r C_r^T is not numerically positive definite");

    // K^T = S^-1 C_r P_r, S symmetric
    const Matrix gain = llt.solve(s.C_r * s.P_r).transpose();
    ReducedEkfState out = s;
    out.xi_hat.xi = s.xi_hat.xi + gain * (y - s.C_r * s.xi_hat.xi);
    const Index n = s.P_r.rows();
    out.P_r = (Matrix::Identity(n, n) - gain * s.C_r) * s.P_r;
    symmetrize(out.P_r);
    return out;
}

inline FullState reconstruct(const ReducedEkfState& s, const reduction::ProjectionMatrix& u) {
    return reduction::lift_state(u, s.xi_hat);
}

/**
 * @brief Moves the filter from model U_old to model U_new through the full space.
 *
 * x = U_old xi, P = U_old P_r U_old^T, then xi' = U_new^T x and
 * P_r' = U_new^T P U_new. Both products go through M = U_new^T U_old, so the
 * full-order covariance is never formed.
 */
inline ReducedEkfState transfer_model(const ReducedEkfState& s, const reduction::ProjectionMatrix& u_old,
                                      const reduction::ProjectionMatrix& u_new, const NoiseConfig& noise,
                                      const hydrology::SensorLayout& sensors) {
    if (u_old.rows() != u_new.rows()) throw DimensionMismatch("projections cover different node counts");
    if (s.xi_hat.size() != u_old.cols() || s.P_r.rows() != u_old.cols())
        throw DimensionMismatch("filter state does not match the old projection");
    const Matrix m = u_new.cross(u_old);
    ReducedEkfState out;
    out.xi_hat.xi = m * s.xi_hat.xi;
    out.P_r = m * s.P_r * m.transpose();
    symmetrize(out.P_r);
    out.Q_r = noise.Q.congruence(u_new);
    out.C_r = reduced_output_map(sensors, u_new);
    out.model_index = u_new.model_index();
    return out;
}

}  // namespace soilmor::estimation

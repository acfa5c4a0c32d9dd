// Independent reference implementations used by the unit and acceptance tests.
// They deliberately avoid the library's reduction/filter code paths.

#pragma once

#include "soilmor/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using soilmor::FullState;
using soilmor::Index;
using soilmor::Matrix;
using soilmor::Vector;

// ---------------------------------------------------------------------------
// Linear test dynamics x_{k+1} = A x_k + b

struct LinearModel {
    Matrix A;
    Vector b;

    FullState advance(const FullState& x, std::size_t) const {
        return FullState{A * x.h + (b.size() ? b : Vector::Zero(x.size()))};
    }
};

// ---------------------------------------------------------------------------
// Textbook Kalman filter on an LTI system, written with explicit inverses.

struct KalmanFilter {
    Matrix A, C, Q, R;
    Vector x;
    Matrix P;

    void predict() {
        x = A * x;
        P = A * P * A.transpose() + Q;
    }

    void update(const Vector& y) {
        const Matrix S = C * P * C.transpose() + R;
        const Matrix K = P * C.transpose() * S.inverse();
        x = x + K * (y - C * x);
        P = P - K * C * P;
    }
};

// ---------------------------------------------------------------------------
// Full-order EKF over an opaque stepper. The Jacobian uses the same forward
// difference rule as the reduced filter, column by column, on the full state.

template <class Model>
struct FullOrderEkf {
    const Model* model;
    Matrix C;  // N_y x N_x selection
    Matrix Q, R;
    Vector x;
    Matrix P;

    static double fd_step(double v) { return std::max(1e-6, 1e-6 * std::abs(v)); }

    void predict(std::size_t k) {
        const Index n = x.size();
        const Vector fx = model->advance(FullState{x}, k).h;
        Matrix A(n, n);
        for (Index j = 0; j < n; ++j) {
            Vector xp = x;
            const double d = fd_step(x[j]);
            xp[j] += d;
            A.col(j) = (model->advance(FullState{xp}, k).h - fx) / d;
        }
        x = fx;
        P = A * P * A.transpose() + Q;
        P = 0.5 * (P + P.transpose()).eval();
    }

    // Same operation order as the reduced filter's update. The forward
    // difference Jacobian divides by 1e-6, so any last-bit difference here
    // would come back a millionfold larger at the next predict.
    void update(const Vector& y) {
        Matrix S = C * P * C.transpose() + R;
        S = 0.5 * (S + S.transpose()).eval();
        const Matrix K = S.llt().solve(C * P).transpose();
        x = x + K * (y - C * x);
        P = (Matrix::Identity(P.rows(), P.cols()) - K * C) * P;
        P = 0.5 * (P + P.transpose()).eval();
    }
};

// ---------------------------------------------------------------------------
// Exhaustive average-linkage clustering: every step recomputes every
// inter-cluster distance from the raw pairwise table.

inline std::vector<Index> reference_clustering(const Matrix& snapshots, double th_C) {
    const Index n = snapshots.cols();
    Matrix d(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Index t = 0; t < snapshots.rows(); ++t) {
                const double diff = snapshots(t, i) - snapshots(t, j);
                s += diff * diff;
            }
            d(i, j) = std::sqrt(s);
        }

    std::vector<std::vector<Index>> clusters;
    for (Index i = 0; i < n; ++i) clusters.push_back({i});

    auto linkage = [&](const std::vector<Index>& a, const std::vector<Index>& b) {
        double s = 0.0;
        for (Index i : a)
            for (Index j : b) s += d(i, j);
        return s / static_cast<double>(a.size() * b.size());
    };
    auto label = [](const std::vector<Index>& c) {
        Index m = c.front();
        for (Index i : c) m = std::min(m, i);
        return m;
    };

    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t ba = 0, bb = 0;
        std::pair<Index, Index> best_key{n, n};
        for (std::size_t a = 0; a < clusters.size(); ++a)
            for (std::size_t b = 0; b < clusters.size(); ++b) {
                if (a == b) continue;
                const Index la = label(clusters[a]);
                const Index lb = label(clusters[b]);
                if (la > lb) continue;
                const double v = linkage(clusters[a], clusters[b]);
                const std::pair<Index, Index> key{la, lb};
                if (v < best || (v == best && key < best_key)) {
                    best = v;
                    ba = a;
                    bb = b;
                    best_key = key;
                }
            }
        if (!(best < th_C)) break;
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
    }

    // ids in order of first member node
    std::vector<Index> assignment(static_cast<std::size_t>(n), -1);
    Index next = 0;
    for (Index i = 0; i < n; ++i) {
        if (assignment[static_cast<std::size_t>(i)] >= 0) continue;
        for (const auto& c : clusters) {
            bool has = false;
            for (Index m : c) has = has || m == i;
            if (!has) continue;
            for (Index m : c) assignment[static_cast<std::size_t>(m)] = next;
        }
        ++next;
    }
    return assignment;
}

// ---------------------------------------------------------------------------
// Loop oracles

inline double trajectory_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
    return std::sqrt(s);
}

inline double percent_mae(const std::vector<double>& est, const std::vector<double>& truth) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        num += std::abs(est[i] - truth[i]);
        den += std::abs(truth[i]);
    }
    return 100.0 * num / den;
}

/// Cluster-mean averaging: every entry replaced by its cluster's mean.
inline Vector cluster_mean(const std::vector<Index>& assignment, const Vector& x) {
    Index count = 0;
    for (Index a : assignment) count = std::max(count, a + 1);
    std::vector<double> sum(static_cast<std::size_t>(count), 0.0);
    std::vector<double> size(static_cast<std::size_t>(count), 0.0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        sum[static_cast<std::size_t>(assignment[i])] += x[static_cast<Index>(i)];
        size[static_cast<std::size_t>(assignment[i])] += 1.0;
    }
    Vector out(x.size());
    for (std::size_t i = 0; i < assignment.size(); ++i)
        out[static_cast<Index>(i)] =
            sum[static_cast<std::size_t>(assignment[i])] / size[static_cast<std::size_t>(assignment[i])];
    return out;
}

/// Dense U built entry by entry from an assignment.
inline Matrix dense_projection(const std::vector<Index>& assignment) {
    Index count = 0;
    for (Index a : assignment) count = std::max(count, a + 1);
    std::vector<double> size(static_cast<std::size_t>(count), 0.0);
    for (Index a : assignment) size[static_cast<std::size_t>(a)] += 1.0;
    Matrix u = Matrix::Zero(static_cast<Index>(assignment.size()), count);
    for (std::size_t i = 0; i < assignment.size(); ++i)
        u(static_cast<Index>(i), assignment[i]) = 1.0 / std::sqrt(size[static_cast<std::size_t>(assignment[i])]);
    return u;
}

/// e_L as a plain double loop over steps and nodes.
template <class Model>
double error_metric(const Model& model, const Vector& x0, const std::vector<Index>& assignment,
                    std::size_t origin, Index n_fd) {
    const Matrix u = dense_projection(assignment);
    Vector full = x0;
    Vector xi = u.transpose() * x0;
    double total = 0.0;
    for (Index j = 0; j < n_fd; ++j) {
        const std::size_t k = origin + static_cast<std::size_t>(j);
        full = model.advance(FullState{full}, k).h;
        xi = u.transpose() * model.advance(FullState{u * xi}, k).h;
        const Vector lifted = u * xi;
        for (Index i = 0; i < full.size(); ++i) total += std::abs(lifted[i] - full[i]);
    }
    return total / static_cast<double>(x0.size());
}

}  // namespace oracle

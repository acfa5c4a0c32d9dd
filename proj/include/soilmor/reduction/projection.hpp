/**
 * @file projection.hpp
 * @brief Cluster-supported projection matrix U (N_x x r_m)
 *
 * Row i of U has a single nonzero, 1/sqrt(|C_j|) in the column of the
 * cluster C_j holding node i. The columns are orthonormal, so U^T U = I and
 * U U^T replaces every entry by its cluster mean.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/reduction/clustering.hpp"
#include "soilmor/types.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace soilmor::reduction {

class ProjectionMatrix {
public:
    ProjectionMatrix() = default;

    explicit ProjectionMatrix(Clustering clustering, Index model_index = 0)
        : clustering_(std::move(clustering)), model_index_(model_index) {
        if (!clustering_.is_partition())
            throw ValidationError("clustering", "assignment is not a partition");
        sizes_.assign(static_cast<std::size_t>(clustering_.count), 0);
        for (Index c : clustering_.assignment) ++sizes_[static_cast<std::size_t>(c)];
        weights_.resize(clustering_.count);
        for (Index j = 0; j < clustering_.count; ++j)
            weights_[j] = 1.0 / std::sqrt(static_cast<double>(sizes_[static_cast<std::size_t>(j)]));
    }

    Index rows() const { return clustering_.nodes(); }
    Index cols() const { return clustering_.count; }
    Index model_index() const { return model_index_; }
    const Clustering& clustering() const { return clustering_; }

    Index cluster_of(Index node) const { return clustering_.assignment[static_cast<std::size_t>(node)]; }
    Index cluster_size(Index j) const { return sizes_[static_cast<std::size_t>(j)]; }
    double weight(Index j) const { return weights_[j]; }
    const Vector& weights() const { return weights_; }

    double coeff(Index i, Index j) const { return cluster_of(i) == j ? weights_[j] : 0.0; }

    Matrix dense() const {
        Matrix u = Matrix::Zero(rows(), cols());
        for (Index i = 0; i < rows(); ++i) u(i, cluster_of(i)) = weights_[cluster_of(i)];
        return u;
    }

    Eigen::SparseMatrix<double> sparse() const {
        Eigen::SparseMatrix<double> u(rows(), cols());
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(static_cast<std::size_t>(rows()));
        for (Index i = 0; i < rows(); ++i) t.emplace_back(i, cluster_of(i), weights_[cluster_of(i)]);
        u.setFromTriplets(t.begin(), t.end());
        return u;
    }

    /// U^T x
    Vector project(const Vector& x) const {
        if (x.size() != rows()) throw DimensionMismatch("project: expected " + std::to_string(rows()) + " entries");
        Vector sums = Vector::Zero(cols());
        for (Index i = 0; i < rows(); ++i) sums[cluster_of(i)] += x[i];
        return sums.cwiseProduct(weights_);
    }

    /// U xi
    Vector lift(const Vector& xi) const {
        if (xi.size() != cols()) throw DimensionMismatch("lift: expected " + std::to_string(cols()) + " entries");
        Vector x(rows());
        for (Index i = 0; i < rows(); ++i) x[i] = weights_[cluster_of(i)] * xi[cluster_of(i)];
        return x;
    }

    /// U^T P U for a dense N_x x N_x matrix.
    Matrix congruence(const Matrix& p) const {
        if (p.rows() != rows() || p.cols() != rows()) throw DimensionMismatch("congruence: P must be N_x x N_x");
        Matrix rows_summed = Matrix::Zero(cols(), rows());
        for (Index i = 0; i < rows(); ++i) rows_summed.row(cluster_of(i)) += p.row(i);
        Matrix out = Matrix::Zero(cols(), cols());
        for (Index l = 0; l < rows(); ++l) out.col(cluster_of(l)) += rows_summed.col(l);
        return weights_.asDiagonal() * out * weights_.asDiagonal();
    }

    /// U P_r U^T
    Matrix expand(const Matrix& p_r) const {
        if (p_r.rows() != cols() || p_r.cols() != cols()) throw DimensionMismatch("expand: P_r must be r_m x r_m");
        Matrix out(rows(), rows());
        for (Index i = 0; i < rows(); ++i)
            for (Index l = 0; l < rows(); ++l)
                out(i, l) = weights_[cluster_of(i)] * p_r(cluster_of(i), cluster_of(l)) * weights_[cluster_of(l)];
        return out;
    }

    /// U^T V for another projection V over the same nodes (r_m x r_other), built in O(N_x).
    Matrix cross(const ProjectionMatrix& other) const {
        if (other.rows() != rows()) throw DimensionMismatch("cross: projections cover different node counts");
        Matrix out = Matrix::Zero(cols(), other.cols());
        for (Index i = 0; i < rows(); ++i) {
            const Index a = cluster_of(i);
            const Index b = other.cluster_of(i);
            out(a, b) += weights_[a] * other.weights_[b];
        }
        return out;
    }

private:
    Clustering clustering_;
    Index model_index_ = 0;
    std::vector<Index> sizes_;
    Vector weights_;
};

inline ProjectionMatrix build_projection(const Clustering& clustering, Index model_index = 0) {
    return ProjectionMatrix(clustering, model_index);
}

inline ReducedState reduce_state(const ProjectionMatrix& u, const FullState& x) {
    return ReducedState{u.project(x.h)};
}

inline FullState lift_state(const ProjectionMatrix& u, const ReducedState& xi) {
    return FullState{u.lift(xi.xi)};
}

}  // namespace soilmor::reduction

/**
 * @file covariance.hpp
 * @brief Full-order covariances that are never materialized at N_x x N_x
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/reduction/projection.hpp"
#include "soilmor/types.hpp"

#include <cmath>

namespace soilmor::estimation {

/// d on the diagonal, o everywhere else: (d - o) I + o 1 1^T.
struct UniformCovariance {
    double diagonal = 1.0;
    double off_diagonal = 0.0;

    Matrix dense(Index n) const {
        Matrix m = Matrix::Constant(n, n, off_diagonal);
        m.diagonal().setConstant(diagonal);
        return m;
    }

    /// U^T S U = (d - o) I + o s s^T with s_j = sqrt(|C_j|).
    Matrix congruence(const reduction::ProjectionMatrix& u) const {
        Vector s(u.cols());
        for (Index j = 0; j < u.cols(); ++j) s[j] = std::sqrt(static_cast<double>(u.cluster_size(j)));
        Matrix out = off_diagonal * (s * s.transpose());
        out.diagonal().array() += diagonal - off_diagonal;
        return out;
    }

    /// Eigenvalues are d - o (multiplicity n - 1) and d + (n - 1) o.
    bool positive_semidefinite(Index n) const {
        return diagonal - off_diagonal >= 0.0 &&
               diagonal + static_cast<double>(n - 1) * off_diagonal >= 0.0;
    }
};

/// Filter tuning: process Q, measurement R and initial P(t_0).
struct NoiseConfig {
    UniformCovariance Q{1.0, 0.0};
    Matrix R;
    UniformCovariance P0{1.0, 5e-5};

    void validate(Index n_x, Index n_y) const {
        if (!Q.positive_semidefinite(n_x)) throw ValidationError("Q", "must be positive semidefinite");
        if (!P0.positive_semidefinite(n_x)) throw ValidationError("P0", "must be positive semidefinite");
        if (R.rows() != n_y || R.cols() != n_y) throw ValidationError("R", "must be N_y x N_y");
        if (!R.isApprox(R.transpose())) throw ValidationError("R", "must be symmetric");
        Eigen::LLT<Matrix> llt(R);
        if (llt.info() != Eigen::Success) throw ValidationError("R", "must be positive definite");
    }
};

}  // namespace soilmor::estimation

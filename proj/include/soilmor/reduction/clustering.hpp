/**
 * @file clustering.hpp
 * @brief Agglomerative average-linkage clustering of node trajectories
 *
 * Every node starts as its own cluster. The closest pair under
 *
 *   D(a, b) = 1/(n_a n_b) sum_{i in a} sum_{j in b} d(x_i, x_j)
 *
 * is merged while that distance is below th_C, where d is the Euclidean
 * distance between snapshot columns. Merged distances follow the
 * Lance-Williams update D(k, a+b) = (n_a D(k, a) + n_b D(k, b)) / (n_a + n_b),
 * which is exact for average linkage.
 *
 * While merging, a cluster is named by its smallest node index; ties between
 * equally close pairs go to the lexicographically smallest (a, b). Final
 * cluster ids are numbered by first member node.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/reduction/snapshots.hpp"
#include "soilmor/types.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <utility>
#include <vector>

namespace soilmor::reduction {

struct Clustering {
    std::vector<Index> assignment;  ///< node -> cluster id in [0, count)
    Index count = 0;

    Index nodes() const { return static_cast<Index>(assignment.size()); }

    std::vector<std::vector<Index>> members() const {
        std::vector<std::vector<Index>> out(static_cast<std::size_t>(count));
        for (Index i = 0; i < nodes(); ++i)
            out[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
        return out;
    }

    /// Contiguous ids, every node assigned, no empty cluster.
    bool is_partition() const {
        std::vector<Index> sizes(static_cast<std::size_t>(count), 0);
        for (Index c : assignment) {
            if (c < 0 || c >= count) return false;
            ++sizes[static_cast<std::size_t>(c)];
        }
        for (Index s : sizes)
            if (s == 0) return false;
        return true;
    }

    static Clustering singletons(Index n) {
        Clustering c;
        c.count = n;
        c.assignment.resize(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) c.assignment[static_cast<std::size_t>(i)] = i;
        return c;
    }
};

/// One agglomeration event; a and b are the representative node ids, a < b.
struct MergeRecord {
    Index a;
    Index b;
    double distance;
    Index merged_size;
};

inline double trajectory_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("trajectories differ in length");
    return (a - b).norm();
}

namespace detail {

/// Strict upper triangle of a symmetric n x n matrix, row-major.
class CondensedMatrix {
public:
    explicit CondensedMatrix(Index n)
        : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2) {}

    double& operator()(Index i, Index j) { return data_[offset(i, j)]; }
    double operator()(Index i, Index j) const { return data_[offset(i, j)]; }

private:
    std::size_t offset(Index i, Index j) const {
        if (i > j) std::swap(i, j);
        const auto ui = static_cast<std::size_t>(i);
        const auto un = static_cast<std::size_t>(n_);
        return ui * (2 * un - ui - 1) / 2 + static_cast<std::size_t>(j - i - 1);
    }

    Index n_;
    std::vector<double> data_;
};

}  // namespace detail

inline Clustering cluster_trajectories(const SnapshotMatrix& snapshots, double th_C,
                                       std::vector<MergeRecord>* merges = nullptr) {
    if (!(th_C > 0.0)) throw ValidationError("th_C", "must be > 0");
    const Index n = snapshots.nodes();
    if (!snapshots.data.allFinite()) throw NonFiniteState("snapshot matrix has non-finite entries");

    detail::CondensedMatrix dist(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            dist(i, j) = trajectory_distance(snapshots.data.col(i), snapshots.data.col(j));

    std::vector<Index> size(static_cast<std::size_t>(n), 1);
    std::vector<Index> parent(static_cast<std::size_t>(n));
    std::vector<bool> active(static_cast<std::size_t>(n), true);
    for (Index i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;

    // Nearest active partner j > i for every active i, ties to the smaller j.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best_d(static_cast<std::size_t>(n), inf);
    std::vector<Index> best_j(static_cast<std::size_t>(n), -1);
    auto refresh = [&](Index i) {
        double d = inf;
        Index jb = -1;
        for (Index j = i + 1; j < n; ++j) {
            if (!active[static_cast<std::size_t>(j)]) continue;
            const double v = dist(i, j);
            if (v < d) {
                d = v;
                jb = j;
            }
        }
        best_d[static_cast<std::size_t>(i)] = d;
        best_j[static_cast<std::size_t>(i)] = jb;
    };
    for (Index i = 0; i < n; ++i) refresh(i);

    while (true) {
        Index a = -1;
        double d_min = inf;
        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)] || best_j[static_cast<std::size_t>(i)] < 0) continue;
            if (best_d[static_cast<std::size_t>(i)] < d_min) {
                d_min = best_d[static_cast<std::size_t>(i)];
                a = i;
            }
        }
        if (a < 0 || !(d_min < th_C)) break;
        const Index b = best_j[static_cast<std::size_t>(a)];
        const auto na = static_cast<double>(size[static_cast<std::size_t>(a)]);
        const auto nb = static_cast<double>(size[static_cast<std::size_t>(b)]);

        active[static_cast<std::size_t>(b)] = false;
        parent[static_cast<std::size_t>(b)] = a;
        size[static_cast<std::size_t>(a)] += size[static_cast<std::size_t>(b)];
        if (merges) merges->push_back({a, b, d_min, size[static_cast<std::size_t>(a)]});

        for (Index k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == a) continue;
            dist(k, a) = (na * dist(k, a) + nb * dist(k, b)) / (na + nb);
        }

        refresh(a);
        for (Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)] || i == a) continue;
            const Index j = best_j[static_cast<std::size_t>(i)];
            if (j == a || j == b) {
                refresh(i);
            } else if (i < a) {
                const double v = dist(i, a);
                if (v < best_d[static_cast<std::size_t>(i)] ||
                    (v == best_d[static_cast<std::size_t>(i)] && a < j)) {
                    best_d[static_cast<std::size_t>(i)] = v;
                    best_j[static_cast<std::size_t>(i)] = a;
                }
            }
        }
    }

    // Resolve representatives, then number clusters by first member node.
    auto root = [&](Index i) {
        while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)];
        return i;
    };
    Clustering out;
    out.assignment.resize(static_cast<std::size_t>(n));
    std::vector<Index> label(static_cast<std::size_t>(n), -1);
    for (Index i = 0; i < n; ++i) {
        const Index r = root(i);
        if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = out.count++;
        out.assignment[static_cast<std::size_t>(i)] = label[static_cast<std::size_t>(r)];
    }
    return out;
}

/// Merge sequence as text, one `merge a b distance size` line per event, then the assignment.
inline void write_dendrogram(std::ostream& os, const std::vector<MergeRecord>& merges,
                             const Clustering& clustering) {
    const auto old = os.precision(17);
    for (const auto& m : merges)
        os << "merge " << m.a << ' ' << m.b << ' ' << m.distance << ' ' << m.merged_size << '\n';
    for (Index i = 0; i < clustering.nodes(); ++i)
        os << "node " << i << ' ' << clustering.assignment[static_cast<std::size_t>(i)] << '\n';
    os.precision(old);
}

}  // namespace soilmor::reduction

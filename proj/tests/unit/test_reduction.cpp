#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <vector>

using namespace fixture;
using namespace soilmor::reduction;

namespace {

SnapshotMatrix random_snapshots(std::mt19937_64& rng, Index rows, Index cols, double scale) {
    SnapshotMatrix s;
    s.data = Matrix(rows, cols);
    std::normal_distribution<double> d(0.0, scale);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) s.data(i, j) = d(rng);
    return s;
}

Clustering random_partition(std::mt19937_64& rng, Index n, Index k) {
    // every cluster gets at least one node, then the rest land anywhere
    std::vector<Index> labels(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i < k ? i : std::uniform_int_distribution<Index>(0, k - 1)(rng);
    std::shuffle(labels.begin(), labels.end(), rng);
    // renumber by first appearance
    std::vector<Index> remap(static_cast<std::size_t>(k), -1);
    Clustering c;
    c.assignment.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        auto& r = remap[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
        if (r < 0) r = c.count++;
        c.assignment[static_cast<std::size_t>(i)] = r;
    }
    return c;
}

/// Uniform-soil model on the small grid with a constant surface input.
RichardsTransition small_transition(double irrigation = 0.0, Index substeps = 4) {
    const auto g = small_grid();
    RichardsModel m(g, SoilField::uniform(loam()), options(substeps));
    PivotIrrigation pivot;
    pivot.rate = PiecewiseConstant::constant(irrigation);
    pivot.sector_steps = 2;
    InputSchedule sched(g.n_r(), g.n_theta(), pivot, PiecewiseConstant::constant(0.0),
                        PiecewiseConstant::constant(1e-8), PiecewiseConstant::constant(1.0));
    return RichardsTransition(std::move(m), std::move(sched), 1800.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// Snapshots

TEST(Snapshots, RowZeroIsInitialState) {
    const auto model = small_transition(1e-7);
    const auto x0 = uniform(model.grid(), -2.0);
    const auto s = generate_snapshots(model, x0, 0, 3);
    EXPECT_EQ(s.data.rows(), 4);
    EXPECT_EQ(s.nodes(), model.size());
    EXPECT_TRUE(s.data.row(0).transpose().isApprox(x0.h, 0.0));
}

TEST(Snapshots, RowsMatchDirectSimulation) {
    const auto model = small_transition(1e-7);
    const auto x0 = uniform(model.grid(), -2.0);
    const auto s = generate_snapshots(model, x0, 5, 6);
    for (Index j = 1; j <= 6; ++j) {
        FullState x = x0;
        for (Index t = 0; t < j; ++t) x = model.advance(x, 5 + static_cast<std::size_t>(t));
        EXPECT_EQ(s.data.row(j).transpose(), x.h) << "row " << j;
    }
}

TEST(Snapshots, EquilibriumGivesIdenticalRows) {
    const auto g = small_grid();
    RichardsModel m(g, SoilField::uniform(loam()), options(1, BottomBoundary::no_flux));
    InputSchedule sched(g.n_r(), g.n_theta(), PivotIrrigation{}, PiecewiseConstant::constant(0.0),
                        PiecewiseConstant::constant(0.0), PiecewiseConstant::constant(1.0));
    RichardsTransition t(std::move(m), std::move(sched), 1800.0);
    const auto s = generate_snapshots(t, hydrostatic(g, -1.0), 0, 1);
    EXPECT_LE((s.data.row(1) - s.data.row(0)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Snapshots, RejectsZeroHorizon) {
    const auto model = small_transition();
    EXPECT_THROW(generate_snapshots(model, uniform(model.grid(), -1.0), 0, 0), ValidationError);
}

// ---------------------------------------------------------------------------
// Trajectory distance

TEST(TrajectoryDistance, IdenticalIsZero) {
    Vector a = Vector::LinSpaced(7, -3.0, 1.0);
    EXPECT_EQ(trajectory_distance(a, a), 0.0);
}

TEST(TrajectoryDistance, ConstantOffset) {
    Vector a = Vector::LinSpaced(9, -3.0, 1.0);
    Vector b = a.array() + 0.25;
    EXPECT_NEAR(trajectory_distance(a, b), 0.25 * 3.0, 1e-14);
    EXPECT_EQ(trajectory_distance(a, b), trajectory_distance(b, a));
}

TEST(TrajectoryDistance, MatchesLoopOracle) {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const Vector a = random_vector(rng, 10, -5.0, 5.0);
        const Vector b = random_vector(rng, 10, -5.0, 5.0);
        const std::vector<double> va(a.data(), a.data() + 10), vb(b.data(), b.data() + 10);
        EXPECT_NEAR(trajectory_distance(a, b), oracle::trajectory_distance(va, vb), 1e-13);
    }
}

TEST(TrajectoryDistance, LengthMismatch) {
    EXPECT_THROW(trajectory_distance(Vector::Zero(3), Vector::Zero(4)), DimensionMismatch);
}

// ---------------------------------------------------------------------------
// Clustering

TEST(Clustering, TinyThresholdKeepsSingletons) {
    std::mt19937_64 rng(3);
    const auto s = random_snapshots(rng, 12, 20, 1.0);
    const auto c = cluster_trajectories(s, 1e-12);
    EXPECT_EQ(c.count, 20);
    EXPECT_TRUE(c.is_partition());
}

TEST(Clustering, InfiniteThresholdMergesEverything) {
    std::mt19937_64 rng(4);
    const auto s = random_snapshots(rng, 12, 20, 1.0);
    const auto c = cluster_trajectories(s, std::numeric_limits<double>::infinity());
    EXPECT_EQ(c.count, 1);
}

TEST(Clustering, TwoSeparatedGroups) {
    SnapshotMatrix s;
    s.data = Matrix(5, 6);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> jitter(0.0, 0.01);
    const std::vector<int> group = {0, 1, 0, 1, 1, 0};
    for (Index j = 0; j < 6; ++j)
        for (Index t = 0; t < 5; ++t) s.data(t, j) = (group[static_cast<std::size_t>(j)] ? 20.0 : 0.0) + jitter(rng);
    const auto c = cluster_trajectories(s, 1.0);
    ASSERT_EQ(c.count, 2);
    for (Index j = 0; j < 6; ++j) EXPECT_EQ(c.assignment[static_cast<std::size_t>(j)], group[static_cast<std::size_t>(j)]);
    EXPECT_EQ(c.assignment, oracle::reference_clustering(s.data, 1.0));
}

TEST(Clustering, MatchesExhaustiveReference) {
    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 10; ++rep) {
        const auto s = random_snapshots(rng, 8, 12, 1.0);
        for (double th : {0.1, 1.0, 3.0, 10.0})
            EXPECT_EQ(cluster_trajectories(s, th).assignment, oracle::reference_clustering(s.data, th))
                << "rep " << rep << " th_C " << th;
    }
}

TEST(Clustering, TiesBreakDeterministically) {
    // three equidistant columns on a line: 0 and 1 merge first
    SnapshotMatrix s;
    s.data = Matrix(1, 3);
    s.data << 0.0, 1.0, 2.0;
    std::vector<MergeRecord> merges;
    const auto c = cluster_trajectories(s, 1.5, &merges);
    ASSERT_FALSE(merges.empty());
    EXPECT_EQ(merges.front().a, 0);
    EXPECT_EQ(merges.front().b, 1);
    EXPECT_EQ(c.assignment, oracle::reference_clustering(s.data, 1.5));
}

TEST(Clustering, ThresholdMonotone) {
    std::mt19937_64 rng(7);
    const auto s = random_snapshots(rng, 10, 40, 1.0);
    Index previous = 0;
    for (double th : {100.0, 10.0, 5.0, 3.0, 2.0, 1.0, 0.5, 0.1}) {
        const Index r = cluster_trajectories(s, th).count;
        EXPECT_GE(r, previous) << "th_C " << th;
        previous = r;
    }
}

TEST(Clustering, NoRemainingPairBelowThreshold) {
    std::mt19937_64 rng(8);
    const auto s = random_snapshots(rng, 10, 30, 1.0);
    const double th = 4.0;
    const auto members = cluster_trajectories(s, th).members();
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            double sum = 0.0;
            for (Index i : members[a])
                for (Index j : members[b]) sum += (s.data.col(i) - s.data.col(j)).norm();
            EXPECT_GE(sum / static_cast<double>(members[a].size() * members[b].size()), th);
        }
}

TEST(Clustering, MergeLogIsConsistent) {
    std::mt19937_64 rng(9);
    const auto s = random_snapshots(rng, 6, 15, 1.0);
    std::vector<MergeRecord> merges;
    const auto c = cluster_trajectories(s, 3.0, &merges);
    EXPECT_EQ(static_cast<Index>(merges.size()), 15 - c.count);
    for (const auto& m : merges) {
        EXPECT_LT(m.a, m.b);
        EXPECT_LT(m.distance, 3.0);
    }
    std::ostringstream os;
    write_dendrogram(os, merges, c);
    EXPECT_NE(os.str().find("node 14 "), std::string::npos);
}

TEST(Clustering, RejectsNonPositiveThreshold) {
    std::mt19937_64 rng(10);
    const auto s = random_snapshots(rng, 3, 4, 1.0);
    try {
        cluster_trajectories(s, -1.0);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.key(), "th_C");
    }
    EXPECT_THROW(cluster_trajectories(s, 0.0), ValidationError);
}

TEST(Clustering, RejectsNonFiniteSnapshots) {
    SnapshotMatrix s;
    s.data = Matrix::Zero(3, 3);
    s.data(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(cluster_trajectories(s, 1.0), NonFiniteState);
}

// ---------------------------------------------------------------------------
// Projection

TEST(Projection, SingletonIsIdentity) {
    const auto u = build_projection(Clustering::singletons(6));
    EXPECT_TRUE(u.dense().isApprox(Matrix::Identity(6, 6), 0.0));
}

TEST(Projection, FourNodeClusterWeights) {
    Clustering c;
    c.assignment = {0, 0, 0, 0};
    c.count = 1;
    const auto u = build_projection(c).dense();
    for (Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(u(i, 0), 0.5);
}

TEST(Projection, OrthonormalColumns) {
    std::mt19937_64 rng(12);
    const auto u = build_projection(random_partition(rng, 50, 7)).dense();
    EXPECT_LE((u.transpose() * u - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Projection, LiftReduceIsClusterMean) {
    std::mt19937_64 rng(13);
    const auto c = random_partition(rng, 40, 6);
    const auto u = build_projection(c);
    const Vector x = random_vector(rng, 40, -3.0, 0.0);
    const Vector got = lift_state(u, reduce_state(u, FullState{x})).h;
    EXPECT_LE((got - oracle::cluster_mean(c.assignment, x)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Projection, PairAveragesToMean) {
    Clustering c;
    c.assignment = {0, 0};
    c.count = 1;
    const auto u = build_projection(c);
    const auto lifted = lift_state(u, reduce_state(u, FullState{Vector{{2.0, 4.0}}}));
    EXPECT_NEAR(lifted.h[0], 3.0, 1e-15);
    EXPECT_NEAR(lifted.h[1], 3.0, 1e-15);
}

TEST(Projection, ProjectorProperties) {
    std::mt19937_64 rng(14);
    const auto u = build_projection(random_partition(rng, 30, 5)).dense();
    const Matrix p = u * u.transpose();
    EXPECT_LE((p - p.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(p.trace(), 5.0, 1e-9);
}

TEST(Projection, SparseDenseAndOperatorsAgree) {
    std::mt19937_64 rng(15);
    const auto c = random_partition(rng, 25, 4);
    const auto u = build_projection(c);
    const Matrix d = u.dense();
    EXPECT_TRUE(Matrix(u.sparse()).isApprox(d, 0.0));
    EXPECT_TRUE(d.isApprox(oracle::dense_projection(c.assignment), 0.0));

    const Vector x = random_vector(rng, 25, -1.0, 1.0);
    EXPECT_LE((u.project(x) - d.transpose() * x).cwiseAbs().maxCoeff(), 1e-14);
    const Vector xi = random_vector(rng, 4, -1.0, 1.0);
    EXPECT_LE((u.lift(xi) - d * xi).cwiseAbs().maxCoeff(), 1e-14);

    Matrix a = Matrix::Random(25, 25);
    const Matrix psd = a * a.transpose();
    EXPECT_LE((u.congruence(psd) - d.transpose() * psd * d).cwiseAbs().maxCoeff(), 1e-11);
    const Matrix pr = u.congruence(psd);
    EXPECT_LE((u.expand(pr) - d * pr * d.transpose()).cwiseAbs().maxCoeff(), 1e-11);

    const auto v = build_projection(random_partition(rng, 25, 9));
    EXPECT_LE((u.cross(v) - d.transpose() * v.dense()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Projection, DimensionChecks) {
    const auto u = build_projection(Clustering::singletons(4));
    EXPECT_THROW(u.project(Vector::Zero(3)), DimensionMismatch);
    EXPECT_THROW(u.lift(Vector::Zero(5)), DimensionMismatch);
    EXPECT_THROW(reduce_state(u, FullState{Vector::Zero(2)}), DimensionMismatch);
}

TEST(Projection, RejectsNonPartition) {
    Clustering c;
    c.assignment = {0, 2, 2};
    c.count = 3;
    EXPECT_THROW(build_projection(c), ValidationError);
}

TEST(Projection, RandomPartitionsSweep) {
    std::mt19937_64 rng(16);
    std::set<Index> seen;
    for (int rep = 0; rep < 100; ++rep) {
        const Index n = std::uniform_int_distribution<Index>(1, 120)(rng);
        const Index k = std::uniform_int_distribution<Index>(1, n)(rng);
        const auto c = random_partition(rng, n, k);
        ASSERT_TRUE(c.is_partition());
        const auto u = build_projection(c);
        const Matrix d = u.dense();
        EXPECT_LE((d.transpose() * d - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-12);
        seen.insert(k);
    }
    EXPECT_GT(seen.size(), 10u);
}

// ---------------------------------------------------------------------------
// Reduced dynamics

TEST(ReducedStep, SingletonEqualsFullStepBitwise) {
    const auto model = small_transition(1e-7);
    std::mt19937_64 rng(17);
    const FullState x{random_vector(rng, model.size(), -3.0, -1.0)};
    const auto u = build_projection(Clustering::singletons(model.size()));
    const auto xi = reduce_state(u, x);
    EXPECT_EQ(reduced_step(u, xi, model, 2).xi, model.advance(x, 2).h);
}

TEST(ReducedStep, SingletonTrajectoryBitwise) {
    const auto model = small_transition(1e-7);
    const auto x0 = uniform(model.grid(), -2.0);
    const auto u = build_projection(Clustering::singletons(model.size()));
    const Matrix traj = reduced_trajectory(u, reduce_state(u, x0), model, 0, 10);
    const auto snaps = generate_snapshots(model, x0, 0, 10);
    EXPECT_EQ(traj, snaps.data);
}

TEST(ReducedStep, EquilibriumPreserved) {
    const auto g = small_grid();
    RichardsModel m(g, SoilField::uniform(loam()), options(1, BottomBoundary::no_flux));
    const auto x = hydrostatic(g, -1.5);
    Clustering c;
    c.assignment.resize(static_cast<std::size_t>(g.size()));
    for (Index i = 0; i < g.size(); ++i) c.assignment[static_cast<std::size_t>(i)] = g.coord(i).i_z;
    c.count = g.n_z();
    const auto u = build_projection(c);
    const auto xi = reduce_state(u, x);
    const auto next = reduced_step(u, xi, m, no_input(g), EnvironmentForcing{}, 1800.0);
    EXPECT_LE((next.xi - xi.xi).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(ReducedStep, OneClusterTracksUniformField) {
    // rain equal to K(h0) over a free-draining column: unit gradient everywhere
    const auto g = small_grid();
    RichardsModel m(g, SoilField::uniform(loam()), options(2, BottomBoundary::free_drainage));
    Clustering c;
    c.assignment.assign(static_cast<std::size_t>(g.size()), 0);
    c.count = 1;
    const auto u = build_projection(c);
    EnvironmentForcing f;
    f.rain = hydraulic_conductivity(-2.0, loam());
    FullState full = uniform(g, -2.0);
    ReducedState xi = reduce_state(u, full);
    for (int k = 0; k < 10; ++k) {
        full = m.step(full, no_input(g), f, 1800.0);
        xi = reduced_step(u, xi, m, no_input(g), f, 1800.0);
    }
    const Vector lifted = lift_state(u, xi).h;
    EXPECT_LE((lifted - full.h).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(xi.xi[0] / std::sqrt(static_cast<double>(g.size())), lifted[0], 1e-12);
}

TEST(ReducedStep, OneClusterStepIsMeanOfFullStep) {
    const auto g = small_grid();
    RichardsModel m(g, SoilField::uniform(loam()), options(2));
    Clustering c;
    c.assignment.assign(static_cast<std::size_t>(g.size()), 0);
    c.count = 1;
    const auto u = build_projection(c);
    EnvironmentForcing f;
    f.et = 2e-8;
    f.kc = 1.0;
    const auto x = uniform(g, -2.0);
    const auto full = m.step(x, no_input(g), f, 1800.0);
    const auto xi = reduced_step(u, reduce_state(u, x), m, no_input(g), f, 1800.0);
    EXPECT_NEAR(lift_state(u, xi).h[3], full.h.mean(), 1e-12);
}

TEST(ReducedStep, DimensionMismatch) {
    const auto model = small_transition();
    const auto u = build_projection(Clustering::singletons(model.size()));
    EXPECT_THROW(reduced_step(u, ReducedState{Vector::Zero(3)}, model, 0), DimensionMismatch);
}

#pragma once

#include "soilmor/soilmor.hpp"

#include <random>

namespace fixture {

using namespace soilmor;
using namespace soilmor::hydrology;

inline VanGenuchtenParams loam() { return {0.5, 1.3, 0.08, 0.46, 1.5e-6}; }
inline VanGenuchtenParams silt() { return {0.8, 1.4, 0.06, 0.45, 1.0e-6}; }
inline VanGenuchtenParams sand() { return {1.0, 1.5, 0.05, 0.43, 2.0e-6}; }

inline CylindricalGrid desk_grid() { return CylindricalGrid(10, 12, 6, 30.0, 0.4); }
inline CylindricalGrid small_grid() { return CylindricalGrid(4, 6, 5, 8.0, 0.4); }

inline RichardsOptions options(Index substeps = 1, BottomBoundary bottom = BottomBoundary::free_drainage) {
    RichardsOptions o;
    o.substeps = substeps;
    o.bottom = bottom;
    return o;
}

/// h = -elevation: zero pressure at the bottom face, h + z constant.
inline FullState hydrostatic(const CylindricalGrid& g, double offset = 0.0) {
    FullState x{Vector(g.size())};
    for (Index i = 0; i < g.size(); ++i) x.h[i] = offset - g.node_elevation(g.coord(i).i_z);
    return x;
}

inline FullState uniform(const CylindricalGrid& g, double h) { return FullState{Vector::Constant(g.size(), h)}; }

inline SurfaceInput no_input(const CylindricalGrid& g) { return {Vector::Zero(g.n_r()), 0}; }

inline Vector random_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = d(rng);
    return v;
}

}  // namespace fixture

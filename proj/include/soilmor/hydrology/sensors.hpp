/**
 * @file sensors.hpp
 * @brief Point sensors: y = C x + v with C a row selection of the identity
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/hydrology/grid.hpp"
#include "soilmor/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace soilmor::hydrology {

class SensorLayout {
public:
    SensorLayout() = default;

    SensorLayout(std::vector<Index> nodes, Index n_x) : nodes_(std::move(nodes)), n_x_(n_x) {
        if (nodes_.empty()) throw BadSensorIndex("sensor list is empty");
        for (Index idx : nodes_)
            if (idx < 0 || idx >= n_x_)
                throw BadSensorIndex("sensor node " + std::to_string(idx) + " outside [0, " +
                                     std::to_string(n_x_) + ")");
    }

    /**
     * @brief Regular lattice: `n_r` rings x `n_theta` sectors on each listed layer.
     *
     * Ring and sector positions are spread evenly with a half-spacing offset.
     */
    static SensorLayout lattice(const CylindricalGrid& grid, Index n_r, Index n_theta,
                                const std::vector<Index>& layers) {
        if (n_r <= 0 || n_r > grid.n_r() || n_theta <= 0 || n_theta > grid.n_theta())
            throw ValidationError("sensor_lattice", "lattice counts must fit the grid");
        std::vector<Index> nodes;
        for (Index iz : layers) {
            if (iz < 0 || iz >= grid.n_z())
                throw ValidationError("sensor_lattice.layers", "layer index out of range");
            for (Index a = 0; a < n_theta; ++a) {
                const Index it = (2 * a + 1) * grid.n_theta() / (2 * n_theta);
                for (Index b = 0; b < n_r; ++b) {
                    const Index ir = (2 * b + 1) * grid.n_r() / (2 * n_r);
                    nodes.push_back(grid.index(ir, it, iz));
                }
            }
        }
        return SensorLayout(std::move(nodes), grid.size());
    }

    const std::vector<Index>& nodes() const { return nodes_; }
    Index size() const { return static_cast<Index>(nodes_.size()); }
    Index state_size() const { return n_x_; }

    Matrix dense() const {
        Matrix c = Matrix::Zero(size(), n_x_);
        for (Index s = 0; s < size(); ++s) c(s, nodes_[static_cast<std::size_t>(s)]) = 1.0;
        return c;
    }

    Vector select(const Vector& x) const {
        if (x.size() != n_x_) throw DimensionMismatch("state length differs from sensor layout");
        Vector y(size());
        for (Index s = 0; s < size(); ++s) y[s] = x[nodes_[static_cast<std::size_t>(s)]];
        return y;
    }

private:
    std::vector<Index> nodes_;
    Index n_x_ = 0;
};

/// y = C x + v.
inline Vector observe(const FullState& x, const SensorLayout& sensors, const Vector& noise) {
    for (Index idx : sensors.nodes())
        if (idx >= x.size())
            throw BadSensorIndex("sensor node " + std::to_string(idx) + " outside state of size " +
                                 std::to_string(x.size()));
    if (noise.size() != sensors.size())
        throw DimensionMismatch("noise draw must have one entry per sensor");
    Vector y(sensors.size());
    for (Index s = 0; s < sensors.size(); ++s) y[s] = x.h[sensors.nodes()[static_cast<std::size_t>(s)]] + noise[s];
    return y;
}

}  // namespace soilmor::hydrology

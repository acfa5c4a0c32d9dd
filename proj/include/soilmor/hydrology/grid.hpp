/**
 * @file grid.hpp
 * @brief Cell-centred cylindrical grid over a circular field
 *
 * Rings are annuli of width dr with centres r_i = (i + 1/2) dr, so no node
 * sits on the axis. Layers are indexed from the surface down: layer 0 is the
 * top cell and its centre lies dz/2 below the surface. Flat index:
 *
 *   idx = i_r + N_r * (i_theta + N_theta * i_z)
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/types.hpp"

#include <numbers>

namespace soilmor::hydrology {

struct NodeCoord {
    Index i_r;
    Index i_theta;
    Index i_z;
};

class CylindricalGrid {
public:
    CylindricalGrid() = default;

    CylindricalGrid(Index n_r, Index n_theta, Index n_z, double radius, double depth)
        : n_r_(n_r), n_theta_(n_theta), n_z_(n_z), radius_(radius), depth_(depth) {
        if (n_r <= 0) throw ValidationError("N_r", "must be > 0");
        if (n_theta <= 0) throw ValidationError("N_theta", "must be > 0");
        if (n_z <= 0) throw ValidationError("N_z", "must be > 0");
        if (!(radius > 0.0)) throw ValidationError("radius", "must be > 0");
        if (!(depth > 0.0)) throw ValidationError("depth", "must be > 0");
        dr_ = radius / static_cast<double>(n_r);
        dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(n_theta);
        dz_ = depth / static_cast<double>(n_z);
    }

    Index n_r() const { return n_r_; }
    Index n_theta() const { return n_theta_; }
    Index n_z() const { return n_z_; }
    Index size() const { return n_r_ * n_theta_ * n_z_; }
    double radius() const { return radius_; }
    double depth() const { return depth_; }
    double dr() const { return dr_; }
    double dtheta() const { return dtheta_; }
    double dz() const { return dz_; }

    Index index(Index i_r, Index i_theta, Index i_z) const {
        return i_r + n_r_ * (i_theta + n_theta_ * i_z);
    }

    NodeCoord coord(Index idx) const {
        NodeCoord c;
        c.i_r = idx % n_r_;
        c.i_theta = (idx / n_r_) % n_theta_;
        c.i_z = idx / (n_r_ * n_theta_);
        return c;
    }

    double node_radius(Index i_r) const { return (static_cast<double>(i_r) + 0.5) * dr_; }
    double node_angle(Index i_theta) const { return static_cast<double>(i_theta) * dtheta_; }
    /// Depth of the layer centre below the surface [m].
    double node_depth(Index i_z) const { return (static_cast<double>(i_z) + 0.5) * dz_; }
    /// Elevation of the layer centre above the bottom boundary [m].
    double node_elevation(Index i_z) const { return depth_ - node_depth(i_z); }
    double layer_top_depth(Index i_z) const { return static_cast<double>(i_z) * dz_; }

    /// Horizontal footprint of a cell in ring i_r [m^2].
    double cell_area(Index i_r) const { return node_radius(i_r) * dr_ * dtheta_; }
    double cell_volume(Index i_r) const { return cell_area(i_r) * dz_; }
    double surface_area() const { return std::numbers::pi * radius_ * radius_; }

    /// Quadrant 0..3 of a sector, splitting the circle into four equal arcs.
    Index quadrant(Index i_theta) const { return (4 * i_theta) / n_theta_; }

private:
    Index n_r_ = 0;
    Index n_theta_ = 0;
    Index n_z_ = 0;
    double radius_ = 0.0;
    double depth_ = 0.0;
    double dr_ = 0.0;
    double dtheta_ = 0.0;
    double dz_ = 0.0;
};

}  // namespace soilmor::hydrology

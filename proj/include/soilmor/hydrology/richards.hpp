/**
 * @file richards.hpp
 * @brief Richards equation in cylindrical coordinates, discretized by central differences
 *
 *   c(h) dh/dt = 1/r d/dr[r K dh/dr] + 1/r^2 d/dtheta[K dh/dtheta]
 *              + d/dz[K (dh/dz + 1)] + S(h, z)
 *
 * with z the elevation. Boundaries:
 *   - surface: prescribed infiltration flux u (pivot irrigation) + rain
 *   - bottom: free drainage (unit gradient, flux K(h)) by default
 *   - radial: no flux at the inner and outer rings
 *   - azimuthal: periodic
 *
 * Face conductivities are arithmetic means of the adjacent node values. Every
 * node gathers its own face fluxes in a fixed order, so the divergence is
 * exactly conservative and nodes with identical neighbourhoods produce
 * bit-identical derivatives.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/hydrology/forcing.hpp"
#include "soilmor/hydrology/grid.hpp"
#include "soilmor/hydrology/van_genuchten.hpp"
#include "soilmor/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace soilmor::hydrology {

enum class BottomBoundary {
    free_drainage,  ///< unit hydraulic gradient, outflow K(h)
    water_table,    ///< h = 0 on the bottom face
    no_flux,
};

/// Per-zone soil parameters; zones are assigned by azimuthal sector.
struct SoilField {
    std::vector<VanGenuchtenParams> zones;
    std::vector<Index> sector_zone;  ///< length N_theta; empty = quadrant split over zones

    static SoilField uniform(const VanGenuchtenParams& p) { return SoilField{{p}, {}}; }

    Index zone_of_sector(Index i_theta, Index n_theta) const {
        if (!sector_zone.empty()) return sector_zone[static_cast<std::size_t>(i_theta)];
        const auto n_zones = static_cast<Index>(zones.size());
        return (i_theta * n_zones) / n_theta;
    }

    void validate(Index n_theta, const std::string& key = "soil_zones") const {
        if (zones.empty()) throw ValidationError(key, "at least one zone required");
        for (std::size_t i = 0; i < zones.size(); ++i)
            zones[i].validate(key + "[" + std::to_string(i) + "]");
        if (!sector_zone.empty()) {
            if (static_cast<Index>(sector_zone.size()) != n_theta)
                throw ValidationError("sector_zones", "length must equal N_theta");
            for (Index z : sector_zone)
                if (z < 0 || z >= static_cast<Index>(zones.size()))
                    throw ValidationError("sector_zones", "zone index out of range");
        }
    }
};

struct RichardsOptions {
    FeddesParams feddes;
    double root_depth = 0.3;         ///< [m]
    double specific_storage = 1e-5;  ///< added to c(h) so saturated nodes stay integrable [1/m]
    Index substeps = 1;              ///< explicit Euler sub-steps per sampling interval
    BottomBoundary bottom = BottomBoundary::free_drainage;
};

/// Cumulative boundary and sink volumes over one or more steps [m^3].
struct WaterBudget {
    double inflow = 0.0;
    double drainage = 0.0;
    double extraction = 0.0;

    double net() const { return inflow - drainage - extraction; }
};

class RichardsModel {
public:
    RichardsModel() = default;

    RichardsModel(CylindricalGrid grid, SoilField soil, RichardsOptions options)
        : grid_(std::move(grid)), soil_(std::move(soil)), options_(std::move(options)) {
        soil_.validate(grid_.n_theta());
        options_.feddes.validate();
        if (!(options_.root_depth >= 0.0 && options_.root_depth <= grid_.depth()))
            throw ValidationError("root_depth", "must lie within [0, depth]");
        if (!(options_.specific_storage >= 0.0))
            throw ValidationError("specific_storage", "must be >= 0");
        if (options_.substeps <= 0) throw ValidationError("n_substeps", "must be > 0");
        node_params_.resize(static_cast<std::size_t>(grid_.size()));
        for (Index idx = 0; idx < grid_.size(); ++idx) {
            const auto zone = soil_.zone_of_sector(grid_.coord(idx).i_theta, grid_.n_theta());
            node_params_[static_cast<std::size_t>(idx)] = soil_.zones[static_cast<std::size_t>(zone)];
        }
    }

    const CylindricalGrid& grid() const { return grid_; }
    const SoilField& soil() const { return soil_; }
    const RichardsOptions& options() const { return options_; }
    Index size() const { return grid_.size(); }

    const VanGenuchtenParams& params_at(Index idx) const {
        return node_params_[static_cast<std::size_t>(idx)];
    }

    /// dh/dt at every node [m/s].
    Vector rhs(const FullState& x, const SurfaceInput& u, const EnvironmentForcing& forcing) const {
        return evaluate(x, u, forcing, nullptr);
    }

    /**
     * @brief Advance by dt using explicit Euler with `substeps` equal sub-steps.
     *
     * If `budget` is given, boundary and sink volumes accumulated over the
     * sub-steps are added to it.
     */
    FullState step(const FullState& x, const SurfaceInput& u, const EnvironmentForcing& forcing,
                   double dt, WaterBudget* budget = nullptr) const {
        if (!(dt > 0.0)) throw ValidationError("dt", "must be > 0");
        const double h_sub = dt / static_cast<double>(options_.substeps);
        FullState out = x;
        for (Index s = 0; s < options_.substeps; ++s) {
            WaterBudget rate;
            const Vector dh = evaluate(out, u, forcing, budget ? &rate : nullptr);
            out.h += h_sub * dh;
            if (!out.h.allFinite())
                throw UnstableStep("non-finite head after sub-step " + std::to_string(s) + " of " +
                                   std::to_string(options_.substeps) +
                                   "; increase n_substeps");
            if (budget) {
                budget->inflow += h_sub * rate.inflow;
                budget->drainage += h_sub * rate.drainage;
                budget->extraction += h_sub * rate.extraction;
            }
        }
        return out;
    }

    /// Stored water sum_i (theta_i + S_s h_i) V_i [m^3]; its h-derivative matches the rhs storage term.
    double storage(const FullState& x) const {
        double total = 0.0;
        for (Index idx = 0; idx < grid_.size(); ++idx) {
            const double h = x.h[idx];
            const double w = water_content(h, params_at(idx)) + options_.specific_storage * h;
            total += w * grid_.cell_volume(grid_.coord(idx).i_r);
        }
        return total;
    }

    /**
     * @brief Sub-step count keeping the explicit diffusion number <= 0.5.
     *
     * The diffusivity K/(c + S_s) grows towards saturation, so it is evaluated at
     * the wettest head expected during a run.
     */
    Index stable_substeps(double dt, double wettest_head) const {
        double d_max = 0.0;
        for (const auto& p : soil_.zones) {
            const auto c = constitutive(wettest_head, p);
            d_max = std::max(d_max, c.conductivity / (c.capacity + options_.specific_storage));
        }
        const double r0 = grid_.node_radius(0);
        double inv = 1.0 / (grid_.dz() * grid_.dz()) + 1.0 / (grid_.dr() * grid_.dr());
        if (grid_.n_theta() > 1) inv += 1.0 / (r0 * r0 * grid_.dtheta() * grid_.dtheta());
        const double dt_max = 0.5 / (d_max * inv);
        return std::max<Index>(1, static_cast<Index>(std::ceil(dt / dt_max)));
    }

private:
    Vector evaluate(const FullState& x, const SurfaceInput& u, const EnvironmentForcing& forcing,
                    WaterBudget* rates) const {
        const Index n = grid_.size();
        if (x.size() != n)
            throw DimensionMismatch("state has " + std::to_string(x.size()) + " entries, grid has " +
                                    std::to_string(n));
        if (u.u.size() != grid_.n_r())
            throw DimensionMismatch("surface input must have N_r entries");
        if (!x.h.allFinite()) throw NonFiniteState("state contains non-finite heads");
        if (!u.u.allFinite() || !std::isfinite(forcing.et) || !std::isfinite(forcing.kc) ||
            !std::isfinite(forcing.rain))
            throw NonFiniteState("inputs contain non-finite values");

        const Index nr = grid_.n_r();
        const Index nt = grid_.n_theta();
        const Index nz = grid_.n_z();
        const double dr = grid_.dr();
        const double dz = grid_.dz();
        const double dth2 = grid_.dtheta() * grid_.dtheta();

        std::vector<double> K(static_cast<std::size_t>(n));
        std::vector<double> C(static_cast<std::size_t>(n));
        for (Index i = 0; i < n; ++i) {
            const auto c = constitutive(x.h[i], params_at(i));
            K[static_cast<std::size_t>(i)] = c.conductivity;
            C[static_cast<std::size_t>(i)] = c.capacity + options_.specific_storage;
        }
        auto k_at = [&](Index i) { return K[static_cast<std::size_t>(i)]; };
        auto face = [&](Index i, Index j) { return 0.5 * (k_at(i) + k_at(j)); };

        Vector out(n);
        for (Index iz = 0; iz < nz; ++iz) {
            const double top_depth = grid_.layer_top_depth(iz);
            for (Index it = 0; it < nt; ++it) {
                const Index it_next = (it + 1) % nt;
                const Index it_prev = (it + nt - 1) % nt;
                for (Index ir = 0; ir < nr; ++ir) {
                    const Index i = grid_.index(ir, it, iz);
                    const double h = x.h[i];
                    const double r = grid_.node_radius(ir);
                    double div = 0.0;

                    // radial
                    if (ir + 1 < nr) {
                        const Index j = i + 1;
                        div += (r + 0.5 * dr) / (r * dr * dr) * face(i, j) * (x.h[j] - h);
                    }
                    if (ir > 0) {
                        const Index j = i - 1;
                        div += (r - 0.5 * dr) / (r * dr * dr) * face(i, j) * (x.h[j] - h);
                    }

                    // azimuthal, periodic
                    if (nt > 1) {
                        const Index jn = grid_.index(ir, it_next, iz);
                        const Index jp = grid_.index(ir, it_prev, iz);
                        div += face(i, jn) * (x.h[jn] - h) / (r * r * dth2);
                        div += face(i, jp) * (x.h[jp] - h) / (r * r * dth2);
                    }

                    // vertical: downward flux q = K (dh/dz + 1), z the elevation
                    double q_in;
                    if (iz == 0) {
                        q_in = forcing.rain + (it == u.active_sector ? u.u[ir] : 0.0);
                    } else {
                        const Index j = grid_.index(ir, it, iz - 1);
                        q_in = face(i, j) * ((x.h[j] - h) / dz + 1.0);
                    }
                    double q_out;
                    if (iz + 1 < nz) {
                        const Index j = grid_.index(ir, it, iz + 1);
                        q_out = face(i, j) * ((h - x.h[j]) / dz + 1.0);
                    } else {
                        switch (options_.bottom) {
                        case BottomBoundary::free_drainage:
                            q_out = k_at(i);
                            break;
                        case BottomBoundary::water_table:
                            q_out = 0.5 * (k_at(i) + params_at(i).K_s) * (h / (0.5 * dz) + 1.0);
                            break;
                        default:
                            q_out = 0.0;
                            break;
                        }
                    }
                    div += (q_in - q_out) / dz;

                    const double sink = sink_term(h, top_depth, dz, forcing, options_.root_depth,
                                                  options_.feddes);
                    out[i] = (div + sink) / C[static_cast<std::size_t>(i)];

                    if (rates) {
                        const double area = grid_.cell_area(ir);
                        if (iz == 0) rates->inflow += q_in * area;
                        if (iz + 1 == nz) rates->drainage += q_out * area;
                        rates->extraction -= sink * area * dz;
                    }
                }
            }
        }
        return out;
    }

    CylindricalGrid grid_;
    SoilField soil_;
    RichardsOptions options_;
    std::vector<VanGenuchtenParams> node_params_;
};

/**
 * @brief Richards model bound to an input schedule and a soil timeline.
 *
 * Satisfies TransitionModel: `advance(x, k)` applies the inputs scheduled for
 * interval k with the soil field active at step k. Soil shifts are modelled as
 * additional (start_step, model) entries.
 */
class RichardsTransition {
public:
    RichardsTransition(RichardsModel model, InputSchedule schedule, double dt)
        : schedule_(std::make_shared<InputSchedule>(std::move(schedule))), dt_(dt) {
        if (!(dt > 0.0)) throw ValidationError("delta", "must be > 0");
        timeline_.emplace_back(0, std::make_shared<RichardsModel>(std::move(model)));
    }

    /// From step `start` on, use `model` (same grid required).
    void add_shift(std::size_t start, RichardsModel model) {
        if (model.size() != timeline_.front().second->size())
            throw DimensionMismatch("soil shift must keep the grid");
        timeline_.emplace_back(start, std::make_shared<RichardsModel>(std::move(model)));
        std::stable_sort(timeline_.begin(), timeline_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    const RichardsModel& model_at(std::size_t k) const { return *timeline_for(k); }

    FullState advance(const FullState& x, std::size_t k) const {
        return model_at(k).step(x, schedule_->input(k), schedule_->forcing(k), dt_);
    }

    FullState advance(const FullState& x, std::size_t k, WaterBudget& budget) const {
        return model_at(k).step(x, schedule_->input(k), schedule_->forcing(k), dt_, &budget);
    }

    /// The soil active at step k, kept for all later steps; inputs unchanged.
    RichardsTransition as_of(std::size_t k) const {
        RichardsTransition out = *this;
        out.timeline_ = {{0, timeline_for(k)}};
        return out;
    }

    const InputSchedule& schedule() const { return *schedule_; }
    double dt() const { return dt_; }
    Index size() const { return timeline_.front().second->size(); }
    const CylindricalGrid& grid() const { return timeline_.front().second->grid(); }

private:
    std::shared_ptr<const RichardsModel> timeline_for(std::size_t k) const {
        auto active = timeline_.front().second;
        for (const auto& [start, m] : timeline_) {
            if (start > k) break;
            active = m;
        }
        return active;
    }

    std::vector<std::pair<std::size_t, std::shared_ptr<const RichardsModel>>> timeline_;
    std::shared_ptr<const InputSchedule> schedule_;
    double dt_;
};

}  // namespace soilmor::hydrology

/**
 * @file van_genuchten.hpp
 * @brief Van Genuchten-Mualem soil hydraulic functions and Feddes root uptake
 *
 *   S_e(h) = [1 + (alpha |h|)^n]^(-m),  m = 1 - 1/n
 *   theta(h) = theta_r + (theta_s - theta_r) S_e
 *   c(h) = d theta / dh
 *   K(h) = K_s S_e^(1/2) [1 - (1 - S_e^(1/m))^m]^2
 *
 * For h >= 0 the soil is saturated: theta = theta_s, c = 0, K = K_s.
 */

#pragma once

#include "soilmor/error.hpp"
#include "soilmor/hydrology/forcing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace soilmor::hydrology {

struct VanGenuchtenParams {
    double alpha = 1.0;     ///< [1/m]
    double n_vg = 1.5;      ///< [-]
    double theta_r = 0.05;  ///< [m3/m3]
    double theta_s = 0.45;  ///< [m3/m3]
    double K_s = 1e-6;      ///< [m/s]

    double m() const { return 1.0 - 1.0 / n_vg; }

    void validate(const std::string& key = "soil") const {
        if (!(alpha > 0.0)) throw ValidationError(key + ".alpha", "must be > 0");
        if (!(n_vg > 1.0)) throw ValidationError(key + ".n_vg", "must be > 1");
        if (!(K_s > 0.0)) throw ValidationError(key + ".K_s", "must be > 0");
        if (!(theta_r >= 0.0 && theta_r < theta_s && theta_s <= 1.0))
            throw ValidationError(key + ".theta_r", "need 0 <= theta_r < theta_s <= 1");
    }
};

/// theta, c and K evaluated together; the rhs needs all three at every node.
struct Constitutive {
    double theta;
    double capacity;
    double conductivity;
};

inline Constitutive constitutive(double h, const VanGenuchtenParams& p) {
    if (h >= 0.0) return {p.theta_s, 0.0, p.K_s};
    const double m = p.m();
    const double ah = p.alpha * -h;
    const double x = std::pow(ah, p.n_vg);
    if (!std::isfinite(x)) return {p.theta_r, 0.0, 0.0};
    const double se = std::pow(1.0 + x, -m);
    // S_e^(1/m) = 1/(1+x); the bracket is evaluated via log1p/expm1 to keep
    // precision once S_e is small.
    const double bracket = -std::expm1(m * std::log1p(-1.0 / (1.0 + x)));
    Constitutive out;
    out.theta = p.theta_r + (p.theta_s - p.theta_r) * se;
    out.capacity = (p.theta_s - p.theta_r) * m * p.n_vg * p.alpha * (x / ah) * se / (1.0 + x);
    out.conductivity = p.K_s * std::sqrt(se) * bracket * bracket;
    return out;
}

inline double water_content(double h, const VanGenuchtenParams& p) {
    if (h >= 0.0) return p.theta_s;
    const double x = std::pow(p.alpha * -h, p.n_vg);
    return p.theta_r + (p.theta_s - p.theta_r) * std::pow(1.0 + x, -p.m());
}

inline double capillary_capacity(double h, const VanGenuchtenParams& p) {
    return constitutive(h, p).capacity;
}

inline double hydraulic_conductivity(double h, const VanGenuchtenParams& p) {
    return constitutive(h, p).conductivity;
}

/**
 * @brief Feddes water-stress thresholds [m], ordered h1 > h2 > h3 > h4.
 *
 * Uptake is zero above h1 (anaerobic) and below h4 (wilting), full between
 * h2 and h3, and linear on the two ramps.
 */
struct FeddesParams {
    double h1 = -0.1;
    double h2 = -0.25;
    double h3 = -4.0;
    double h4 = -150.0;

    void validate() const {
        if (!(h1 <= 0.0 && h1 > h2 && h2 > h3 && h3 > h4))
            throw ValidationError("feddes", "need 0 >= h1 > h2 > h3 > h4");
    }
};

inline double stress_factor(double h, const FeddesParams& f) {
    if (h > f.h1 || h <= f.h4) return 0.0;
    if (h > f.h2) return (f.h1 - h) / (f.h1 - f.h2);
    if (h >= f.h3) return 1.0;
    return (h - f.h4) / (f.h3 - f.h4);
}

/**
 * @brief Root water uptake in one soil layer [1/s], non-positive.
 *
 * Roots are uniform over [0, root_depth] below the surface; a layer spanning
 * [top_depth, top_depth + thickness] receives its overlapping share of the
 * crop demand K_c * ET, so the column integral of S over the root zone equals
 * -K_c * ET when the stress factor is one.
 */
inline double sink_term(double h, double top_depth, double thickness,
                        const EnvironmentForcing& forcing, double root_depth,
                        const FeddesParams& feddes) {
    const double demand = forcing.kc * forcing.et;
    if (demand <= 0.0 || root_depth <= 0.0) return 0.0;
    const double overlap =
        std::max(0.0, std::min(top_depth + thickness, root_depth) - std::max(top_depth, 0.0));
    if (overlap <= 0.0) return 0.0;
    return -stress_factor(h, feddes) * demand * (overlap / root_depth) / thickness;
}

}  // namespace soilmor::hydrology

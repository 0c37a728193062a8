#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "topdc/errors.hpp"

namespace topdc {

/// Uniform wavenumber grid with an odd number of points so the centre is sampled.
struct KGrid {
    double k_min = 0.0;
    double k_max = 0.0;
    std::size_t n_points = 0;

    static KGrid centered(double center, double half_width, std::size_t n) {
        KGrid g{center - half_width, center + half_width, n};
        g.validate();
        return g;
    }

    void validate() const {
        if (n_points < 3 || n_points % 2 == 0)
            throw PhysicsError("grid needs an odd number of points >= 3, got " + std::to_string(n_points));
        if (!(k_min < k_max) || !std::isfinite(k_min) || !std::isfinite(k_max))
            throw PhysicsError("grid bounds must satisfy k_min < k_max");
    }

    double spacing() const { return (k_max - k_min) / static_cast<double>(n_points - 1); }
    std::size_t center_index() const { return n_points / 2; }
    double center() const { return at(center_index()); }

    double at(std::size_t i) const {
        if (i == center_index()) return 0.5 * (k_min + k_max);
        return k_min + static_cast<double>(i) * spacing();
    }

    /// Same bounds, twice the resolution: every coarse point stays a grid point.
    KGrid refined() const { return {k_min, k_max, 2 * n_points - 1}; }

    friend bool operator==(const KGrid&, const KGrid&) = default;
};

} // namespace topdc

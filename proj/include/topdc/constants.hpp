#pragma once

namespace topdc {

/// CODATA 2018 values, SI units.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;  ///< J s
    static constexpr double c = 299792458.0;         ///< m/s
    static constexpr double eps0 = 8.8541878128e-12; ///< F/m
};

inline constexpr double pi = 3.14159265358979323846;

} // namespace topdc

#pragma once

#include <string>

namespace fg {

/// Physical constants table. Values are the CODATA-rounded ones every
/// estimator in this project assumes; the version string is stamped into run
/// manifests so a swapped table is visible in outputs.
struct PhysicalConstants {
    double hbar = 1.0546e-34; ///< J s
    double h = 6.626e-34;     ///< J s
    double t_P = 5.391e-44;   ///< s, Planck time
    double c = 2.998e8;       ///< m/s
    double k_B = 1.381e-23;   ///< J/K
    double m_p = 1.673e-27;   ///< kg
    double m_e = 9.109e-31;   ///< kg
    double t_U = 1e17;        ///< s, age of the universe
    std::string version = "builtin-1";

    double planck_length() const { return c * t_P; }
};

/// Time/energy scale mode for the dynamics integrators. SI carries the real
/// hbar; natural mode sets hbar = 1 for desk-scale test problems. The label
/// is stamped into every output that depends on it.
struct Units {
    double hbar = 1.0546e-34;
    std::string label = "si";

    static Units si() { return {1.0546e-34, "si"}; }
    static Units natural() { return {1.0, "natural"}; }
};

} // namespace fg

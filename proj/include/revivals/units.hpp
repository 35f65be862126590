// units.hpp — frequency/time conventions shared across the library.
//
// Internal units: angular frequency in rad/us, time in us. External
// interfaces (configs, CSV) use ordinary frequency nu = omega/2pi in MHz
// (or GHz for carriers) and time in ns; 1 MHz <-> 2pi rad/us.

#pragma once

namespace revivals {

inline constexpr double two_pi = 6.283185307179586476925286766559;

constexpr double omega_from_mhz(double f_mhz) { return two_pi * f_mhz; }
constexpr double mhz_from_omega(double omega) { return omega / two_pi; }
constexpr double omega_from_ghz(double f_ghz) { return two_pi * 1.0e3 * f_ghz; }
constexpr double ghz_from_omega(double omega) { return omega / (two_pi * 1.0e3); }

constexpr double us_from_ns(double t_ns) { return 1.0e-3 * t_ns; }
constexpr double ns_from_us(double t_us) { return 1.0e3 * t_us; }

} // namespace revivals

#pragma once

#include <complex>
#include <numbers>

namespace tunnel {

using cplx = std::complex<double>;

// Internal units: nanometres, femtoseconds, rad/fs.
inline constexpr double kSpeedOfLight = 299.792458;  // nm/fs
inline constexpr double kPi = std::numbers::pi;

enum class Polarization { S, P };

inline constexpr double angular_frequency(double vacuum_wavelength_nm) {
  return 2.0 * kPi * kSpeedOfLight / vacuum_wavelength_nm;
}

inline constexpr double vacuum_wavelength(double omega_rad_per_fs) {
  return 2.0 * kPi * kSpeedOfLight / omega_rad_per_fs;
}

inline constexpr double degrees(double radians) { return radians * 180.0 / kPi; }
inline constexpr double radians(double degrees) { return degrees * kPi / 180.0; }

const char* to_string(Polarization pol);

}  // namespace tunnel

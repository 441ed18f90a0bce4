#ifndef COEXIST_UNITS_HPP
#define COEXIST_UNITS_HPP

#include <cmath>
#include <numbers>

namespace coexist {

// CODATA 2018 exact values.
inline constexpr double kPlanck = 6.62607015e-34;     // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

/// dB/km -> 1/m (power attenuation, natural log base).
inline double db_per_km_to_per_m(double db_per_km) {
    return std::log(10.0) / 10.0 * db_per_km / 1000.0;
}
inline double ps2_per_km_to_s2_per_m(double ps2_per_km) { return ps2_per_km * 1e-24 / 1000.0; }
inline double per_w_km_to_per_w_m(double per_w_km) { return per_w_km / 1000.0; }

}  // namespace coexist

#endif  // COEXIST_UNITS_HPP

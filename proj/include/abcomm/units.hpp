#pragma once

#include <cmath>
#include <numbers>

namespace abcomm::units {

inline constexpr double speed_of_light = 299792458.0;  // m/s

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

inline double dbm_to_watt(double dbm) { return 1e-3 * db_to_linear(dbm); }
inline double watt_to_dbm(double w) { return linear_to_db(w / 1e-3); }

inline double wavelength_from_ghz(double ghz) { return speed_of_light / (ghz * 1e9); }

}  // namespace abcomm::units

#include "abcomm/analytics/link_budget.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "abcomm/error.hpp"
#include "abcomm/units.hpp"

namespace abcomm::analytics {

using std::numbers::pi;

LinkBudget LinkBudget::reference(double path_loss) {
  LinkBudget b;
  b.pu_power = 0.2;
  b.pu_gain = units::db_to_linear(6.0);
  b.st_gain = units::db_to_linear(1.8);
  b.sr_gain = units::db_to_linear(1.8);
  b.wavelength = units::wavelength_from_ghz(1.8);
  b.efficiency = 0.6;
  b.path_loss = path_loss;
  b.reference_distance = 1.0;
  b.link_distance = 3.0;
  b.noise_power = units::dbm_to_watt(-130.0) * 1.0;
  b.activation = units::dbm_to_watt(-36.0);
  b.snr_threshold = units::db_to_linear(3.0);
  b.max_reflected = 0.2;
  return b;
}

void LinkBudget::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive and finite");
  };
  positive(pu_power, "pu_power");
  positive(pu_gain, "pu_gain");
  positive(st_gain, "st_gain");
  positive(sr_gain, "sr_gain");
  positive(wavelength, "wavelength");
  positive(efficiency, "efficiency");
  if (efficiency > 1.0) throw DomainError("efficiency must lie in (0, 1]");
  if (!(path_loss > 2.0)) throw DomainError("path_loss must exceed 2 (shot noise diverges otherwise)");
  positive(reference_distance, "reference_distance");
  positive(link_distance, "link_distance");
  positive(noise_power, "noise_power");
  if (!(activation >= 0.0)) throw DomainError("activation must be >= 0");
  if (!(snr_threshold >= 0.0)) throw DomainError("snr_threshold must be >= 0");
  positive(max_reflected, "max_reflected");
}

DerivedConstants derive(const LinkBudget& b) {
  const double l2 = b.wavelength * b.wavelength;
  DerivedConstants d{};
  d.cross_section = l2 * b.st_gain * b.st_gain / (4.0 * pi);
  d.aperture_sr = l2 * b.sr_gain / (4.0 * pi);
  d.p_low = 8.0 * pi * b.activation / (b.efficiency * l2 * b.st_gain);
  d.p_up = b.max_reflected / d.cross_section;
  d.c0 = d.cross_section * d.aperture_sr * std::pow(b.reference_distance / b.link_distance, b.path_loss) /
         b.noise_power;
  d.harvest_factor = 0.5 * b.efficiency * l2 * b.st_gain / (4.0 * pi);
  d.unit_pu_power = effective_power(b, 1.0);
  return d;
}

double effective_power(const LinkBudget& b, double busy_probability) {
  return busy_probability * b.pu_power * b.pu_gain / (4.0 * pi * std::pow(b.reference_distance, 2.0 - b.path_loss));
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(pi * x) / (pi * x);
}

double a_mu(double path_loss, double density, double effective_power) {
  if (!(path_loss > 2.0)) throw DomainError("a_mu: path loss exponent must exceed 2");
  if (density < 0.0 || effective_power < 0.0) throw DomainError("a_mu: density and power must be >= 0");
  return std::pow(pi * density / sinc(2.0 / path_loss), path_loss / 2.0) * effective_power;
}

}  // namespace abcomm::analytics

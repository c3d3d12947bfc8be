#include "ultrastrong/constants.hpp"

#include <stdexcept>
#include <string>

namespace ultrastrong {

namespace {
constexpr double kTwoPiC = 2.0 * std::numbers::pi * codata2018::speed_of_light;

void require_positive(double value, const char* what) {
  if (!(value > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive, got " +
                                std::to_string(value));
  }
}
}  // namespace

double wavelength_to_omega(double lambda_m) {
  require_positive(lambda_m, "wavelength");
  return kTwoPiC / lambda_m;
}

double omega_to_wavelength(double omega) {
  require_positive(omega, "angular frequency");
  return kTwoPiC / omega;
}

double joule_to_ev(double energy_j) { return energy_j / codata2018::elementary_charge; }

double ev_to_joule(double energy_ev) { return energy_ev * codata2018::elementary_charge; }

double mass_amu_to_kg(double mass_amu) { return mass_amu * codata2018::atomic_mass_unit; }

}  // namespace ultrastrong

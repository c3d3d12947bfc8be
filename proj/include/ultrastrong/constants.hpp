#pragma once

#include <numbers>

namespace ultrastrong {

/// CODATA 2018 base values (SI). Everything else is derived from these so the
/// defining identities hold to rounding.
namespace codata2018 {
inline constexpr double speed_of_light = 299792458.0;           // m/s, exact
inline constexpr double planck = 6.62607015e-34;                // J s, exact
inline constexpr double elementary_charge = 1.602176634e-19;    // C, exact
inline constexpr double electron_mass = 9.1093837015e-31;       // kg
inline constexpr double fine_structure = 7.2973525693e-3;       // dimensionless
inline constexpr double atomic_mass_unit = 1.66053906660e-27;   // kg
inline constexpr double rydberg_wavenumber = 10973731.568160;   // 1/m, R_inf
}  // namespace codata2018

struct PhysicalConstants {
  double c;         // m/s
  double hbar;      // J s
  double eps0;      // F/m
  double e_charge;  // C
  double m_e;       // kg
  double alpha;     // dimensionless
  double a0;        // m
  double rydberg;   // J
  double hartree;   // J
};

constexpr PhysicalConstants derived_constants() {
  namespace cd = codata2018;
  constexpr double pi = std::numbers::pi;
  PhysicalConstants k{};
  k.c = cd::speed_of_light;
  k.hbar = cd::planck / (2.0 * pi);
  k.e_charge = cd::elementary_charge;
  k.m_e = cd::electron_mass;
  k.alpha = cd::fine_structure;
  // alpha = e^2 / (4 pi eps0 hbar c)
  k.eps0 = k.e_charge * k.e_charge / (4.0 * pi * k.hbar * k.c * k.alpha);
  k.a0 = k.hbar / (k.m_e * k.c * k.alpha);
  k.hartree = k.e_charge * k.e_charge / (4.0 * pi * k.eps0 * k.a0);
  k.rydberg = 0.5 * k.hartree;
  return k;
}

inline constexpr PhysicalConstants kConstants = derived_constants();

/// Wavenumber of the hydrogen-like transition with hbar*omega_A = (3/8) m_e c^2 alpha^2,
/// i.e. k_A = 3 alpha / (8 a0).
constexpr double hydrogen_wavenumber(const PhysicalConstants& k = kConstants) {
  return 3.0 * k.alpha / (8.0 * k.a0);
}

/// omega = 2 pi c / lambda. Throws std::invalid_argument for lambda <= 0.
double wavelength_to_omega(double lambda_m);
/// lambda = 2 pi c / omega. Throws std::invalid_argument for omega <= 0.
double omega_to_wavelength(double omega);

double joule_to_ev(double energy_j);
double ev_to_joule(double energy_ev);
double mass_amu_to_kg(double mass_amu);

}  // namespace ultrastrong

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ultrastrong/constants.hpp"

using namespace ultrastrong;
using doctest::Approx;

TEST_CASE("derived constants satisfy their defining identities") {
  const auto& k = kConstants;
  CHECK(k.a0 * k.m_e * k.c * k.alpha / k.hbar == Approx(1.0).epsilon(1e-15));
  CHECK(k.hartree == Approx(k.e_charge * k.e_charge / (4.0 * std::numbers::pi * k.eps0 * k.a0)).epsilon(1e-9));
  CHECK(k.rydberg == Approx(0.5 * k.hartree).epsilon(1e-15));
  CHECK(k.hartree == Approx(k.m_e * k.c * k.c * k.alpha * k.alpha).epsilon(1e-12));
}

TEST_CASE("derived constants match tabulated CODATA 2018 values") {
  CHECK(kConstants.a0 == Approx(5.29177210903e-11).epsilon(1e-9));
  CHECK(kConstants.eps0 == Approx(8.8541878128e-12).epsilon(1e-9));
  CHECK(joule_to_ev(kConstants.rydberg) == Approx(13.605693122994).epsilon(1e-9));
  CHECK(joule_to_ev(kConstants.hartree) == Approx(27.211386245988).epsilon(1e-9));
}

TEST_CASE("hydrogen 1s-2p wavenumber") {
  const double kA = hydrogen_wavenumber();
  CHECK(kA == Approx(5.17e7).epsilon(2e-3));
  // Independent route: Lyman-alpha from the Rydberg formula, 1/lambda = R (1 - 1/4).
  const double lambda_rydberg = 4.0 / (3.0 * codata2018::rydberg_wavenumber);
  CHECK(lambda_rydberg == Approx(121.5023e-9).epsilon(1e-6));
  CHECK(2.0 * std::numbers::pi / kA == Approx(lambda_rydberg).epsilon(1e-9));
}

TEST_CASE("hydrogen wavenumber scales linearly with alpha at fixed a0") {
  PhysicalConstants k = kConstants;
  k.alpha *= 2.0;
  CHECK(hydrogen_wavenumber(k) * k.a0 == Approx(2.0 * hydrogen_wavenumber() * kConstants.a0).epsilon(1e-15));
}

TEST_CASE("wavelength and angular frequency conversions") {
  CHECK(wavelength_to_omega(780.24e-9) == Approx(2.414195078e15).epsilon(1e-7));
  CHECK(wavelength_to_omega(121.5e-9) == Approx(1.550e16).epsilon(1e-3));
  for (double lambda : {1e-9, 121.5e-9, 780.24e-9, 1e-3}) {
    CHECK(omega_to_wavelength(wavelength_to_omega(lambda)) == Approx(lambda).epsilon(1e-15));
  }
  CHECK_THROWS_AS(wavelength_to_omega(0.0), std::invalid_argument);
  CHECK_THROWS_AS(wavelength_to_omega(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(omega_to_wavelength(0.0), std::invalid_argument);
}

TEST_CASE("energy and mass unit conversions") {
  CHECK(ev_to_joule(joule_to_ev(3.7e-19)) == Approx(3.7e-19).epsilon(1e-15));
  CHECK(ev_to_joule(1.0) == Approx(1.602176634e-19).epsilon(1e-15));
  CHECK(mass_amu_to_kg(1.0) == Approx(1.66053906660e-27).epsilon(1e-10));
}

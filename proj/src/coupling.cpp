#include "ultrastrong/coupling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ultrastrong/constants.hpp"

namespace ultrastrong {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}
void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be non-negative and finite");
  }
}
}  // namespace

std::string_view to_string(FomMethod method) {
  switch (method) {
    case FomMethod::kCoupling: return "coupling";
    case FomMethod::kDensityQ: return "density_q";
    case FomMethod::kHydrogenlike: return "hydrogenlike";
  }
  return "unknown";
}

double coupling_g(const ModeSpec& mode, double dipole) {
  require_positive(mode.omega, "mode frequency");
  require_positive(mode.volume, "mode volume");
  require_non_negative(dipole, "dipole moment");
  const auto& c = kConstants;
  return std::sqrt(mode.omega * dipole * dipole / (2.0 * c.hbar * c.eps0 * mode.volume));
}

FigureOfMeritReport figure_of_merit(double N, double g, double omega, double omega_A) {
  if (!(N >= 1.0)) throw std::invalid_argument("figure_of_merit: N must be >= 1");
  require_non_negative(g, "coupling g");
  require_positive(omega, "mode frequency");
  require_positive(omega_A, "atomic frequency");
  FigureOfMeritReport r{N * g * g / (omega * omega_A), FomMethod::kCoupling};
  r.N = N;
  r.g = g;
  r.omega = omega;
  r.omega_A = omega_A;
  return r;
}

FigureOfMeritReport fom_density_Q(double density, double lambda_A, double Q) {
  require_non_negative(density, "density");
  require_positive(lambda_A, "transition wavelength");
  require_positive(Q, "quality factor");
  const double F = density * lambda_A * lambda_A * lambda_A * 3.0 / (8.0 * kPi * kPi) / Q;
  FigureOfMeritReport r{F, FomMethod::kDensityQ};
  r.density = density;
  r.lambda_A = lambda_A;
  r.Q = Q;
  return r;
}

FigureOfMeritReport fom_hydrogenlike(double density) {
  require_non_negative(density, "density");
  const double a0 = kConstants.a0;
  FigureOfMeritReport r{density * 16.0 * kPi * a0 * a0 * a0, FomMethod::kHydrogenlike};
  r.density = density;
  return r;
}

double hydrogenlike_dipole() { return std::sqrt(3.0) * kConstants.e_charge * kConstants.a0; }

double hydrogenlike_omega() {
  const auto& c = kConstants;
  return 3.0 / 8.0 * c.m_e * c.c * c.c * c.alpha * c.alpha / c.hbar;
}

double critical_density(double lambda_A, double Q) {
  require_positive(lambda_A, "transition wavelength");
  require_positive(Q, "quality factor");
  return 8.0 * kPi * kPi * Q / (3.0 * lambda_A * lambda_A * lambda_A);
}

double dipole_from_linewidth(double omega_A, double gamma_hwhm) {
  require_positive(omega_A, "atomic frequency");
  require_non_negative(gamma_hwhm, "linewidth");
  const auto& c = kConstants;
  return std::sqrt(6.0 * kPi * c.eps0 * c.hbar * c.c * c.c * c.c * gamma_hwhm /
                   (omega_A * omega_A * omega_A));
}

double linewidth_from_dipole(double omega_A, double dipole) {
  require_positive(omega_A, "atomic frequency");
  require_non_negative(dipole, "dipole moment");
  const auto& c = kConstants;
  return omega_A * omega_A * omega_A * dipole * dipole /
         (6.0 * kPi * c.eps0 * c.hbar * c.c * c.c * c.c);
}

double quality_factor(double omega_A, double gamma_hwhm) {
  require_positive(omega_A, "atomic frequency");
  require_positive(gamma_hwhm, "linewidth");
  return omega_A / gamma_hwhm;
}

}  // namespace ultrastrong

#pragma once

#include <string_view>

namespace ultrastrong {

struct ModeSpec {
  double omega;   // rad/s
  double volume;  // m^3
};

/// Which closed form produced a figure of merit.
enum class FomMethod {
  kCoupling,     // N g^2 / (omega omega_A)
  kDensityQ,     // (N/V) lambda_A^3 (3 / 8 pi^2) / Q
  kHydrogenlike  // (N/V) 16 pi a0^3
};

std::string_view to_string(FomMethod method);

struct FigureOfMeritReport {
  double F;
  FomMethod method;
  // Inputs, echoed. Fields not used by the method are zero.
  double N = 0.0;
  double g = 0.0;
  double omega = 0.0;
  double omega_A = 0.0;
  double density = 0.0;
  double lambda_A = 0.0;
  double Q = 0.0;
};

/// Single-atom coupling g = sqrt(omega d^2 / (2 hbar eps0 V)) (rad/s).
double coupling_g(const ModeSpec& mode, double dipole);

/// F = N g^2 / (omega omega_A). F = 1 is the Dicke critical point.
FigureOfMeritReport figure_of_merit(double N, double g, double omega, double omega_A);

FigureOfMeritReport fom_density_Q(double density, double lambda_A, double Q);

/// Density form for a hydrogen-like two-level transition. The 16 pi a0^3
/// coefficient corresponds to hbar omega_A = (3/8) m_e c^2 alpha^2 together
/// with d^2 = 3 e^2 a0^2 (see hydrogenlike_dipole()).
FigureOfMeritReport fom_hydrogenlike(double density);

/// The transition dipole implied by the hydrogen-like density form, sqrt(3) e a0.
double hydrogenlike_dipole();
/// hbar omega_A = (3/8) m_e c^2 alpha^2, returned as omega_A.
double hydrogenlike_omega();

/// Density at which the density form reaches F = 1: 8 pi^2 Q / (3 lambda_A^3).
double critical_density(double lambda_A, double Q);

/// d = sqrt(6 pi eps0 hbar c^3 gamma / omega_A^3), gamma the HWHM linewidth.
double dipole_from_linewidth(double omega_A, double gamma_hwhm);
/// Inverse of dipole_from_linewidth: gamma_hwhm = omega_A^3 d^2 / (6 pi eps0 hbar c^3).
double linewidth_from_dipole(double omega_A, double dipole);

double quality_factor(double omega_A, double gamma_hwhm);

}  // namespace ultrastrong

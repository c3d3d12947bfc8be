#pragma once

#include "ultrastrong/polarization.hpp"

namespace ultrastrong {

/// Default operating points for the "much greater / much smaller" conditions
/// bounding k_M: 1 - L(k_radiation) and (k_M a0)^3.
inline constexpr double kDefaultLowerThreshold = 0.01;
inline constexpr double kDefaultUpperThreshold = 0.15;

struct CutoffWindow {
  double k_radiation;      // 1/m
  double k_M;              // 1/m
  double lower_violation;  // 1 - L(k_radiation) = k_rad^2 / (k_rad^2 + k_M^2)
  double upper_ratio;      // (k_M a0)^3
  double lower_threshold;
  double upper_threshold;
  bool admissible;
};

struct PerturbationReport {
  double delta_U;                 // J, self-energy of the transverse polarization for d = e a0
  double first_order_shift;       // J, <1s| dU |1s>
  double ratio_to_rydberg;
  double numeric_shift;           // J, radial quadrature
  double numeric_error_estimate;  // J
};

/// k_M^3 d^2 / (24 pi eps0) for dipole magnitude d (C m). Throws for d < 0.
double delta_U(double dipole_magnitude, Cutoff cutoff);

/// (1/2 eps0) int d^3k |P_perp(k)|^2 evaluated by quadrature in k-space
/// (polar angle and radius both numerical). Independent of delta_U().
struct NumericEnergy {
  double value;
  double error_estimate;
};
NumericEnergy delta_U_numeric(double dipole_magnitude, Cutoff cutoff, double tol);

/// e^2 k_M^3 a0^2 / (8 pi eps0): expectation of (e^2 k_M^3 / 24 pi eps0) r^2 in 1s.
double hydrogen_first_order_shift(Cutoff cutoff);

/// Same expectation value by radial quadrature over the 1s density.
NumericEnergy hydrogen_shift_numeric(Cutoff cutoff, double tol);

/// (k_M a0)^3, the shift in units of the Rydberg energy.
double energy_ratio(Cutoff cutoff);

CutoffWindow cutoff_window(double k_radiation, Cutoff cutoff,
                           double lower_threshold = kDefaultLowerThreshold,
                           double upper_threshold = kDefaultUpperThreshold);

PerturbationReport perturbation_report(Cutoff cutoff, double tol = 1e-10);

/// Radius of the region around an atom where the independent-atom picture
/// fails; convention r = 1/k_M.
double intimacy_radius(Cutoff cutoff);

}  // namespace ultrastrong

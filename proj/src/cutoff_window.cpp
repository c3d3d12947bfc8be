#include "ultrastrong/cutoff_window.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ultrastrong/constants.hpp"
#include "ultrastrong/quadrature.hpp"

namespace ultrastrong {

namespace {
constexpr double kPi = std::numbers::pi;
}

double delta_U(double dipole_magnitude, Cutoff cutoff) {
  if (!(dipole_magnitude >= 0.0)) throw std::invalid_argument("delta_U: dipole magnitude must be >= 0");
  const double k = cutoff.k_M();
  return k * k * k * dipole_magnitude * dipole_magnitude / (24.0 * kPi * kConstants.eps0);
}

NumericEnergy delta_U_numeric(double dipole_magnitude, Cutoff cutoff, double tol) {
  if (!(dipole_magnitude >= 0.0)) throw std::invalid_argument("delta_U_numeric: dipole magnitude must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("delta_U_numeric: tol must be positive");
  QuadOptions opt;
  opt.rel_tol = 0.1 * tol;

  // |(id - k k) d|^2 = d^2 sin^2(theta) with theta measured from d; azimuth gives 2 pi.
  auto angular = integrate_or_throw(
      [](double theta) { return 2.0 * kPi * std::pow(std::sin(theta), 3); }, 0.0, kPi, opt,
      "delta_U_numeric angular");
  // Radial integral in q = k / k_M: int q^2 / (1 + q^2)^2 dq.
  auto radial = integrate_or_throw(
      [](double q) {
        const double w = 1.0 / (1.0 + q * q);
        return q * q * w * w;
      },
      0.0, 1.0, opt, "delta_U_numeric radial");
  QuadOptions tail_opt = opt;
  auto radial_tail = integrate_to_infinity(
      [](double q) {
        const double w = 1.0 / (1.0 + q * q);
        return q * q * w * w;
      },
      1.0, tail_opt);
  if (!radial_tail.converged) throw ConvergenceError("delta_U_numeric radial tail", radial_tail.error);

  const double k = cutoff.k_M();
  const double radial_value = radial.value + radial_tail.value;
  const double pref = dipole_magnitude * dipole_magnitude * k * k * k /
                      (2.0 * kConstants.eps0 * std::pow(2.0 * kPi, 3));
  NumericEnergy out;
  out.value = pref * angular.value * radial_value;
  out.error_estimate = pref * (angular.error * radial_value +
                               angular.value * (radial.error + radial_tail.error));
  return out;
}

double hydrogen_first_order_shift(Cutoff cutoff) {
  const auto& c = kConstants;
  const double k = cutoff.k_M();
  return c.e_charge * c.e_charge * k * k * k * c.a0 * c.a0 / (8.0 * kPi * c.eps0);
}

NumericEnergy hydrogen_shift_numeric(Cutoff cutoff, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("hydrogen_shift_numeric: tol must be positive");
  const auto& c = kConstants;
  // With t = r / a0: int d^3r r^2 e^{-2r/a0} = 4 pi a0^5 int t^4 e^{-2t} dt.
  auto density = [](double t) { return t * t * t * t * std::exp(-2.0 * t); };
  QuadOptions opt;
  opt.rel_tol = 0.1 * tol;
  auto r = integrate_to_infinity(density, 0.0, opt);
  if (!r.converged) throw ConvergenceError("hydrogen_shift_numeric", r.error);
  const double k = cutoff.k_M();
  const double pref = c.e_charge * c.e_charge * k * k * k /
                      (24.0 * kPi * kPi * c.eps0 * c.a0 * c.a0 * c.a0) * 4.0 * kPi *
                      std::pow(c.a0, 5);
  return {pref * r.value, pref * r.error};
}

double energy_ratio(Cutoff cutoff) {
  const double x = cutoff.k_M() * kConstants.a0;
  return x * x * x;
}

CutoffWindow cutoff_window(double k_radiation, Cutoff cutoff, double lower_threshold,
                           double upper_threshold) {
  if (!(k_radiation > 0.0)) throw std::invalid_argument("cutoff_window: k_radiation must be positive");
  if (!(lower_threshold > 0.0) || !(upper_threshold > 0.0)) {
    throw std::invalid_argument("cutoff_window: thresholds must be positive");
  }
  CutoffWindow w;
  w.k_radiation = k_radiation;
  w.k_M = cutoff.k_M();
  const double kr2 = k_radiation * k_radiation;
  w.lower_violation = kr2 / (kr2 + w.k_M * w.k_M);
  w.upper_ratio = energy_ratio(cutoff);
  w.lower_threshold = lower_threshold;
  w.upper_threshold = upper_threshold;
  w.admissible = w.lower_violation <= lower_threshold && w.upper_ratio <= upper_threshold;
  return w;
}

PerturbationReport perturbation_report(Cutoff cutoff, double tol) {
  PerturbationReport p;
  p.delta_U = delta_U(kConstants.e_charge * kConstants.a0, cutoff);
  p.first_order_shift = hydrogen_first_order_shift(cutoff);
  p.ratio_to_rydberg = p.first_order_shift / kConstants.rydberg;
  const auto numeric = hydrogen_shift_numeric(cutoff, tol);
  p.numeric_shift = numeric.value;
  p.numeric_error_estimate = numeric.error_estimate;
  return p;
}

double intimacy_radius(Cutoff cutoff) { return 1.0 / cutoff.k_M(); }

}  // namespace ultrastrong

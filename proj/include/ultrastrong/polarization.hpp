#pragma once

#include <Eigen/Core>

namespace ultrastrong {

using Vec3 = Eigen::Vector3d;
using Tensor3 = Eigen::Matrix3d;

/// Cutoff wavenumber k_M (1/m) of the Lorentzian low-pass filter
/// L(k) = k_M^2 / (k^2 + k_M^2). Always strictly positive.
class Cutoff {
 public:
  explicit Cutoff(double k_M);
  double k_M() const noexcept { return k_M_; }
  double length() const noexcept { return 1.0 / k_M_; }

 private:
  double k_M_;
};

/// eta(r) = 1 - (1 + u + u^2/2) e^{-u}, u = k_M r. Throws for r < 0.
double eta(Cutoff cutoff, double r);

/// (1 + u + u^2/2) e^{-u}: the part of the bare dipole field left over by the
/// filtered transverse kernel, i.e. 1 - eta.
double residual_envelope(double u);

/// Lorentzian suppression L(k) = k_M^2/(k^2 + k_M^2) applied to the
/// long-wavelength vector potential. Throws for k < 0.
double suppression_factor(Cutoff cutoff, double k);

/// k-space filtered transverse delta, (2 pi)^{-3/2} (id - k k / k^2) L(k).
/// Throws std::invalid_argument for k = 0.
Tensor3 transverse_delta_k(Cutoff cutoff, const Vec3& k);

/// Exact real-space filtered transverse delta, obtained from the partial
/// fractions L/k^2 = 1/k^2 - 1/(k^2 + k_M^2):
///
///   (1/4 pi r^3) [ (3 n n - id) eta(r) + (u^2 e^{-u}/2)(id + n n) ].
///
/// The first term is the far-zone dipole form; the second decays as e^{-u}
/// and carries the whole trace, 2 k_M^2 e^{-u}/(4 pi r). Throws for r = 0.
Tensor3 transverse_delta_real(Cutoff cutoff, const Vec3& x);

/// Far-zone form (3 n n - id) eta(r) / (4 pi r^3) only.
Tensor3 transverse_delta_far(Cutoff cutoff, const Vec3& x);

/// Bare static dipole kernel (3 n n - id) / (4 pi r^3), the field of a unit
/// point dipole divided by 1/eps0; delta-supported core excluded.
Tensor3 dipole_kernel(const Vec3& x);

/// Kernel mapping d to P_parallel + P_perp at offset x (core excluded).
Tensor3 residual_kernel(Cutoff cutoff, const Vec3& x);

struct NumericTensor {
  Tensor3 value;
  double error_estimate;  // absolute, Frobenius scale
};

/// Independent evaluation of transverse_delta_real by spherical-Bessel radial
/// quadrature of the k-space kernel:
///
///   (1 / 2 pi^2) [ (2/3) I0 id + I2 (n n - id/3) ],  I_l = int k^2 L(k) j_l(k r) dk.
///
/// The conditionally convergent tails are summed segment by segment between
/// zeros of sin(k r) and extrapolated with the Wynn epsilon algorithm.
/// `tol` is relative to the Frobenius norm of the result; throws
/// ConvergenceError when it cannot be met.
NumericTensor numeric_inverse_transform(Cutoff cutoff, const Vec3& x, double tol);

/// P_perp(x) for an atom with dipole d at x_A (C/m^2).
Vec3 transverse_polarization(const Vec3& d, const Vec3& x_A, Cutoff cutoff, const Vec3& x);

/// Dipole-order longitudinal polarization -eps0 E_parallel,
/// -(1/4 pi r^3) [3 (n.d) n - d], away from the atom.
Vec3 longitudinal_dipole_polarization(const Vec3& d, const Vec3& x_A, const Vec3& x);

/// P_parallel + P_perp; exponentially small outside r ~ 1/k_M.
Vec3 total_residual_polarization(const Vec3& d, const Vec3& x_A, Cutoff cutoff, const Vec3& x);

}  // namespace ultrastrong

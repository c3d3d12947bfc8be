#include "ultrastrong/polarization.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ultrastrong/quadrature.hpp"

namespace ultrastrong {

namespace {

constexpr double kPi = std::numbers::pi;

double checked_radius(const Vec3& x, const char* what) {
  const double r = x.norm();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument(std::string(what) + ": field point coincides with the atom");
  }
  return r;
}

// Regularized lower incomplete gamma P(3, u) as a positive series; avoids the
// cancellation in 1 - (1 + u + u^2/2) e^{-u} for small u.
double eta_series(double u) {
  double term = 1.0 / 6.0;  // 1/3!
  double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= u / (k + 3);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return u * u * u * std::exp(-u) * sum;
}

double eta_of_u(double u) {
  if (u < 1.0) return eta_series(u);
  return 1.0 - residual_envelope(u);
}

}  // namespace

Cutoff::Cutoff(double k_M) : k_M_(k_M) {
  if (!(k_M > 0.0) || !std::isfinite(k_M)) {
    throw std::invalid_argument("cutoff wavenumber must be positive and finite, got " +
                                std::to_string(k_M));
  }
}

double residual_envelope(double u) { return (1.0 + u + 0.5 * u * u) * std::exp(-u); }

double eta(Cutoff cutoff, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("eta: radius must be non-negative");
  return eta_of_u(cutoff.k_M() * r);
}

double suppression_factor(Cutoff cutoff, double k) {
  if (!(k >= 0.0)) throw std::invalid_argument("suppression_factor: wavenumber must be non-negative");
  const double q = k / cutoff.k_M();
  return 1.0 / (1.0 + q * q);
}

Tensor3 transverse_delta_k(Cutoff cutoff, const Vec3& k) {
  const double k2 = k.squaredNorm();
  if (!(k2 > 0.0)) {
    throw std::invalid_argument("transverse_delta_k: projector undefined at k = 0");
  }
  const double km2 = cutoff.k_M() * cutoff.k_M();
  const double prefactor = std::pow(2.0 * kPi, -1.5) * km2 / (k2 + km2);
  return prefactor * (Tensor3::Identity() - k * k.transpose() / k2);
}

Tensor3 dipole_kernel(const Vec3& x) {
  const double r = checked_radius(x, "dipole_kernel");
  const Vec3 n = x / r;
  return (3.0 * n * n.transpose() - Tensor3::Identity()) / (4.0 * kPi * r * r * r);
}

Tensor3 transverse_delta_far(Cutoff cutoff, const Vec3& x) {
  const double r = checked_radius(x, "transverse_delta_far");
  return eta_of_u(cutoff.k_M() * r) * dipole_kernel(x);
}

Tensor3 transverse_delta_real(Cutoff cutoff, const Vec3& x) {
  const double r = checked_radius(x, "transverse_delta_real");
  const double u = cutoff.k_M() * r;
  const Vec3 n = x / r;
  const Tensor3 nn = n * n.transpose();
  const Tensor3 id = Tensor3::Identity();
  const double correction = 0.5 * u * u * std::exp(-u);
  return ((3.0 * nn - id) * eta_of_u(u) + correction * (id + nn)) / (4.0 * kPi * r * r * r);
}

Tensor3 residual_kernel(Cutoff cutoff, const Vec3& x) {
  const double r = checked_radius(x, "residual_kernel");
  const double u = cutoff.k_M() * r;
  const Vec3 n = x / r;
  const Tensor3 nn = n * n.transpose();
  const Tensor3 id = Tensor3::Identity();
  const double correction = 0.5 * u * u * std::exp(-u);
  return (-residual_envelope(u) * (3.0 * nn - id) + correction * (id + nn)) /
         (4.0 * kPi * r * r * r);
}

NumericTensor numeric_inverse_transform(Cutoff cutoff, const Vec3& x, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("numeric_inverse_transform: tol must be positive");
  const double r = checked_radius(x, "numeric_inverse_transform");
  const double rho = cutoff.k_M() * r;
  const double rho2 = rho * rho;

  // J_l(rho) = int_0^inf x^2/(x^2 + rho^2) j_l(x) dx, so that I_l = k_M^3 J_l / rho.
  struct Radial {
    double value;
    double error;
  };
  auto radial = [&](unsigned l) -> Radial {
    auto integrand = [&](double s) {
      const double s2 = s * s;
      return s2 / (s2 + rho2) * std::sph_bessel(l, s);
    };
    QuadOptions seg_opt;
    seg_opt.rel_tol = 1e-13;
    seg_opt.abs_tol = 1e-16;
    WynnEpsilon wynn;
    double partial = 0.0;
    double quad_error = 0.0;
    // Past the Lorentzian knee the segments alternate cleanly.
    const int min_segments = static_cast<int>(rho / kPi) + 12;
    constexpr int kMaxSegments = 4000;
    for (int m = 0; m < kMaxSegments; ++m) {
      auto seg = integrate_or_throw(integrand, m * kPi, (m + 1) * kPi, seg_opt,
                                    "numeric_inverse_transform segment");
      partial += seg.value;
      quad_error += seg.error;
      wynn.push(partial);
      if (m + 1 >= min_segments && wynn.count() > 4) {
        const double scale = std::abs(wynn.limit());
        if (wynn.error() <= 0.01 * tol * scale) {
          return {wynn.limit(), wynn.error() + quad_error};
        }
      }
    }
    throw ConvergenceError("numeric_inverse_transform: tail extrapolation stalled",
                           wynn.error() + quad_error);
  };

  const Radial j0 = radial(0);
  const Radial j2 = radial(2);
  const double km3 = cutoff.k_M() * cutoff.k_M() * cutoff.k_M();
  const double pref = km3 / rho / (2.0 * kPi * kPi);
  const Vec3 n = x / r;
  const Tensor3 id = Tensor3::Identity();
  const Tensor3 traceless = n * n.transpose() - id / 3.0;

  NumericTensor out;
  out.value = pref * ((2.0 / 3.0) * j0.value * id + j2.value * traceless);
  out.error_estimate =
      pref * ((2.0 / 3.0) * std::sqrt(3.0) * j0.error + std::sqrt(2.0 / 3.0) * j2.error);
  if (out.error_estimate > tol * out.value.norm()) {
    throw ConvergenceError("numeric_inverse_transform: tolerance not met", out.error_estimate);
  }
  return out;
}

Vec3 transverse_polarization(const Vec3& d, const Vec3& x_A, Cutoff cutoff, const Vec3& x) {
  return transverse_delta_real(cutoff, x - x_A) * d;
}

Vec3 longitudinal_dipole_polarization(const Vec3& d, const Vec3& x_A, const Vec3& x) {
  return -dipole_kernel(x - x_A) * d;
}

Vec3 total_residual_polarization(const Vec3& d, const Vec3& x_A, Cutoff cutoff, const Vec3& x) {
  return residual_kernel(cutoff, x - x_A) * d;
}

}  // namespace ultrastrong

#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ultrastrong/coupling.hpp"
#include "ultrastrong/polarization.hpp"
#include "ultrastrong/species.hpp"

namespace ultrastrong {

/// Point atoms with dipoles inside a bounding volume.
class AtomConfiguration {
 public:
  /// Throws std::invalid_argument unless lengths match, positions are
  /// pairwise distinct and the volume is positive.
  AtomConfiguration(std::vector<Vec3> positions, std::vector<Vec3> dipoles, double volume);

  const std::vector<Vec3>& positions() const noexcept { return positions_; }
  const std::vector<Vec3>& dipoles() const noexcept { return dipoles_; }
  double volume() const noexcept { return volume_; }
  std::size_t size() const noexcept { return positions_.size(); }
  double density() const noexcept { return static_cast<double>(size()) / volume_; }

 private:
  std::vector<Vec3> positions_;
  std::vector<Vec3> dipoles_;
  double volume_;
};

/// JSON object {"positions_m": [[x,y,z],...], "dipoles_C_m": [[...],...], "volume_m3": V}.
AtomConfiguration parse_configuration_json(std::string_view text);

/// Simple-cubic block of nx*ny*nz atoms with the given spacing, all dipoles
/// equal to `dipole`; volume = atom count * spacing^3.
AtomConfiguration simple_cubic_configuration(int nx, int ny, int nz, double spacing, const Vec3& dipole);

/// Throws std::invalid_argument for fewer than two atoms.
double min_pairwise_distance(const AtomConfiguration& c);

/// Pair separation below which intimacy regions overlap: 2 / k_M.
double intimacy_pair_threshold(Cutoff cutoff);

/// All pairs (i < j) closer than 2 / k_M, in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> intimacy_violations(const AtomConfiguration& c,
                                                                     Cutoff cutoff);

struct OverlapReport {
  std::size_t first;
  std::size_t second;
  double separation;      // m
  double overlap_energy;  // J, (1/eps0) int P_A . P_B dV
  double error_estimate;  // J
  double bound;           // J
};

/// Cross term of the P-square energy between the residual polarization
/// fields of two atoms, by two-dimensional adaptive quadrature (azimuth done
/// by symmetry). The field of each atom is truncated 12/k_M beyond the pair
/// midplane region. `tol` is relative. Throws ConvergenceError.
OverlapReport residual_overlap_energy(const AtomConfiguration& c, std::size_t first, std::size_t second,
                                      Cutoff cutoff, double tol = 1e-8);

/// Diagonal of the overlap tensor M(R) = int K(x) K(x - R s) dV for unit
/// separation direction s: {M_perp, M_parallel} in 1/m^3, so that
/// E = (1/eps0) [M_perp d_A.d_B + (M_par - M_perp)(d_A.s)(d_B.s)].
struct OverlapTensor {
  double perpendicular;
  double parallel;
  double error_estimate;
};
OverlapTensor overlap_tensor_numeric(Cutoff cutoff, double separation, double tol);

/// |d_A||d_B| k_M^3/(24 pi eps0) * 3 (1 + 2/u + 2/u^2 + 2/u^3) e^{-u}, u = k_M R.
double overlap_energy_bound(double dipole_a, double dipole_b, Cutoff cutoff, double separation);

FigureOfMeritReport config_figure_of_merit(const AtomConfiguration& c, const AtomSpecies& species);

/// Density at which simple-cubic intimacy regions touch: (k_M/2)^3.
double max_packing_density(Cutoff cutoff);

}  // namespace ultrastrong

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultrastrong/eigensolver.hpp"

namespace ultrastrong {

/// Dicke (rwa = false) or Tavis-Cummings (rwa = true) model on the truncated
/// Fock space 0..n_max times the symmetric spin sector S = N/2:
///
///   H = omega a^dag a + omega_A S_z + (g/sqrt(N)) (a + a^dag) S_x          (Dicke)
///   H = omega a^dag a + omega_A S_z + (g/sqrt(N)) (a S^+ + a^dag S^-)      (TC)
///
/// g is the collective coupling, so F = g^2 / (omega omega_A). hbar = 1,
/// energies in rad/s.
struct DickeParams {
  int N = 1;
  double omega = 1.0;
  double omega_A = 1.0;
  double g_collective = 0.0;
  bool rwa = false;
  int n_max = 8;

  /// g = sqrt(F omega omega_A).
  static DickeParams from_figure_of_merit(int N, double F, double omega, double omega_A,
                                          bool rwa = false, int n_max = 8);

  double figure_of_merit() const { return g_collective * g_collective / (omega * omega_A); }
  std::size_t dimension() const {
    return static_cast<std::size_t>(n_max + 1) * static_cast<std::size_t>(N + 1);
  }
  /// Throws std::invalid_argument.
  void validate() const;
};

inline constexpr std::size_t kDefaultMaxDimension = 4'000'000;

class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Basis |n> (x) |S, m> with photon index major: index = n (N + 1) + (m + N/2).
inline Eigen::Index basis_index(const DickeParams& p, int n, int m_plus_half_N) {
  return static_cast<Eigen::Index>(n) * (p.N + 1) + m_plus_half_N;
}

SparseMatrix build_hamiltonian(const DickeParams& p, std::size_t max_dimension = kDefaultMaxDimension);

/// Diagonal parity exp[i pi (a^dag a + S_z + N/2)] = (-1)^(n + m + N/2).
SparseMatrix parity_operator(const DickeParams& p);

/// Diagonal excitation number a^dag a + S_z + N/2.
SparseMatrix excitation_operator(const DickeParams& p);

struct GroundStateReport {
  double energy = 0.0;
  double photon_fraction = 0.0;     // <a^dag a> / N
  double inversion = 0.0;           // <S_z> / N
  double sx2_fraction = 0.0;        // <S_x^2> / N^2
  double parity_expectation = 0.0;
  double field_expectation = 0.0;   // <a + a^dag>
  double top_fock_population = 0.0; // weight on n = n_max
  double norm = 0.0;
  int converged_n_max = 0;
  double gap = 0.0;                 // Ritz gap within the searched sector
  bool near_degenerate = false;     // gap < 1e-8 ||H||_inf
};

/// Lowest eigenpair of H. Dicke instances are searched in the parity sector
/// of the uncoupled ground state |0, -N/2> (even), using the default start
/// vector with odd-parity entries zeroed; Tavis-Cummings instances use the
/// default start vector unchanged.
EigenPair ground_state(const SparseMatrix& H, const DickeParams& p, const EigenOptions& options = {},
                       const Eigen::VectorXd* start = nullptr);

/// Expectation values in `state` (assumed normalized).
GroundStateReport observables(const Eigen::VectorXd& state, const DickeParams& p);

/// Thermodynamic-limit photon fraction from minimizing
/// E/N = omega alpha^2 + (omega_A/2) cos(theta) + g alpha sin(theta):
/// 0 for F <= 1, (F omega_A / 4 omega)(1 - 1/F^2) above.
double meanfield_order_parameter(double F, double omega, double omega_A);

struct FockSchedule {
  int first = 8;
  int cap = 512;
  double photon_fraction_tol = 1e-4;
  double top_population_tol = 1e-8;
};

struct SolvedInstance {
  DickeParams params;  // n_max set to the chosen truncation
  EigenPair eigen;
  GroundStateReport report;
};

/// Solves at n_max = first, 2 first, 4 first, ... and accepts the smallest
/// n_max whose photon fraction differs from the next schedule entry by less
/// than photon_fraction_tol and whose top Fock population is below
/// top_population_tol. Throws DimensionError if the cap is reached first.
SolvedInstance fock_convergence(DickeParams p, const FockSchedule& schedule = {},
                                const EigenOptions& options = {});

/// Single solve at the given n_max (no convergence check).
SolvedInstance solve_fixed(const DickeParams& p, const EigenOptions& options = {});

struct ScanOptions {
  FockSchedule schedule;
  EigenOptions eigen;
  int fixed_n_max = 0;  // > 0 disables the adaptive schedule
  unsigned threads = 1;
};

struct ScanRow {
  double F = 0.0;
  DickeParams params;
  GroundStateReport report;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

/// One row per grid value, in grid order. `tmpl` provides N, omega, omega_A
/// and rwa; g is derived from each F. Rows run concurrently when
/// options.threads > 1; results do not depend on the thread count.
std::vector<ScanRow> scan_coupling(const DickeParams& tmpl, std::span<const double> F_grid,
                                   const ScanOptions& options = {});

/// Parses "start:stop:step" (inclusive stop, within half a step) or a
/// comma-separated list. Throws std::invalid_argument on malformed or
/// negative grids.
std::vector<double> parse_grid(const std::string& spec);

/// Smallest F in [F_lo, F_hi] at which the converged photon fraction exceeds
/// `threshold`, located by bisection to `F_tol`. Relies on the photon
/// fraction being monotone in F. Throws std::domain_error if the bracket does
/// not straddle the threshold.
double photon_fraction_crossing(const DickeParams& tmpl, double threshold, double F_lo, double F_hi,
                                double F_tol = 1e-4, const ScanOptions& options = {});

}  // namespace ultrastrong

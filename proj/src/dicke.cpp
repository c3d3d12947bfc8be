#include "ultrastrong/dicke.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace ultrastrong {

namespace {

void require_finite_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Ladder coefficients in terms of j = m + N/2 in [0, N].
double raise_coefficient(int N, int j) { return std::sqrt(static_cast<double>(N - j) * (j + 1)); }
double lower_coefficient(int N, int j) { return std::sqrt(static_cast<double>(j) * (N - j + 1)); }

Eigen::VectorXd sector_start(const DickeParams& p) {
  Eigen::VectorXd v = default_start_vector(static_cast<Eigen::Index>(p.dimension()));
  if (!p.rwa) {
    for (int n = 0; n <= p.n_max; ++n) {
      for (int j = 0; j <= p.N; ++j) {
        if ((n + j) % 2 != 0) v[basis_index(p, n, j)] = 0.0;
      }
    }
  }
  return v.normalized();
}

// Photon-major ordering makes the low-n blocks of both truncations coincide.
Eigen::VectorXd embed(const Eigen::VectorXd& state, const DickeParams& to) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(to.dimension()));
  out.head(state.size()) = state;
  return out;
}

}  // namespace

DickeParams DickeParams::from_figure_of_merit(int N, double F, double omega, double omega_A, bool rwa,
                                              int n_max) {
  if (!(F >= 0.0) || !std::isfinite(F)) throw std::invalid_argument("figure of merit must be >= 0");
  DickeParams p;
  p.N = N;
  p.omega = omega;
  p.omega_A = omega_A;
  p.g_collective = std::sqrt(F * omega * omega_A);
  p.rwa = rwa;
  p.n_max = n_max;
  p.validate();
  return p;
}

void DickeParams::validate() const {
  if (N < 1) throw std::invalid_argument("DickeParams: N must be >= 1");
  if (n_max < 1) throw std::invalid_argument("DickeParams: n_max must be >= 1");
  require_finite_positive(omega, "DickeParams: omega");
  require_finite_positive(omega_A, "DickeParams: omega_A");
  if (!(g_collective >= 0.0) || !std::isfinite(g_collective)) {
    throw std::invalid_argument("DickeParams: coupling must be finite and >= 0");
  }
}

SparseMatrix build_hamiltonian(const DickeParams& p, std::size_t max_dimension) {
  p.validate();
  const std::size_t dim = p.dimension();
  if (dim > max_dimension) {
    throw DimensionError("Hilbert space dimension " + std::to_string(dim) + " exceeds cap " +
                         std::to_string(max_dimension));
  }
  const double half_N = 0.5 * p.N;
  const double coupling = p.g_collective / std::sqrt(static_cast<double>(p.N));

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(dim * 5);
  for (int n = 0; n <= p.n_max; ++n) {
    const double sqrt_up = std::sqrt(static_cast<double>(n + 1));
    for (int j = 0; j <= p.N; ++j) {
      const Eigen::Index row = basis_index(p, n, j);
      entries.emplace_back(row, row, p.omega * n + p.omega_A * (j - half_N));
      if (n == p.n_max) continue;
      // Transitions n -> n + 1 (a^dag part); the a part is their transpose.
      auto couple = [&](int j_to, double value) {
        if (value == 0.0) return;
        const Eigen::Index col = basis_index(p, n + 1, j_to);
        entries.emplace_back(row, col, value);
        entries.emplace_back(col, row, value);
      };
      if (p.rwa) {
        // a^dag S^-
        if (j > 0) couple(j - 1, coupling * sqrt_up * lower_coefficient(p.N, j));
      } else {
        // a^dag S_x, S_x = (S^+ + S^-)/2
        if (j < p.N) couple(j + 1, 0.5 * coupling * sqrt_up * raise_coefficient(p.N, j));
        if (j > 0) couple(j - 1, 0.5 * coupling * sqrt_up * lower_coefficient(p.N, j));
      }
    }
  }
  SparseMatrix H(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  H.setFromTriplets(entries.begin(), entries.end());
  return H;
}

SparseMatrix parity_operator(const DickeParams& p) {
  const auto dim = static_cast<Eigen::Index>(p.dimension());
  SparseMatrix P(dim, dim);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(dim);
  for (int n = 0; n <= p.n_max; ++n) {
    for (int j = 0; j <= p.N; ++j) {
      const auto i = basis_index(p, n, j);
      entries.emplace_back(i, i, (n + j) % 2 == 0 ? 1.0 : -1.0);
    }
  }
  P.setFromTriplets(entries.begin(), entries.end());
  return P;
}

SparseMatrix excitation_operator(const DickeParams& p) {
  const auto dim = static_cast<Eigen::Index>(p.dimension());
  SparseMatrix X(dim, dim);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(dim);
  for (int n = 0; n <= p.n_max; ++n) {
    for (int j = 0; j <= p.N; ++j) {
      const auto i = basis_index(p, n, j);
      entries.emplace_back(i, i, static_cast<double>(n + j));
    }
  }
  X.setFromTriplets(entries.begin(), entries.end());
  return X;
}

EigenPair ground_state(const SparseMatrix& H, const DickeParams& p, const EigenOptions& options,
                       const Eigen::VectorXd* start) {
  if (H.rows() != static_cast<Eigen::Index>(p.dimension())) {
    throw std::invalid_argument("ground_state: matrix does not match parameters");
  }
  if (start) return lowest_eigenpair(H, options, start);
  const Eigen::VectorXd seed = sector_start(p);
  return lowest_eigenpair(H, options, &seed);
}

GroundStateReport observables(const Eigen::VectorXd& state, const DickeParams& p) {
  if (state.size() != static_cast<Eigen::Index>(p.dimension())) {
    throw std::invalid_argument("observables: state does not match parameters");
  }
  const double half_N = 0.5 * p.N;
  GroundStateReport r;
  double photons = 0.0;
  double sz = 0.0;
  double parity = 0.0;
  double field = 0.0;
  double top = 0.0;
  double sx2 = 0.0;
  for (int n = 0; n <= p.n_max; ++n) {
    for (int j = 0; j <= p.N; ++j) {
      const double c = state[basis_index(p, n, j)];
      const double w = c * c;
      photons += n * w;
      sz += (j - half_N) * w;
      parity += (n + j) % 2 == 0 ? w : -w;
      if (n == p.n_max) top += w;
      if (n < p.n_max) field += 2.0 * std::sqrt(static_cast<double>(n + 1)) * c * state[basis_index(p, n + 1, j)];
    }
    // <S_x^2> = || S_x psi ||^2 within the n block.
    for (int j = 0; j <= p.N; ++j) {
      double sx_psi = 0.0;
      if (j > 0) sx_psi += 0.5 * raise_coefficient(p.N, j - 1) * state[basis_index(p, n, j - 1)];
      if (j < p.N) sx_psi += 0.5 * lower_coefficient(p.N, j + 1) * state[basis_index(p, n, j + 1)];
      sx2 += sx_psi * sx_psi;
    }
  }
  r.norm = state.norm();
  r.photon_fraction = photons / p.N;
  r.inversion = sz / p.N;
  r.sx2_fraction = sx2 / (static_cast<double>(p.N) * p.N);
  r.parity_expectation = std::clamp(parity, -1.0, 1.0);  // rounding can push |sum| past 1
  r.field_expectation = field;
  r.top_fock_population = top;
  r.converged_n_max = p.n_max;
  return r;
}

double meanfield_order_parameter(double F, double omega, double omega_A) {
  if (!(F >= 0.0)) throw std::invalid_argument("meanfield_order_parameter: F must be >= 0");
  require_finite_positive(omega, "omega");
  require_finite_positive(omega_A, "omega_A");
  if (F <= 1.0) return 0.0;
  return F * omega_A / (4.0 * omega) * (1.0 - 1.0 / (F * F));
}

SolvedInstance solve_fixed(const DickeParams& p, const EigenOptions& options) {
  const SparseMatrix H = build_hamiltonian(p);
  SolvedInstance out{p, ground_state(H, p, options), {}};
  out.report = observables(out.eigen.state, p);
  out.report.energy = out.eigen.energy;
  out.report.gap = out.eigen.gap;
  out.report.near_degenerate = out.eigen.gap < 1e-8 * out.eigen.scale;
  return out;
}

SolvedInstance fock_convergence(DickeParams p, const FockSchedule& schedule, const EigenOptions& options) {
  if (schedule.first < 1 || schedule.cap < schedule.first) {
    throw std::invalid_argument("fock_convergence: invalid schedule");
  }
  p.n_max = schedule.first;
  SolvedInstance previous = solve_fixed(p, options);
  while (true) {
    DickeParams next = previous.params;
    next.n_max = 2 * previous.params.n_max;
    if (next.n_max > schedule.cap) {
      throw DimensionError("fock_convergence: no converged truncation up to n_max = " +
                           std::to_string(schedule.cap));
    }
    const SparseMatrix H = build_hamiltonian(next);
    const Eigen::VectorXd warm = embed(previous.eigen.state, next);
    SolvedInstance current{next, ground_state(H, next, options, &warm), {}};
    current.report = observables(current.eigen.state, next);
    current.report.energy = current.eigen.energy;
    current.report.gap = current.eigen.gap;
    current.report.near_degenerate = current.eigen.gap < 1e-8 * current.eigen.scale;

    const double change = std::abs(current.report.photon_fraction - previous.report.photon_fraction);
    if (change < schedule.photon_fraction_tol &&
        previous.report.top_fock_population < schedule.top_population_tol) {
      return previous;
    }
    previous = std::move(current);
  }
}

std::vector<ScanRow> scan_coupling(const DickeParams& tmpl, std::span<const double> F_grid,
                                   const ScanOptions& options) {
  tmpl.validate();
  std::vector<double> grid(F_grid.begin(), F_grid.end());
  for (double F : grid) {
    if (!(F >= 0.0) || !std::isfinite(F)) throw std::invalid_argument("scan_coupling: grid values must be >= 0");
  }
  std::sort(grid.begin(), grid.end());
  std::vector<ScanRow> rows(grid.size());

  auto run_row = [&](std::size_t i) {
    ScanRow& row = rows[i];
    row.F = grid[i];
    try {
      DickeParams p = DickeParams::from_figure_of_merit(tmpl.N, grid[i], tmpl.omega, tmpl.omega_A, tmpl.rwa,
                                                        options.fixed_n_max > 0 ? options.fixed_n_max : tmpl.n_max);
      SolvedInstance solved = options.fixed_n_max > 0 ? solve_fixed(p, options.eigen)
                                                      : fock_convergence(p, options.schedule, options.eigen);
      row.params = solved.params;
      row.report = solved.report;
    } catch (const std::exception& e) {
      row.params = tmpl;
      row.error = e.what();
    }
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(grid.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_row(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < grid.size(); i = next++) run_row(i);
    });
  }
  pool.clear();  // joins
  return rows;
}

std::vector<double> parse_grid(const std::string& spec) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid grid value '" + s + "' in '" + spec + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("invalid grid value '" + s + "'");
    if (v < 0.0) throw std::invalid_argument("grid values must be >= 0, got '" + s + "'");
    return v;
  };
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:step, got '" + spec + "'");
    const double start = to_double(parts[0]);
    const double stop = to_double(parts[1]);
    const double step = to_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
    if (stop < start) throw std::invalid_argument("grid stop must be >= start");
    const double span = (stop - start) / step;
    if (span > 1e6) throw std::invalid_argument("grid has too many points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    out.reserve(count);
    // Round to 15 significant digits so 0:1:0.1 yields 0.3 rather than 0.30000000000000004.
    for (std::size_t i = 0; i < count; ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.15g", start + static_cast<double>(i) * step);
      out.push_back(std::strtod(buf, nullptr));
    }
  } else {
    std::stringstream ss(spec);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(to_double(item));
    if (out.empty()) throw std::invalid_argument("empty grid");
    std::sort(out.begin(), out.end());
  }
  return out;
}

double photon_fraction_crossing(const DickeParams& tmpl, double threshold, double F_lo, double F_hi,
                                double F_tol, const ScanOptions& options) {
  if (!(F_hi > F_lo) || !(F_lo >= 0.0) || !(F_tol > 0.0)) {
    throw std::invalid_argument("photon_fraction_crossing: invalid bracket");
  }
  auto fraction = [&](double F) {
    const int n_max = options.fixed_n_max > 0 ? options.fixed_n_max : tmpl.n_max;
    const DickeParams p =
        DickeParams::from_figure_of_merit(tmpl.N, F, tmpl.omega, tmpl.omega_A, tmpl.rwa, n_max);
    const SolvedInstance s = options.fixed_n_max > 0 ? solve_fixed(p, options.eigen)
                                                     : fock_convergence(p, options.schedule, options.eigen);
    return s.report.photon_fraction;
  };
  if (fraction(F_lo) > threshold || fraction(F_hi) <= threshold) {
    throw std::domain_error("photon_fraction_crossing: bracket does not straddle the threshold");
  }
  double lo = F_lo;
  double hi = F_hi;
  while (hi - lo > F_tol) {
    const double mid = 0.5 * (lo + hi);
    (fraction(mid) > threshold ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace ultrastrong

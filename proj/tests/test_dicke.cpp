#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ultrastrong/dicke.hpp"

using namespace ultrastrong;
using doctest::Approx;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) { return Eigen::MatrixXd(m); }

}  // namespace

TEST_CASE("parameters and dimension") {
  const DickeParams p = DickeParams::from_figure_of_merit(6, 1.7, 2.0, 0.5, false, 10);
  CHECK(p.dimension() == 11u * 7u);
  CHECK(p.g_collective == Approx(std::sqrt(1.7)).epsilon(1e-15));
  CHECK(p.figure_of_merit() == Approx(1.7).epsilon(1e-14));
  CHECK(build_hamiltonian(p).rows() == 77);
  CHECK_THROWS_AS(DickeParams::from_figure_of_merit(0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DickeParams::from_figure_of_merit(4, -1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DickeParams::from_figure_of_merit(4, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DickeParams::from_figure_of_merit(4, 1.0, 1.0, 1.0, false, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_hamiltonian(DickeParams::from_figure_of_merit(1000, 1.0, 1.0, 1.0, false, 9999)),
                  DimensionError);
  CHECK_THROWS_AS(build_hamiltonian(DickeParams::from_figure_of_merit(4, 1.0, 1.0, 1.0, false, 100), 200),
                  DimensionError);
}

TEST_CASE("Hamiltonian is exactly symmetric and commutes with its symmetries") {
  for (bool rwa : {false, true}) {
    for (int N : {1, 2, 5, 9}) {
      const DickeParams p = DickeParams::from_figure_of_merit(N, 1.37, 1.1, 0.9, rwa, 40 / (N + 1) + 3);
      const Eigen::MatrixXd H = dense(build_hamiltonian(p));
      REQUIRE(H.rows() <= 500);
      CHECK((H - H.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::MatrixXd P = dense(parity_operator(p));
      CHECK((H * P - P * H).cwiseAbs().maxCoeff() == 0.0);
      if (rwa) {
        const Eigen::MatrixXd X = dense(excitation_operator(p));
        CHECK((H * X - X * H).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
  // Without the rotating-wave approximation excitation number is not conserved.
  const DickeParams p = DickeParams::from_figure_of_merit(3, 1.0, 1.0, 1.0, false, 6);
  const Eigen::MatrixXd H = dense(build_hamiltonian(p));
  const Eigen::MatrixXd X = dense(excitation_operator(p));
  CHECK((H * X - X * H).cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("decoupled limit") {
  const DickeParams p = DickeParams::from_figure_of_merit(10, 0.0, 1.3, 0.7, false, 8);
  const SparseMatrix H = build_hamiltonian(p);
  CHECK(H.nonZeros() == static_cast<Eigen::Index>(p.dimension()));
  const auto e = ground_state(H, p);
  CHECK(e.energy == Approx(-5.0 * 0.7).epsilon(1e-12));
  const auto r = observables(e.state, p);
  CHECK(r.photon_fraction == Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(r.inversion == Approx(-0.5).epsilon(1e-12));
  CHECK(fock_convergence(p).params.n_max == 8);
}

TEST_CASE("Jaynes-Cummings doublet") {
  const double g = 0.13;
  DickeParams p;
  p.N = 1;
  p.omega = 1.0;
  p.omega_A = 1.0;
  p.g_collective = g;
  p.rwa = true;
  p.n_max = 4;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(build_hamiltonian(p)));
  const Eigen::VectorXd ev = es.eigenvalues();
  auto has = [&](double target) {
    return (ev.array() - target).abs().minCoeff() < 1e-12;
  };
  // One-excitation block {|1, down>, |0, up>}: 0.5 +- g.
  CHECK(has(0.5 - g));
  CHECK(has(0.5 + g));
  CHECK(has(-0.5));
}

TEST_CASE("Lanczos ground energies match dense diagonalization") {
  struct Case {
    int N, n_max;
    double F;
    bool rwa;
    double numpy;  // independent dense build and eigvalsh
  };
  for (const Case& c : {Case{4, 6, 1.5, false, -2.3322681458981043}, Case{3, 5, 0.7, false, -1.6051642761774014},
                        Case{5, 8, 2.0, true, -3.3093999840447177}, Case{2, 4, 1.3, true, -1.140175425099138}}) {
    const DickeParams p = DickeParams::from_figure_of_merit(c.N, c.F, 1.0, 1.0, c.rwa, c.n_max);
    const SparseMatrix H = build_hamiltonian(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(H));
    const auto e = ground_state(H, p);
    CHECK(e.energy == Approx(es.eigenvalues()[0]).epsilon(1e-10));
    CHECK(e.energy == Approx(c.numpy).epsilon(1e-10));
  }
  std::vector<int> sizes{2, 5, 8};
  for (int N : sizes) {
    for (double F : {0.3, 1.0, 2.5}) {
      const DickeParams p = DickeParams::from_figure_of_merit(N, F, 1.2, 0.8, false, 200 / (N + 1) - 1);
      const SparseMatrix H = build_hamiltonian(p);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(H));
      CHECK(ground_state(H, p).energy == Approx(es.eigenvalues()[0]).epsilon(1e-10));
    }
  }
}

TEST_CASE("ground-state observables respect parity") {
  for (double F : {0.2, 0.9, 1.4, 3.0}) {
    const DickeParams p = DickeParams::from_figure_of_merit(12, F, 1.0, 1.0, false, 48);
    const auto e = ground_state(build_hamiltonian(p), p);
    const auto r = observables(e.state, p);
    CHECK(std::abs(r.field_expectation) < 1e-10);
    CHECK(std::abs(std::abs(r.parity_expectation) - 1.0) < 1e-10);
    CHECK(r.norm == Approx(1.0).epsilon(1e-12));
    CHECK(r.photon_fraction >= 0.0);
  }
}

TEST_CASE("energy decreases as the coupling grows") {
  double prev = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const DickeParams p = DickeParams::from_figure_of_merit(6, 0.15 * i, 1.0, 1.0, false, 40);
    const double e = ground_state(build_hamiltonian(p), p).energy;
    if (i > 0) CHECK(e <= prev + 1e-10);
    prev = e;
  }
}

TEST_CASE("Tavis-Cummings ground state below threshold") {
  for (int N : {4, 24}) {
    for (double F : {0.2, 0.5, 0.9}) {
      const DickeParams p = DickeParams::from_figure_of_merit(N, F, 1.0, 1.0, true, 16);
      const auto e = ground_state(build_hamiltonian(p), p);
      CHECK(e.energy == Approx(-0.5 * N).epsilon(1e-10));
    }
  }
}

TEST_CASE("mean-field order parameter") {
  CHECK(meanfield_order_parameter(0.5, 1.0, 1.0) == 0.0);
  CHECK(meanfield_order_parameter(1.0, 1.0, 1.0) == 0.0);
  CHECK(meanfield_order_parameter(2.0, 1.0, 1.0) == Approx(0.375).epsilon(1e-15));
  CHECK(meanfield_order_parameter(2.0, 2.0, 1.0) == Approx(0.1875).epsilon(1e-15));
}

TEST_CASE("Fock convergence, frozen regression at N = 24, F = 2") {
  const DickeParams p = DickeParams::from_figure_of_merit(24, 2.0, 1.0, 1.0);
  const SolvedInstance s = fock_convergence(p);
  CHECK(s.params.n_max == 32);
  CHECK(s.report.converged_n_max == 32);
  CHECK(s.report.top_fock_population < 1e-8);
  CHECK(s.report.photon_fraction == Approx(0.36990580312).epsilon(1e-8));
  CHECK(s.report.energy == Approx(-15.047097968069).epsilon(1e-10));
  CHECK(s.report.photon_fraction == Approx(0.375).epsilon(0.15));

  FockSchedule tight;
  tight.cap = 8;
  CHECK_THROWS_AS(fock_convergence(p, tight), DimensionError);
}

TEST_CASE("coupling scan") {
  const DickeParams tmpl = DickeParams::from_figure_of_merit(10, 0.0, 1.0, 1.0);
  const std::vector<double> grid = parse_grid("0:2.5:0.25");
  REQUIRE(grid.size() == 11);
  ScanOptions one;
  ScanOptions three;
  three.threads = 3;
  const auto a = scan_coupling(tmpl, grid, one);
  const auto b = scan_coupling(tmpl, grid, three);
  REQUIRE(a.size() == grid.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].ok());
    CHECK(a[i].F == grid[i]);
    CHECK(a[i].report.energy == b[i].report.energy);
    CHECK(a[i].report.photon_fraction == b[i].report.photon_fraction);
    if (i > 0) {
      CHECK(a[i].report.photon_fraction >= a[i - 1].report.photon_fraction - 1e-6);
      CHECK(a[i].params.n_max >= a[i - 1].params.n_max);
    }
  }
  CHECK(a[0].report.energy == Approx(-5.0).epsilon(1e-12));
  CHECK(a[0].report.photon_fraction == Approx(0.0).scale(1.0).epsilon(1e-14));

  // Unsorted input comes back ordered by F.
  const std::vector<double> shuffled{1.5, 0.0, 0.5};
  const auto c = scan_coupling(tmpl, shuffled);
  CHECK(c[0].F == 0.0);
  CHECK(c[2].F == 1.5);

  ScanOptions fixed;
  fixed.fixed_n_max = 12;
  for (const auto& row : scan_coupling(tmpl, std::vector<double>{0.5, 1.0}, fixed)) CHECK(row.params.n_max == 12);

  ScanOptions capped;
  capped.schedule.cap = 16;
  const auto failed = scan_coupling(tmpl, std::vector<double>{0.0, 3.0}, capped);
  CHECK(failed[0].ok());
  CHECK_FALSE(failed[1].ok());
}

TEST_CASE("grid parsing") {
  const auto g = parse_grid("0:1:0.1");
  REQUIRE(g.size() == 11);
  CHECK(g[3] == 0.3);
  CHECK(g.back() == 1.0);
  CHECK(parse_grid("0:2.5:0.1").size() == 26);
  CHECK(parse_grid("0.5, 1,2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(parse_grid("1.5") == std::vector<double>{1.5});
  for (const char* bad : {"", "a:b:c", "0:1", "0:1:0", "0:1:-0.1", "2:1:0.1", "-1:1:0.5", "1,-2", "1,,2", "1:2:3:4"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_grid(bad), std::invalid_argument);
  }
}

TEST_CASE("photon-fraction crossing") {
  const DickeParams tmpl = DickeParams::from_figure_of_merit(8, 0.0, 1.0, 1.0);
  const double c = photon_fraction_crossing(tmpl, 0.05, 0.5, 2.0, 1e-4);
  CHECK(c == Approx(1.1650).epsilon(2e-4));
  CHECK_THROWS_AS(photon_fraction_crossing(tmpl, 0.05, 1.5, 2.0), std::domain_error);
  CHECK_THROWS_AS(photon_fraction_crossing(tmpl, 0.05, 0.1, 0.5), std::domain_error);
}

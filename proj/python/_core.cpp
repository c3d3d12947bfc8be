#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "ultrastrong/constants.hpp"
#include "ultrastrong/coupling.hpp"
#include "ultrastrong/cutoff_window.hpp"
#include "ultrastrong/dicke.hpp"
#include "ultrastrong/ensemble.hpp"
#include "ultrastrong/polarization.hpp"
#include "ultrastrong/quadrature.hpp"
#include "ultrastrong/species.hpp"

namespace py = pybind11;
using namespace ultrastrong;

namespace {

py::dict report_dict(const GroundStateReport& r) {
  py::dict d;
  d["energy"] = r.energy;
  d["photon_fraction"] = r.photon_fraction;
  d["inversion"] = r.inversion;
  d["sx2_fraction"] = r.sx2_fraction;
  d["parity"] = r.parity_expectation;
  d["field_expectation"] = r.field_expectation;
  d["top_fock_population"] = r.top_fock_population;
  d["n_max"] = r.converged_n_max;
  d["near_degenerate"] = r.near_degenerate;
  return d;
}

DickeParams make_params(int N, double F, double omega, double omega_A, bool rwa, int n_max) {
  DickeParams p = DickeParams::from_figure_of_merit(N, F, omega, omega_A, rwa, n_max);
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cutoff-filtered polarization fields and finite-N Dicke ground states";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_MemoryError);
  py::register_exception<RegistryError>(m, "RegistryError", PyExc_ValueError);

  py::dict c;
  c["hbar"] = kConstants.hbar;
  c["c"] = kConstants.c;
  c["eps0"] = kConstants.eps0;
  c["e_charge"] = kConstants.e_charge;
  c["m_e"] = kConstants.m_e;
  c["a0"] = kConstants.a0;
  c["alpha"] = kConstants.alpha;
  m.attr("constants") = c;

  m.def("eta", [](double k_M, double r) { return eta(Cutoff(k_M), r); }, py::arg("k_M"), py::arg("r"));
  m.def("suppression_factor", [](double k_M, double k) { return suppression_factor(Cutoff(k_M), k); });
  m.def("transverse_delta_real", [](double k_M, const Vec3& x) { return transverse_delta_real(Cutoff(k_M), x); });
  m.def("total_residual_polarization",
        [](const Vec3& d, const Vec3& x_A, double k_M, const Vec3& x) {
          return total_residual_polarization(d, x_A, Cutoff(k_M), x);
        },
        py::arg("d"), py::arg("x_A"), py::arg("k_M"), py::arg("x"));

  m.def("delta_U", [](double d, double k_M) { return delta_U(d, Cutoff(k_M)); });
  m.def("energy_ratio", [](double k_M) { return energy_ratio(Cutoff(k_M)); });
  m.def("hydrogen_first_order_shift", [](double k_M) { return hydrogen_first_order_shift(Cutoff(k_M)); });
  m.def("intimacy_radius", [](double k_M) { return intimacy_radius(Cutoff(k_M)); });
  m.def(
      "cutoff_window",
      [](double k_radiation, double k_M) {
        const CutoffWindow w = cutoff_window(k_radiation, Cutoff(k_M));
        py::dict d;
        d["lower_violation"] = w.lower_violation;
        d["upper_ratio"] = w.upper_ratio;
        d["admissible"] = w.admissible;
        return d;
      },
      py::arg("k_radiation"), py::arg("k_M"));

  m.def("coupling_g", [](double omega, double volume, double d) { return coupling_g({omega, volume}, d); });
  m.def("figure_of_merit", [](double N, double g, double omega, double omega_A) {
    return figure_of_merit(N, g, omega, omega_A).F;
  });
  m.def("fom_density_Q", [](double n, double lambda_A, double Q) { return fom_density_Q(n, lambda_A, Q).F; });
  m.def("fom_hydrogenlike", [](double n) { return fom_hydrogenlike(n).F; });
  m.def("critical_density", &critical_density, py::arg("lambda_A"), py::arg("Q"));
  m.def("dipole_from_linewidth", &dipole_from_linewidth);
  m.def("quality_factor", &quality_factor);

  m.def("species", [] {
    py::list out;
    for (const AtomSpecies& s : default_registry().species()) {
      py::dict d;
      d["name"] = s.name;
      d["lambda_A"] = s.lambda_A;
      d["gamma_hwhm"] = s.gamma_hwhm;
      d["omega_A"] = s.omega_A();
      d["quality_factor"] = s.quality_factor();
      d["transition_dipole"] = s.transition_dipole();
      d["critical_density"] = critical_density(s.lambda_A, s.quality_factor());
      if (s.crystalline_density) {
        d["crystalline_ratio"] = crystalline_comparison(s);
      } else {
        d["crystalline_ratio"] = py::none();
      }
      out.append(d);
    }
    return out;
  });

  m.def("meanfield_order_parameter", &meanfield_order_parameter, py::arg("F"), py::arg("omega") = 1.0,
        py::arg("omega_A") = 1.0);
  m.def(
      "ground_state",
      [](int N, double F, double omega, double omega_A, bool rwa, int n_max) {
        const DickeParams p = make_params(N, F, omega, omega_A, rwa, n_max > 0 ? n_max : 8);
        py::gil_scoped_release release;
        SolvedInstance s = n_max > 0 ? solve_fixed(p) : fock_convergence(p);
        py::gil_scoped_acquire acquire;
        return report_dict(s.report);
      },
      py::arg("N"), py::arg("F"), py::arg("omega") = 1.0, py::arg("omega_A") = 1.0, py::arg("rwa") = false,
      py::arg("n_max") = 0);
  m.def(
      "scan",
      [](int N, const std::vector<double>& grid, double omega, double omega_A, bool rwa, unsigned threads) {
        const DickeParams p = make_params(N, 0.0, omega, omega_A, rwa, 8);
        ScanOptions opt;
        opt.threads = threads;
        std::vector<ScanRow> rows;
        {
          py::gil_scoped_release release;
          rows = scan_coupling(p, grid, opt);
        }
        py::list out;
        for (const ScanRow& r : rows) {
          py::dict d = report_dict(r.report);
          d["F"] = r.F;
          d["error"] = r.error;
          out.append(d);
        }
        return out;
      },
      py::arg("N"), py::arg("grid"), py::arg("omega") = 1.0, py::arg("omega_A") = 1.0, py::arg("rwa") = false,
      py::arg("threads") = 1);
  m.def("parse_grid", &parse_grid);

  m.def(
      "overlap_energy",
      [](const Vec3& x_A, const Vec3& d_A, const Vec3& x_B, const Vec3& d_B, double k_M) {
        const AtomConfiguration cfg({x_A, x_B}, {d_A, d_B}, 1.0);
        const OverlapReport r = residual_overlap_energy(cfg, 0, 1, Cutoff(k_M));
        return py::make_tuple(r.overlap_energy, r.error_estimate, r.bound);
      },
      py::arg("x_A"), py::arg("d_A"), py::arg("x_B"), py::arg("d_B"), py::arg("k_M"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ultrastrong/constants.hpp"
#include "ultrastrong/coupling.hpp"
#include "ultrastrong/cutoff_window.hpp"
#include "ultrastrong/dicke.hpp"
#include "ultrastrong/ensemble.hpp"
#include "ultrastrong/polarization.hpp"
#include "ultrastrong/quadrature.hpp"
#include "ultrastrong/species.hpp"

namespace ultrastrong::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, bool, long long, double, std::string>;

struct Column {
  std::string key;
  std::string csv_header;  // empty: JSON only
};

struct Report {
  std::string command;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  Json extra = Json::object();
};

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Json cell_to_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_to_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else {
          return csv_escape(v);
        }
      },
      c);
}

std::string render_json(const Report& r) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = r.command;
  for (const auto& [k, v] : r.extra.items()) doc[k] = v;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i].key] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render_csv(const Report& r) {
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < r.columns.size(); ++i)
    if (!r.columns[i].csv_header.empty()) picked.push_back(i);
  std::ostringstream os;
  os << "schema_version";
  for (std::size_t i : picked) os << "," << r.columns[i].csv_header;
  os << "\n";
  for (const auto& row : r.rows) {
    os << kSchemaVersion;
    for (std::size_t i : picked) os << "," << cell_to_csv(row[i]);
    os << "\n";
  }
  return os.str();
}

// Same key in JSON and CSV.
Column col(std::string key) { return {key, key}; }

struct Common {
  std::string format = "json";
  std::string output;
  std::string registry;

  const SpeciesRegistry& load_registry(std::optional<SpeciesRegistry>& storage, std::ostream& err) const {
    if (registry.empty()) return default_registry();
    storage = load_species_registry(registry);
    for (const auto& w : storage->warnings()) err << "warning: " << w << "\n";
    return *storage;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--output", c.output, "Write the report to PATH instead of stdout");
  sub->add_option("--registry", c.registry, "Species registry (CSV or JSON); defaults to the embedded table");
}

Cutoff cutoff_from(const std::optional<double>& k_M, const std::optional<double>& k_M_inv_bohr) {
  if (k_M && k_M_inv_bohr) throw ValidationError("give only one of --kM and --kM-inv-bohr");
  if (k_M) return Cutoff(*k_M);
  if (k_M_inv_bohr) return Cutoff(*k_M_inv_bohr / kConstants.a0);
  throw ValidationError("one of --kM or --kM-inv-bohr is required");
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  std::vector<double> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError(what + ": '" + text + "' is not a list of three numbers");
    }
    if (used != item.size() || !std::isfinite(v)) throw ValidationError(what + ": invalid component '" + item + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ValidationError(what + ": expected x,y,z");
  return {parts[0], parts[1], parts[2]};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// ---- cutoff-window ----

struct CutoffWindowArgs {
  std::optional<double> k_M;
  std::optional<double> k_M_inv_bohr;
  std::optional<std::string> species;
  std::optional<double> k_radiation;
  double lower = kDefaultLowerThreshold;
  double upper = kDefaultUpperThreshold;
  double tol = 1e-10;
};

Report cmd_cutoff_window(const CutoffWindowArgs& a, const SpeciesRegistry& registry) {
  const Cutoff cutoff = cutoff_from(a.k_M, a.k_M_inv_bohr);
  if (a.species && a.k_radiation) throw ValidationError("give only one of --species and --k-radiation");
  double k_rad = 0.0;
  Cell species_cell;
  if (a.species) {
    const AtomSpecies& s = registry.at(*a.species);
    k_rad = 2.0 * std::numbers::pi / s.lambda_A;
    species_cell = s.name;
  } else if (a.k_radiation) {
    k_rad = *a.k_radiation;
  } else {
    throw ValidationError("one of --species or --k-radiation is required");
  }
  if (!(a.tol > 0.0)) throw ValidationError("--tol must be positive");
  const CutoffWindow w = cutoff_window(k_rad, cutoff, a.lower, a.upper);
  const PerturbationReport p = perturbation_report(cutoff, a.tol);

  Report r;
  r.command = "cutoff-window";
  r.columns = {col("species"),          col("k_M_per_m"),         col("k_radiation_per_m"),
               col("lower_violation"),  col("upper_ratio"),       col("lower_threshold"),
               col("upper_threshold"),  col("admissible"),        col("intimacy_radius_m"),
               col("delta_U_J"),        col("first_order_shift_J"), col("first_order_shift_eV"),
               col("ratio_to_rydberg"), col("numeric_shift_J"),   col("numeric_error_estimate_J")};
  r.rows.push_back({species_cell, w.k_M, w.k_radiation, w.lower_violation, w.upper_ratio, w.lower_threshold,
                    w.upper_threshold, w.admissible, intimacy_radius(cutoff), p.delta_U, p.first_order_shift,
                    joule_to_ev(p.first_order_shift), p.ratio_to_rydberg, p.numeric_shift,
                    p.numeric_error_estimate});
  return r;
}

// ---- critical-density ----

struct CriticalDensityArgs {
  std::optional<std::string> species;
  bool compare_crystalline = false;
};

Report cmd_critical_density(const CriticalDensityArgs& a, const SpeciesRegistry& registry) {
  std::vector<const AtomSpecies*> chosen;
  if (a.species) {
    chosen.push_back(&registry.at(*a.species));
  } else {
    for (const auto& s : registry.species()) chosen.push_back(&s);
  }
  if (chosen.empty()) throw ValidationError("species registry is empty");

  Report r;
  r.command = "critical-density";
  r.columns = {col("species"),
               col("lambda_A_m"),
               col("omega_A_rad_per_s"),
               col("gamma_hwhm_rad_per_s"),
               col("quality_factor"),
               col("transition_dipole_C_m"),
               col("transition_dipole_e_a0"),
               col("critical_density_per_m3")};
  if (a.compare_crystalline) {
    r.columns.push_back(col("crystalline_density_per_m3"));
    r.columns.push_back(col("critical_to_crystalline_ratio"));
  }
  const double e_a0 = kConstants.e_charge * kConstants.a0;
  for (const AtomSpecies* s : chosen) {
    const double Q = s->quality_factor();
    const double d = s->transition_dipole();
    std::vector<Cell> row{s->name, s->lambda_A, s->omega_A(), s->gamma_hwhm, Q, d, d / e_a0,
                          critical_density(s->lambda_A, Q)};
    if (a.compare_crystalline) {
      if (s->crystalline_density) {
        row.emplace_back(*s->crystalline_density);
        row.emplace_back(crystalline_comparison(*s));
      } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      }
    }
    r.rows.push_back(std::move(row));
  }
  return r;
}

// ---- dicke-scan ----

struct DickeScanArgs {
  int N = 0;
  std::string F_grid;
  bool resonant = false;
  std::optional<double> omega_ratio;
  double omega_A = 1.0;
  bool rwa = false;
  int n_max = 0;
  int fock_cap = 512;
  unsigned threads = 1;
};

Report cmd_dicke_scan(const DickeScanArgs& a, std::ostream& err, bool& failed) {
  if (a.N < 1) throw ValidationError("--N must be >= 1");
  if (a.resonant && a.omega_ratio) throw ValidationError("give only one of --resonant and --omega-ratio");
  const double ratio = a.omega_ratio.value_or(1.0);
  if (!(ratio > 0.0) || !(a.omega_A > 0.0)) throw ValidationError("frequencies must be positive");
  if (a.n_max < 0) throw ValidationError("--n-max must be >= 1");
  if (a.threads < 1) throw ValidationError("--threads must be >= 1");
  const std::vector<double> grid = parse_grid(a.F_grid);

  DickeParams tmpl = DickeParams::from_figure_of_merit(a.N, 0.0, ratio * a.omega_A, a.omega_A, a.rwa,
                                                       a.n_max > 0 ? a.n_max : 8);
  tmpl.validate();
  ScanOptions opt;
  opt.fixed_n_max = a.n_max;
  opt.schedule.cap = a.fock_cap;
  opt.threads = a.threads;
  const auto rows = scan_coupling(tmpl, grid, opt);

  Report r;
  r.command = "dicke-scan";
  r.extra["N"] = a.N;
  r.extra["omega_rad_per_s"] = tmpl.omega;
  r.extra["omega_A_rad_per_s"] = tmpl.omega_A;
  r.extra["rwa"] = a.rwa;
  r.extra["adaptive_fock"] = a.n_max == 0;
  r.columns = {col("F"),
               col("N"),
               col("n_max"),
               {"energy_rad_per_s", "energy"},
               col("photon_fraction"),
               col("inversion"),
               col("sx2_fraction"),
               {"parity", "parity"},
               {"g_collective_rad_per_s", ""},
               {"top_fock_population", ""},
               {"near_degenerate", ""},
               {"error", ""}};
  for (const auto& row : rows) {
    if (!row.ok()) {
      failed = true;
      err << "error: F = " << format_number(row.F) << ": " << row.error << "\n";
      r.rows.push_back({row.F, static_cast<long long>(a.N), std::monostate{}, std::monostate{}, std::monostate{},
                        std::monostate{}, std::monostate{}, std::monostate{}, row.params.g_collective,
                        std::monostate{}, std::monostate{}, row.error});
      continue;
    }
    const auto& rep = row.report;
    r.rows.push_back({row.F, static_cast<long long>(a.N), static_cast<long long>(rep.converged_n_max), rep.energy,
                      rep.photon_fraction, rep.inversion, rep.sx2_fraction, rep.parity_expectation,
                      row.params.g_collective, rep.top_fock_population, rep.near_degenerate, std::monostate{}});
  }
  return r;
}

// ---- polarization ----

struct PolarizationArgs {
  std::optional<double> k_M;
  std::optional<double> k_M_inv_bohr;
  std::optional<double> r;
  std::optional<std::string> x;
  std::optional<std::string> dipole;
  bool eta_only = false;
};

Report cmd_polarization(const PolarizationArgs& a) {
  const Cutoff cutoff = cutoff_from(a.k_M, a.k_M_inv_bohr);
  if (a.r && a.x) throw ValidationError("give only one of --r and --x");
  if (!a.r && !a.x) throw ValidationError("one of --r or --x is required");
  if (a.dipole && !a.x) throw ValidationError("--dipole needs a field point --x");
  const Vec3 point = a.x ? parse_vec3(*a.x, "--x") : Vec3(0.0, 0.0, *a.r);
  const double r = point.norm();
  if (!(r > 0.0)) throw ValidationError("field point must differ from the atom position");

  Report rep;
  rep.command = "polarization";
  rep.columns = {col("k_M_per_m"), col("r_m"), col("k_M_r"), col("eta")};
  std::vector<Cell> row{cutoff.k_M(), r, cutoff.k_M() * r, eta(cutoff, r)};
  if (!a.eta_only) {
    rep.columns.push_back(col("residual_envelope"));
    row.emplace_back(residual_envelope(cutoff.k_M() * r));
    if (a.x) {
      const Tensor3 t = transverse_delta_real(cutoff, point);
      const char* axes = "xyz";
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
          rep.columns.push_back(col(std::string("delta_T_") + axes[i] + axes[j] + "_per_m3"));
          row.emplace_back(t(i, j));
        }
    }
    if (a.dipole) {
      const Vec3 d = parse_vec3(*a.dipole, "--dipole");
      const Vec3 origin = Vec3::Zero();
      const Vec3 pt = transverse_polarization(d, origin, cutoff, point);
      const Vec3 pl = longitudinal_dipole_polarization(d, origin, point);
      const Vec3 pr = total_residual_polarization(d, origin, cutoff, point);
      const char* axes = "xyz";
      for (const auto& [name, v] : {std::pair{"P_transverse_", pt}, std::pair{"P_longitudinal_", pl},
                                    std::pair{"P_residual_", pr}}) {
        for (int i = 0; i < 3; ++i) {
          rep.columns.push_back(col(std::string(name) + axes[i] + "_C_per_m2"));
          row.emplace_back(v[i]);
        }
      }
    }
  }
  rep.rows.push_back(std::move(row));
  return rep;
}

// ---- ensemble-check ----

struct EnsembleArgs {
  std::string config;
  std::optional<double> k_M;
  std::optional<double> k_M_inv_bohr;
  std::vector<std::size_t> overlap;
  std::optional<std::string> species;
  double tol = 1e-8;
};

Report cmd_ensemble_check(const EnsembleArgs& a, const SpeciesRegistry& registry) {
  const Cutoff cutoff = cutoff_from(a.k_M, a.k_M_inv_bohr);
  if (!(a.tol > 0.0)) throw ValidationError("--tol must be positive");
  const AtomConfiguration c = parse_configuration_json(read_file(a.config));
  if (!a.overlap.empty() && a.overlap.size() != 2) throw ValidationError("--overlap takes two atom indices");
  const AtomSpecies* species = a.species ? &registry.at(*a.species) : nullptr;

  const auto violations = intimacy_violations(c, cutoff);
  Report r;
  r.command = "ensemble-check";
  r.columns = {col("atoms"),
               col("volume_m3"),
               col("density_per_m3"),
               col("k_M_per_m"),
               col("min_pairwise_distance_m"),
               col("pair_threshold_m"),
               col("max_packing_density_per_m3"),
               col("violation_count")};
  std::vector<Cell> row{static_cast<long long>(c.size()),
                        c.volume(),
                        c.density(),
                        cutoff.k_M(),
                        c.size() >= 2 ? Cell(min_pairwise_distance(c)) : Cell(std::monostate{}),
                        intimacy_pair_threshold(cutoff),
                        max_packing_density(cutoff),
                        static_cast<long long>(violations.size())};
  if (!a.overlap.empty()) {
    const OverlapReport o = residual_overlap_energy(c, a.overlap[0], a.overlap[1], cutoff, a.tol);
    for (const char* k : {"overlap_first", "overlap_second", "separation_m", "overlap_energy_J",
                          "overlap_error_estimate_J", "overlap_bound_J", "within_bound"})
      r.columns.push_back(col(k));
    row.emplace_back(static_cast<long long>(o.first));
    row.emplace_back(static_cast<long long>(o.second));
    row.emplace_back(o.separation);
    row.emplace_back(o.overlap_energy);
    row.emplace_back(o.error_estimate);
    row.emplace_back(o.bound);
    row.emplace_back(std::abs(o.overlap_energy) <= o.bound + o.error_estimate);
  }
  if (species) {
    const FigureOfMeritReport f = config_figure_of_merit(c, *species);
    r.columns.push_back(col("species"));
    r.columns.push_back(col("figure_of_merit"));
    row.emplace_back(species->name);
    row.emplace_back(f.F);
  }
  r.rows.push_back(std::move(row));

  Json list = Json::array();
  for (const auto& [i, j] : violations) {
    list.push_back({{"first", i}, {"second", j}, {"separation_m", (c.positions()[i] - c.positions()[j]).norm()}});
  }
  r.extra["violations"] = std::move(list);
  return r;
}

int emit(const Report& r, const Common& common, std::ostream& out, std::ostream& err) {
  const std::string text = common.format == "csv" ? render_csv(r) : render_json(r);
  if (common.output.empty()) {
    out << text;
    out.flush();
    return kOk;
  }
  std::ofstream file(common.output, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open " << common.output << " for writing\n";
    return kValidationFailure;
  }
  file << text;
  return file ? kOk : kComputationFailure;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cutoff-window, coupling and Dicke-model calculations for ultrastrong atom-cavity coupling"};
  app.name("ultrastrong");
  app.require_subcommand(1);

  Common common;

  CutoffWindowArgs cw;
  auto* sub_cw = app.add_subcommand("cutoff-window", "Admissible window of the polarization cutoff k_M");
  sub_cw->add_option("--kM", cw.k_M, "Cutoff wavenumber (1/m)");
  sub_cw->add_option("--kM-inv-bohr", cw.k_M_inv_bohr, "Cutoff wavenumber in units of 1/a0");
  sub_cw->add_option("--species", cw.species, "Take k_radiation = 2 pi / lambda_A of this species");
  sub_cw->add_option("--k-radiation", cw.k_radiation, "Radiation wavenumber (1/m)");
  sub_cw->add_option("--lower", cw.lower, "Lower-edge threshold on 1 - L(k_radiation)");
  sub_cw->add_option("--upper", cw.upper, "Upper-edge threshold on (k_M a0)^3");
  sub_cw->add_option("--tol", cw.tol, "Relative tolerance of the numeric shift");
  add_common(sub_cw, common);

  CriticalDensityArgs cd;
  auto* sub_cd = app.add_subcommand("critical-density", "Density at which F = 1 for registry species");
  sub_cd->add_option("--species", cd.species, "Restrict to one species");
  sub_cd->add_flag("--compare-crystalline", cd.compare_crystalline, "Add crystalline density and ratio columns");
  add_common(sub_cd, common);

  DickeScanArgs ds;
  auto* sub_ds = app.add_subcommand("dicke-scan", "Ground-state scan of the Dicke model over F");
  sub_ds->add_option("--N", ds.N, "Number of atoms")->required();
  sub_ds->add_option("--F", ds.F_grid, "Grid start:stop:step or comma list")->required();
  sub_ds->add_flag("--resonant", ds.resonant, "omega = omega_A (default)");
  sub_ds->add_option("--omega-ratio", ds.omega_ratio, "omega / omega_A");
  sub_ds->add_option("--omega-A", ds.omega_A, "Atomic frequency (rad/s), sets the energy unit");
  sub_ds->add_flag("--rwa", ds.rwa, "Tavis-Cummings (rotating-wave) coupling");
  sub_ds->add_option("--n-max", ds.n_max, "Fixed Fock truncation (default: adaptive)");
  sub_ds->add_option("--fock-cap", ds.fock_cap, "Largest n_max tried by the adaptive schedule");
  sub_ds->add_option("--threads", ds.threads, "Worker threads across grid points");
  add_common(sub_ds, common);

  PolarizationArgs pa;
  auto* sub_pa = app.add_subcommand("polarization", "Cutoff transverse delta and dipole polarization fields");
  sub_pa->add_option("--kM", pa.k_M, "Cutoff wavenumber (1/m)");
  sub_pa->add_option("--kM-inv-bohr", pa.k_M_inv_bohr, "Cutoff wavenumber in units of 1/a0");
  sub_pa->add_option("--r", pa.r, "Distance from the atom (m)");
  sub_pa->add_option("--x", pa.x, "Field point x,y,z (m), atom at the origin");
  sub_pa->add_option("--dipole", pa.dipole, "Dipole moment dx,dy,dz (C m)");
  sub_pa->add_flag("--eta", pa.eta_only, "Report only eta(r)");
  add_common(sub_pa, common);

  EnsembleArgs ea;
  auto* sub_ea = app.add_subcommand("ensemble-check", "Intimacy-zone and overlap checks for an atom configuration");
  sub_ea->add_option("--config", ea.config, "Configuration JSON")->required();
  sub_ea->add_option("--kM", ea.k_M, "Cutoff wavenumber (1/m)");
  sub_ea->add_option("--kM-inv-bohr", ea.k_M_inv_bohr, "Cutoff wavenumber in units of 1/a0");
  sub_ea->add_option("--overlap", ea.overlap, "Residual overlap energy of atoms I J")->expected(2);
  sub_ea->add_option("--species", ea.species, "Species for the figure of merit");
  sub_ea->add_option("--tol", ea.tol, "Relative quadrature tolerance");
  add_common(sub_ea, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  }

  try {
    std::optional<SpeciesRegistry> storage;
    Report report;
    bool failed = false;
    if (sub_cw->parsed()) {
      report = cmd_cutoff_window(cw, common.load_registry(storage, err));
    } else if (sub_cd->parsed()) {
      report = cmd_critical_density(cd, common.load_registry(storage, err));
    } else if (sub_ds->parsed()) {
      report = cmd_dicke_scan(ds, err, failed);
    } else if (sub_pa->parsed()) {
      report = cmd_polarization(pa);
    } else {
      report = cmd_ensemble_check(ea, common.load_registry(storage, err));
    }
    const int code = emit(report, common, out, err);
    return code != kOk ? code : (failed ? kComputationFailure : kOk);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailure;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailure;
  } catch (const RegistryError& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailure;
  }
}

}  // namespace ultrastrong::cli

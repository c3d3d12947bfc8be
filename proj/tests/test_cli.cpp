#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cli.hpp"
#include "ultrastrong/constants.hpp"
#include "ultrastrong/polarization.hpp"
#include "ultrastrong/species.hpp"

using namespace ultrastrong;
using doctest::Approx;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ultrastrong_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path write_pair_config(double separation) {
  const auto path = temp_path("pair.json");
  const double d = kConstants.e_charge * kConstants.a0;
  Json doc;
  doc["positions_m"] = {{0.0, 0.0, 0.0}, {0.0, 0.0, separation}, {0.0, 1e-8, 0.0}};
  doc["dipoles_C_m"] = {{0.0, 0.0, d}, {0.0, 0.0, d}, {d, 0.0, 0.0}};
  doc["volume_m3"] = 1e-25;
  std::ofstream(path) << doc.dump();
  return path;
}

}  // namespace

TEST_CASE("number formatting is shortest round trip") {
  CHECK(cli::format_number(0.1) == "0.1");
  CHECK(cli::format_number(0.125) == "0.125");
  CHECK(cli::format_number(7e27) == "7e+27");
  CHECK(std::stod(cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("cutoff-window for hydrogen") {
  const Run r = run({"cutoff-window", "--kM-inv-bohr", "0.5", "--species", "H"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["schema_version"] == cli::kSchemaVersion);
  CHECK(doc["command"] == "cutoff-window");
  const Json& row = doc["rows"][0];
  CHECK(row["upper_ratio"].get<double>() == 0.125);
  CHECK(row["admissible"].get<bool>());
  CHECK(row["k_M_per_m"].get<double>() == Approx(0.5 / kConstants.a0).epsilon(1e-15));
  CHECK(row["ratio_to_rydberg"].get<double>() == Approx(0.125).epsilon(1e-14));

  const Run csv = run({"cutoff-window", "--kM-inv-bohr", "0.5", "--species", "H", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(lines(csv.out).size() == 2);

  const Run missing = run({"cutoff-window", "--kM-inv-bohr", "0.5", "--species", "Unobtainium"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("Unobtainium") != std::string::npos);
  CHECK(missing.out.empty());

  CHECK(run({"cutoff-window", "--kM", "-1", "--k-radiation", "1e7"}).code == 2);
  CHECK(run({"cutoff-window", "--kM", "1e10"}).code == 2);
  CHECK(run({"cutoff-window", "--kM", "1e10", "--kM-inv-bohr", "1", "--k-radiation", "1"}).code == 2);
  CHECK(run({"cutoff-window", "--kM", "1e10", "--k-radiation", "5e7", "--format", "xml"}).code == 2);
}

TEST_CASE("critical-density") {
  const Run rb = run({"critical-density", "--species", "Rb"});
  REQUIRE(rb.code == 0);
  const Json doc = Json::parse(rb.out);
  REQUIRE(doc["rows"].size() == 1);
  CHECK(doc["rows"][0]["critical_density_per_m3"].get<double>() == Approx(7.0e27).epsilon(0.1));

  const Run all = run({"critical-density", "--compare-crystalline", "--format", "csv"});
  REQUIRE(all.code == 0);
  const auto ls = lines(all.out);
  CHECK(ls.size() == default_registry().size() + 1);
  CHECK(ls[0].find("critical_to_crystalline_ratio") != std::string::npos);

  const Json all_json = Json::parse(run({"critical-density", "--compare-crystalline"}).out);
  for (const auto& row : all_json["rows"]) {
    if (row["species"] == "Rb") CHECK(row["critical_to_crystalline_ratio"].get<double>() == Approx(0.64).epsilon(0.1));
    if (row["species"] == "H") CHECK(row["critical_to_crystalline_ratio"].is_null());
  }
}

TEST_CASE("custom registry files") {
  const auto good = temp_path("registry.csv");
  std::ofstream(good) << "name,mass_amu,lambda_nm,gamma_fwhm_MHz,crystalline_density_per_m3\nZz,10,700,5,1e28\n";
  const Run r = run({"critical-density", "--registry", good.string()});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["rows"][0]["species"] == "Zz");

  const auto bad = temp_path("bad_registry.csv");
  std::ofstream(bad) << "name,mass_amu,lambda_nm,gamma_fwhm_MHz,crystalline_density_per_m3\nZz,10,0,5,\n";
  const Run b = run({"critical-density", "--registry", bad.string()});
  CHECK(b.code == 2);
  CHECK(b.err.find("lambda_nm") != std::string::npos);
  CHECK(run({"critical-density", "--registry", temp_path("nope.csv").string()}).code == 2);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST_CASE("dicke-scan") {
  const Run r = run({"dicke-scan", "--N", "24", "--F", "0:2.5:0.1", "--resonant", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 27);
  CHECK(ls[0] == "schema_version,F,N,n_max,energy,photon_fraction,inversion,sx2_fraction,parity");
  double prev = -1.0;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(ls[i]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 9);
    const double pf = std::stod(cells[5]);
    CHECK(pf >= prev - 1e-6);
    prev = pf;
  }

  const Run rwa = run({"dicke-scan", "--N", "6", "--F", "0,0.3,0.6,0.9", "--rwa"});
  REQUIRE(rwa.code == 0);
  for (const auto& row : Json::parse(rwa.out)["rows"]) {
    CHECK(row["energy_rad_per_s"].get<double>() == Approx(-3.0).epsilon(1e-10));
  }

  CHECK(run({"dicke-scan", "--N", "4", "--F", "2:1:0.1"}).code == 2);
  CHECK(run({"dicke-scan", "--N", "4", "--F", "abc"}).code == 2);
  CHECK(run({"dicke-scan", "--N", "0", "--F", "1"}).code == 2);
  CHECK(run({"dicke-scan", "--N", "4", "--F", "1", "--resonant", "--omega-ratio", "2"}).code == 2);

  const Run capped = run({"dicke-scan", "--N", "8", "--F", "0.5,3", "--fock-cap", "8"});
  CHECK(capped.code == 1);
  CHECK(capped.err.find("F = 3") != std::string::npos);
}

TEST_CASE("polarization") {
  const Run r = run({"polarization", "--kM", "1e10", "--r", "1e-9", "--eta"});
  REQUIRE(r.code == 0);
  const Json row = Json::parse(r.out)["rows"][0];
  CHECK(row["eta"].get<double>() == Approx(eta(Cutoff(1e10), 1e-9)).epsilon(1e-15));
  CHECK(row["eta"].get<double>() == Approx(0.99723060428448842).epsilon(1e-14));
  CHECK(row.size() == 4);

  const Run full = run({"polarization", "--kM", "1e10", "--x", "1e-10,0,2e-10", "--dipole", "0,0,1e-29"});
  REQUIRE(full.code == 0);
  const Json frow = Json::parse(full.out)["rows"][0];
  CHECK(frow.contains("P_residual_z_C_per_m2"));
  CHECK(frow.contains("delta_T_xz_per_m3"));

  CHECK(run({"polarization", "--kM", "1e10"}).code == 2);
  CHECK(run({"polarization", "--kM", "1e10", "--x", "0,0,0"}).code == 2);
  CHECK(run({"polarization", "--kM", "1e10", "--x", "1,2"}).code == 2);
  CHECK(run({"polarization", "--kM", "1e10", "--r", "1e-9", "--dipole", "0,0,1"}).code == 2);
}

TEST_CASE("ensemble-check") {
  const double k = 0.5 / kConstants.a0;
  const auto cfg = write_pair_config(1.5 / k);
  const std::string kM = cli::format_number(k);
  const Run r = run({"ensemble-check", "--config", cfg.string(), "--kM", kM, "--species", "Rb"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  REQUIRE(doc["violations"].size() == 1);
  CHECK(doc["violations"][0]["first"] == 0);
  CHECK(doc["violations"][0]["second"] == 1);
  CHECK(doc["rows"][0]["violation_count"] == 1);
  CHECK(doc["rows"][0]["figure_of_merit"].get<double>() > 0.0);

  const auto far_cfg = write_pair_config(6.0 / k);
  const Run o = run({"ensemble-check", "--config", far_cfg.string(), "--kM", kM, "--overlap", "0", "1"});
  REQUIRE(o.code == 0);
  const Json orow = Json::parse(o.out)["rows"][0];
  CHECK(orow["overlap_bound_J"].get<double>() > 0.0);
  CHECK(std::abs(orow["overlap_energy_J"].get<double>()) <=
        orow["overlap_bound_J"].get<double>() + orow["overlap_error_estimate_J"].get<double>());
  CHECK(orow["within_bound"].get<bool>());

  const Run csv = run({"ensemble-check", "--config", far_cfg.string(), "--kM", kM, "--format", "csv"});
  CHECK(lines(csv.out).size() == 2);

  CHECK(run({"ensemble-check", "--config", far_cfg.string(), "--kM", kM, "--overlap", "0", "7"}).code == 2);
  CHECK(run({"ensemble-check", "--config", temp_path("missing.json").string(), "--kM", kM}).code == 2);
  std::filesystem::remove(cfg);
  std::filesystem::remove(far_cfg);
}

TEST_CASE("usage errors and help") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"critical-density", "--bogus"}).code == 2);
  const Run help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("dicke-scan") != std::string::npos);
}

TEST_CASE("output files and determinism") {
  const auto path = temp_path("scan.csv");
  const std::vector<std::string> args{"dicke-scan", "--N", "8", "--F", "0:2:0.25", "--format", "csv"};
  const Run a = run(args);
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"--output", path.string(), "--threads", "3"});
  const Run b = run(to_file);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(b.out.empty());
  CHECK(slurp(path) == a.out);
  CHECK(run(args).out == a.out);
  std::filesystem::remove(path);

  CHECK(run({"critical-density", "--output", "/nonexistent_dir/x.json"}).code == 2);
}

TEST_CASE("the installed executable behaves like the library entry point") {
  const auto out1 = temp_path("exe1.json");
  const auto out2 = temp_path("exe2.json");
  const std::string exe = ULTRASTRONG_CLI_PATH;
  const std::string cmd = exe + " cutoff-window --kM-inv-bohr 0.5 --species H --output ";
  REQUIRE(std::system((cmd + out1.string()).c_str()) == 0);
  REQUIRE(std::system((cmd + out2.string()).c_str()) == 0);
  CHECK(slurp(out1) == slurp(out2));
  CHECK(slurp(out1) == run({"cutoff-window", "--kM-inv-bohr", "0.5", "--species", "H"}).out);
  CHECK(WEXITSTATUS(std::system((exe + " cutoff-window --kM 1 --species Nope 2>/dev/null").c_str())) == 2);
  std::filesystem::remove(out1);
  std::filesystem::remove(out2);
}

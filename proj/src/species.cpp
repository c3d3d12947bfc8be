#include "ultrastrong/species.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ultrastrong/constants.hpp"
#include "ultrastrong/coupling.hpp"

namespace ultrastrong {

extern const char* const kEmbeddedSpeciesCsv;  // generated from data/species.csv

namespace {

constexpr std::array<std::string_view, 5> kColumns = {
    "name", "mass_amu", "lambda_nm", "gamma_fwhm_MHz", "crystalline_density_per_m3"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void fail(const std::string& where, std::string_view field, const std::string& why) {
  throw RegistryError(where + ", field " + std::string(field) + ": " + why);
}

double parse_positive(std::string_view text, const std::string& where, std::string_view field) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    fail(where, field, "not a number: '" + std::string(text) + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    fail(where, field, "must be positive, got " + std::string(text));
  }
  return value;
}

struct RawRow {
  std::string name;
  double mass_amu;
  double lambda_nm;
  double gamma_fwhm_MHz;
  std::optional<double> crystalline_density;
};

AtomSpecies to_species(const RawRow& row) {
  AtomSpecies s;
  s.name = row.name;
  s.mass = mass_amu_to_kg(row.mass_amu);
  s.lambda_A = row.lambda_nm * 1e-9;
  // FWHM in MHz (ordinary frequency) -> HWHM angular: gamma = 2 pi f / 2.
  s.gamma_hwhm = std::numbers::pi * row.gamma_fwhm_MHz * 1e6;
  s.crystalline_density = row.crystalline_density;
  return s;
}

void check_unique(const std::vector<AtomSpecies>& species, const std::string& name,
                  const std::string& where) {
  const bool dup = std::any_of(species.begin(), species.end(),
                               [&](const AtomSpecies& s) { return s.name == name; });
  if (dup) fail(where, "name", "duplicate species '" + name + "'");
}

}  // namespace

double AtomSpecies::omega_A() const { return wavelength_to_omega(lambda_A); }

double AtomSpecies::quality_factor() const { return ultrastrong::quality_factor(omega_A(), gamma_hwhm); }

double AtomSpecies::transition_dipole() const {
  return dipole ? *dipole : dipole_from_linewidth(omega_A(), gamma_hwhm);
}

SpeciesRegistry::SpeciesRegistry(std::vector<AtomSpecies> species, std::vector<std::string> warnings)
    : species_(std::move(species)), warnings_(std::move(warnings)) {}

const AtomSpecies* SpeciesRegistry::find(std::string_view name) const {
  for (const auto& s : species_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const AtomSpecies& SpeciesRegistry::at(std::string_view name) const {
  if (const auto* s = find(name)) return *s;
  throw std::out_of_range("unknown species '" + std::string(name) + "'");
}

SpeciesRegistry parse_species_csv(std::string_view text) {
  std::vector<AtomSpecies> species;
  std::vector<std::string> warnings;
  bool have_header = false;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto line = trim(text.substr(start, nl == std::string_view::npos ? nl : nl - start));
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;

    const auto cells = split(line, ',');
    const std::string where = "line " + std::to_string(line_no);
    if (!have_header) {
      if (cells.size() != kColumns.size() || !std::equal(cells.begin(), cells.end(), kColumns.begin())) {
        throw RegistryError(where + ": expected header 'name,mass_amu,lambda_nm,gamma_fwhm_MHz,"
                                    "crystalline_density_per_m3'");
      }
      have_header = true;
      continue;
    }
    if (cells.size() != kColumns.size()) {
      throw RegistryError(where + ": expected " + std::to_string(kColumns.size()) + " fields, got " +
                          std::to_string(cells.size()));
    }
    if (cells[0].empty()) fail(where, "name", "empty");
    RawRow row{std::string(cells[0]), parse_positive(cells[1], where, kColumns[1]),
               parse_positive(cells[2], where, kColumns[2]),
               parse_positive(cells[3], where, kColumns[3]), std::nullopt};
    if (!cells[4].empty()) row.crystalline_density = parse_positive(cells[4], where, kColumns[4]);
    check_unique(species, row.name, where);
    species.push_back(to_species(row));
  }
  if (species.empty()) warnings.emplace_back("species registry is empty");
  return SpeciesRegistry(std::move(species), std::move(warnings));
}

SpeciesRegistry parse_species_json(std::string_view text) {
  std::vector<AtomSpecies> species;
  std::vector<std::string> warnings;
  if (trim(text).empty()) {
    warnings.emplace_back("species registry is empty");
    return SpeciesRegistry({}, std::move(warnings));
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RegistryError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw RegistryError("registry JSON must be an array of species objects");
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    const std::string where = "entry " + std::to_string(i);
    if (!obj.is_object()) throw RegistryError(where + ": not an object");
    auto number = [&](std::string_view key) -> double {
      const auto it = obj.find(std::string(key));
      if (it == obj.end() || !it->is_number()) fail(where, key, "missing or not a number");
      const double v = it->get<double>();
      if (!(v > 0.0) || !std::isfinite(v)) fail(where, key, "must be positive");
      return v;
    };
    const auto name_it = obj.find("name");
    if (name_it == obj.end() || !name_it->is_string() || name_it->get<std::string>().empty()) {
      fail(where, "name", "missing or not a string");
    }
    RawRow row{name_it->get<std::string>(), number(kColumns[1]), number(kColumns[2]),
               number(kColumns[3]), std::nullopt};
    const auto cd = obj.find(std::string(kColumns[4]));
    if (cd != obj.end() && !cd->is_null()) row.crystalline_density = number(kColumns[4]);
    check_unique(species, row.name, where);
    species.push_back(to_species(row));
  }
  if (species.empty()) warnings.emplace_back("species registry is empty");
  return SpeciesRegistry(std::move(species), std::move(warnings));
}

SpeciesRegistry load_species_registry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError("cannot open registry file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.extension() == ".json") return parse_species_json(text);
  return parse_species_csv(text);
}

const SpeciesRegistry& default_registry() {
  static const SpeciesRegistry registry = parse_species_csv(kEmbeddedSpeciesCsv);
  return registry;
}

double crystalline_comparison(const AtomSpecies& species) {
  if (!species.crystalline_density) {
    throw RegistryError("species '" + species.name + "' has no crystalline density");
  }
  return critical_density(species.lambda_A, species.quality_factor()) / *species.crystalline_density;
}

}  // namespace ultrastrong

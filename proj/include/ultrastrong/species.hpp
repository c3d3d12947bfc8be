#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ultrastrong {

/// One effective two-level transition of an atomic species, SI units.
struct AtomSpecies {
  std::string name;
  double lambda_A = 0.0;    // m
  double gamma_hwhm = 0.0;  // rad/s, half width at half maximum
  double mass = 0.0;        // kg
  std::optional<double> crystalline_density;  // 1/m^3
  std::optional<double> dipole;               // C m; derived from the linewidth when absent

  double omega_A() const;
  double quality_factor() const;
  double transition_dipole() const;
};

/// Schema or value problem in a registry file; message names row and field.
class RegistryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SpeciesRegistry {
 public:
  SpeciesRegistry() = default;
  SpeciesRegistry(std::vector<AtomSpecies> species, std::vector<std::string> warnings);

  const std::vector<AtomSpecies>& species() const noexcept { return species_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool empty() const noexcept { return species_.empty(); }
  std::size_t size() const noexcept { return species_.size(); }

  /// nullptr when absent.
  const AtomSpecies* find(std::string_view name) const;
  /// Throws std::out_of_range when absent.
  const AtomSpecies& at(std::string_view name) const;

 private:
  std::vector<AtomSpecies> species_;
  std::vector<std::string> warnings_;
};

/// CSV with header name,mass_amu,lambda_nm,gamma_fwhm_MHz,crystalline_density_per_m3.
/// Lines starting with '#' and blank lines are ignored. The linewidth is
/// converted from FWHM in MHz (ordinary frequency) to HWHM in rad/s.
SpeciesRegistry parse_species_csv(std::string_view text);

/// JSON array of objects with the same keys as the CSV columns.
SpeciesRegistry parse_species_json(std::string_view text);

/// Dispatches on the extension (.json, otherwise CSV).
SpeciesRegistry load_species_registry(const std::filesystem::path& path);

/// Registry compiled into the library from data/species.csv.
const SpeciesRegistry& default_registry();

/// critical density / crystalline density. Throws RegistryError when the
/// species has no crystalline density.
double crystalline_comparison(const AtomSpecies& species);

}  // namespace ultrastrong

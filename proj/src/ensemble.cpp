#include "ultrastrong/ensemble.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ultrastrong/constants.hpp"
#include "ultrastrong/quadrature.hpp"

namespace ultrastrong {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTruncationRadius = 12.0;  // in units of 1/k_M

Vec3 read_vec3(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(where + ": expected [x, y, z]");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(where + ": component " + std::to_string(i) + " is not a number");
    v[i] = j[i].get<double>();
  }
  if (!v.allFinite()) throw std::invalid_argument(where + ": non-finite component");
  return v;
}

using Diag2 = Eigen::Vector2d;  // {zz, (xx + yy)/2}

Diag2 diag_of(const Tensor3& t) { return {t(2, 2), 0.5 * (t(0, 0) + t(1, 1))}; }

}  // namespace

AtomConfiguration::AtomConfiguration(std::vector<Vec3> positions, std::vector<Vec3> dipoles, double volume)
    : positions_(std::move(positions)), dipoles_(std::move(dipoles)), volume_(volume) {
  if (positions_.size() != dipoles_.size()) {
    throw std::invalid_argument("configuration: " + std::to_string(positions_.size()) + " positions but " +
                                std::to_string(dipoles_.size()) + " dipoles");
  }
  if (!(volume_ > 0.0) || !std::isfinite(volume_)) throw std::invalid_argument("configuration: volume must be positive");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (!positions_[i].allFinite() || !dipoles_[i].allFinite()) {
      throw std::invalid_argument("configuration: atom " + std::to_string(i) + " has non-finite data");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (positions_[i] == positions_[j]) {
        throw std::invalid_argument("configuration: atoms " + std::to_string(j) + " and " + std::to_string(i) +
                                    " coincide");
      }
    }
  }
}

AtomConfiguration parse_configuration_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("configuration: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("configuration: expected a JSON object");
  for (const char* key : {"positions_m", "dipoles_C_m", "volume_m3"}) {
    if (!doc.contains(key)) throw std::invalid_argument(std::string("configuration: missing key '") + key + "'");
  }
  const auto& pos = doc["positions_m"];
  const auto& dip = doc["dipoles_C_m"];
  if (!pos.is_array() || !dip.is_array()) throw std::invalid_argument("configuration: positions and dipoles must be arrays");
  if (!doc["volume_m3"].is_number()) throw std::invalid_argument("configuration: volume_m3 must be a number");
  std::vector<Vec3> positions;
  std::vector<Vec3> dipoles;
  for (std::size_t i = 0; i < pos.size(); ++i) positions.push_back(read_vec3(pos[i], "positions_m[" + std::to_string(i) + "]"));
  for (std::size_t i = 0; i < dip.size(); ++i) dipoles.push_back(read_vec3(dip[i], "dipoles_C_m[" + std::to_string(i) + "]"));
  return AtomConfiguration(std::move(positions), std::move(dipoles), doc["volume_m3"].get<double>());
}

AtomConfiguration simple_cubic_configuration(int nx, int ny, int nz, double spacing, const Vec3& dipole) {
  if (nx < 1 || ny < 1 || nz < 1) throw std::invalid_argument("lattice extents must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  std::vector<Vec3> positions;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k) positions.emplace_back(i * spacing, j * spacing, k * spacing);
  std::vector<Vec3> dipoles(positions.size(), dipole);
  const double volume = static_cast<double>(positions.size()) * spacing * spacing * spacing;
  return AtomConfiguration(std::move(positions), std::move(dipoles), volume);
}

double min_pairwise_distance(const AtomConfiguration& c) {
  if (c.size() < 2) throw std::invalid_argument("min_pairwise_distance: need at least two atoms");
  double best = std::numeric_limits<double>::infinity();
  const auto& x = c.positions();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) best = std::min(best, (x[i] - x[j]).norm());
  return best;
}

double intimacy_pair_threshold(Cutoff cutoff) { return 2.0 / cutoff.k_M(); }

std::vector<std::pair<std::size_t, std::size_t>> intimacy_violations(const AtomConfiguration& c, Cutoff cutoff) {
  const double threshold = intimacy_pair_threshold(cutoff);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const auto& x = c.positions();
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if ((x[i] - x[j]).norm() < threshold) out.emplace_back(i, j);
  return out;
}

OverlapTensor overlap_tensor_numeric(Cutoff cutoff, double separation, double tol) {
  if (!(separation > 0.0)) throw std::invalid_argument("overlap: separation must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("overlap: tol must be positive");
  const double kappa = cutoff.k_M();
  const double R = separation;
  const double half = 0.5 * R;
  const Vec3 atom_b(0.0, 0.0, R);
  const Tensor3 kb_at_a = residual_kernel(cutoff, -atom_b);
  const double kb_norm = kb_at_a.norm();
  const double r_max = half + kTruncationRadius / kappa;

  // Order of magnitude of the result, used to turn relative targets into
  // absolute floors where the angular integrand cancels.
  const double scale = overlap_energy_bound(1.0, 1.0, cutoff, R) * kConstants.eps0;

  QuadOptions inner_opt;
  inner_opt.rel_tol = 0.01 * tol;
  inner_opt.abs_tol = 0.01 * tol * scale / r_max;
  QuadOptions outer_opt;
  outer_opt.rel_tol = tol;
  outer_opt.abs_tol = 0.1 * tol * scale;

  // Integrates the pair product over the half space z < R/2 nearest atom A
  // (the other half follows by reflection), in spherical coordinates centred
  // on A. Inside the ball r < R/2 the constant K_B(A) is subtracted so that
  // the 1/r^3 singularity of K_A meets a factor vanishing at A.
  auto shell = [&](double r, bool subtract) -> Diag2 {
    const double theta_min = r <= half ? 0.0 : std::acos(std::min(1.0, half / r));
    auto angular = [&](double theta) -> Diag2 {
      const Vec3 x(r * std::sin(theta), 0.0, r * std::cos(theta));
      Tensor3 kb = residual_kernel(cutoff, x - atom_b);
      if (subtract) kb -= kb_at_a;
      return diag_of(residual_kernel(cutoff, x) * kb) * std::sin(theta);
    };
    // Rounding in K_B - K_B(A) is amplified by the 1/r^3 of K_A near A.
    QuadOptions opt = inner_opt;
    if (subtract) {
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * kb_norm *
                           residual_kernel(cutoff, Vec3(0.0, 0.0, r)).norm() * kPi;
      opt.abs_tol = std::max(opt.abs_tol, noise);
    }
    auto res = integrate(angular, theta_min, kPi, opt);
    if (!res.converged) throw ConvergenceError("overlap: angular quadrature", res.error);
    return res.value * (2.0 * kPi * r * r);
  };

  auto inside = integrate([&](double r) { return shell(r, true); }, 0.0, half, outer_opt);
  auto outside_near = integrate([&](double r) { return shell(r, false); }, half, std::max(R, half + 2.0 / kappa),
                                outer_opt);
  auto outside_far = integrate([&](double r) { return shell(r, false); }, std::max(R, half + 2.0 / kappa), r_max,
                               outer_opt);
  for (const auto* part : {&inside, &outside_near, &outside_far}) {
    if (!part->converged) throw ConvergenceError("overlap: radial quadrature", part->error);
  }

  // Ball integral of K_A is isotropic: (2/3)[1 - (1 + k s) e^{-k s}] id with s = R/2.
  const double ks = kappa * half;
  const double ball = (2.0 / 3.0) * (1.0 - (1.0 + ks) * std::exp(-ks));
  const Diag2 subtracted = diag_of(ball * kb_at_a);

  const Diag2 total = 2.0 * (inside.value + subtracted + outside_near.value + outside_far.value);
  OverlapTensor out;
  out.parallel = total[0];
  out.perpendicular = total[1];
  out.error_estimate = 2.0 * (inside.error + outside_near.error + outside_far.error);
  return out;
}

double overlap_energy_bound(double dipole_a, double dipole_b, Cutoff cutoff, double separation) {
  const double k = cutoff.k_M();
  const double u = k * separation;
  const double poly = 3.0 * (1.0 + 2.0 / u + 2.0 / (u * u) + 2.0 / (u * u * u));
  return std::abs(dipole_a * dipole_b) * k * k * k / (24.0 * kPi * kConstants.eps0) * poly * std::exp(-u);
}

OverlapReport residual_overlap_energy(const AtomConfiguration& c, std::size_t first, std::size_t second,
                                      Cutoff cutoff, double tol) {
  if (first >= c.size() || second >= c.size()) throw std::out_of_range("overlap: atom index out of range");
  if (first == second) throw std::invalid_argument("overlap: pair must name two different atoms");
  const Vec3 sep = c.positions()[second] - c.positions()[first];
  const double R = sep.norm();
  const Vec3 s = sep / R;
  const Vec3& da = c.dipoles()[first];
  const Vec3& db = c.dipoles()[second];
  const OverlapTensor m = overlap_tensor_numeric(cutoff, R, tol);

  OverlapReport out;
  out.first = first;
  out.second = second;
  out.separation = R;
  out.overlap_energy =
      (m.perpendicular * da.dot(db) + (m.parallel - m.perpendicular) * da.dot(s) * db.dot(s)) / kConstants.eps0;
  out.error_estimate = m.error_estimate * da.norm() * db.norm() / kConstants.eps0;
  out.bound = overlap_energy_bound(da.norm(), db.norm(), cutoff, R);
  return out;
}

FigureOfMeritReport config_figure_of_merit(const AtomConfiguration& c, const AtomSpecies& species) {
  return fom_density_Q(c.density(), species.lambda_A, species.quality_factor());
}

double max_packing_density(Cutoff cutoff) {
  const double h = 0.5 * cutoff.k_M();
  return h * h * h;
}

}  // namespace ultrastrong

#include "quadcover/channel.hpp"

#include <cmath>

#include "quadcover/placement.hpp"

namespace quadcover::channel {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRadToDeg = 180.0 / kPi;

double free_space_const_db(double freq_hz) {
  return 20.0 * std::log10(4.0 * kPi * freq_hz / kSpeedOfLight);
}

}  // namespace

void Environment::validate() const {
  if (!(xi_los >= 0.0)) throw ValidationError("environment: xi_los must be >= 0");
  if (!(xi_nlos >= xi_los)) throw ValidationError("environment: xi_nlos must be >= xi_los");
  if (!(eta > 0.0)) throw ValidationError("environment: eta must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("environment: kappa must be > 0");
}

const std::vector<Environment>& environment_presets() {
  static const std::vector<Environment> presets = {
      {"suburban", 0.1, 21.0, 4.88, 0.43},
      {"urban", 1.0, 20.0, 9.61, 0.16},
      {"dense-urban", 1.6, 23.0, 12.08, 0.11},
      {"highrise-urban", 2.3, 34.0, 27.23, 0.08},
  };
  return presets;
}

const Environment& environment_preset(std::string_view name) {
  for (const auto& env : environment_presets())
    if (env.name == name) return env;
  throw UnknownPresetError("unknown environment preset: " + std::string(name));
}

void LinkBudget::validate() const {
  if (!(freq_hz > 0.0)) throw ValidationError("link: freq_hz must be > 0");
  if (!(m >= 0.0)) throw ValidationError("link: m must be >= 0");
  if (!std::isfinite(pt_dbm) || !std::isfinite(pn_dbm) || !std::isfinite(g0_db) ||
      !std::isfinite(gr_db))
    throw ValidationError("link: powers and gains must be finite");
}

double los_probability(double phi_deg, const Environment& env) {
  if (!(phi_deg > 0.0 && phi_deg <= 90.0))
    throw OutOfRangeError("los_probability: elevation angle must lie in (0, 90] degrees");
  return 1.0 / (1.0 + env.eta * std::exp(-env.kappa * (phi_deg - env.eta)));
}

PathLossPair path_loss_components(double d, const LinkBudget& link, const Environment& env) {
  if (!(d > 0.0)) throw OutOfRangeError("path_loss_components: distance must be > 0");
  const double base = 20.0 * std::log10(d) + free_space_const_db(link.freq_hz);
  return {base + env.xi_los, base + env.xi_nlos};
}

double max_path_loss_db(double a, double b, double h, const LinkBudget& link,
                        const Environment& env) {
  if (!(a >= b) || !(b > 0.0) || !(h > 0.0))
    throw InvalidAxesError("max_path_loss: requires a >= b > 0 and H > 0");
  const double far = (a * b + std::sqrt((b * b + h * h) * (a * a - b * b))) / b;  // x0 + a
  const double phi_deg = kRadToDeg * std::atan(h / far);
  const double p_los = 1.0 / (1.0 + env.eta * std::exp(-env.kappa * (phi_deg - env.eta)));
  return (env.xi_los - env.xi_nlos) * p_los + 10.0 * std::log10(h * h + far * far) +
         free_space_const_db(link.freq_hz) + env.xi_nlos;
}

double antenna_gain_db(double theta_rad, double g0_db, double m) {
  if (!(std::abs(theta_rad) < kPi / 2.0))
    throw OutOfRangeError("antenna_gain: |theta| must be below pi/2");
  if (m == 0.0) return g0_db;
  return g0_db + 10.0 * m * std::log10(std::cos(theta_rad));
}

double min_snr_db(double a, double b, double h, const LinkBudget& link,
                  const Environment& env) {
  const double theta = placement::beam_angles(a, b, h).theta;
  return link.pt_dbm + antenna_gain_db(theta, link.g0_db, link.m) + link.gr_db -
         max_path_loss_db(a, b, h, link, env) - link.pn_dbm;
}

}  // namespace quadcover::channel

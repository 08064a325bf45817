#include "quadcover/energy.hpp"

#include <cmath>
#include <string>

#include "quadcover/placement.hpp"

namespace quadcover::energy {

namespace {

double blade_profile_power(const PropulsionParams& p) {
  return p.delta / 8.0 * p.rho * p.varsigma * p.rotor_area * p.tip_speed * p.tip_speed *
         p.tip_speed;
}

double induced_power(const PropulsionParams& p) {
  return (1.0 + p.k_ind) * std::pow(p.weight_n, 1.5) / std::sqrt(2.0 * p.rho * p.rotor_area);
}

}  // namespace

void PropulsionParams::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(delta)) throw ValidationError("propulsion: delta must be > 0");
  if (!positive(rho)) throw ValidationError("propulsion: rho must be > 0");
  if (!positive(varsigma)) throw ValidationError("propulsion: varsigma must be > 0");
  if (!positive(rotor_area)) throw ValidationError("propulsion: rotor_area must be > 0");
  if (!positive(tip_speed)) throw ValidationError("propulsion: tip_speed must be > 0");
  if (!(k_ind >= 0.0)) throw ValidationError("propulsion: k_ind must be >= 0");
  if (!positive(weight_n)) throw ValidationError("propulsion: weight_n must be > 0");
  if (!positive(u0)) throw ValidationError("propulsion: u0 must be > 0");
  if (!positive(drag_ratio)) throw ValidationError("propulsion: drag_ratio must be > 0");
  if (!positive(u_fwd)) throw ValidationError("propulsion: u_fwd must be > 0");
  if (!positive(u_to)) throw ValidationError("propulsion: u_to must be > 0");
}

void MissionSpec::validate() const {
  if (!(bandwidth_hz > 0.0)) throw ValidationError("mission: bandwidth_hz must be > 0");
  if (!(payload_bits > 0.0)) throw ValidationError("mission: payload_bits must be > 0");
  if (!(pt_watts > 0.0)) throw ValidationError("mission: pt_watts must be > 0");
}

TransitModel transit_model_from_string(std::string_view s) {
  if (s == "horizontal") return TransitModel::Horizontal;
  if (s == "slant") return TransitModel::Slant;
  if (s == "slant-over-b") return TransitModel::SlantOverB;
  throw ValidationError("transit_model: expected horizontal, slant or slant-over-b, got '" +
                        std::string(s) + "'");
}

std::string_view to_string(TransitModel m) {
  switch (m) {
    case TransitModel::Horizontal: return "horizontal";
    case TransitModel::Slant: return "slant";
    case TransitModel::SlantOverB: return "slant-over-b";
  }
  return "horizontal";
}

double hover_power_w(const PropulsionParams& p) {
  return blade_profile_power(p) + induced_power(p);
}

double forward_power_w(const PropulsionParams& p) {
  const double z1 = blade_profile_power(p);
  const double z2 = induced_power(p);
  const double u2 = p.u_fwd * p.u_fwd;
  const double u0_2 = p.u0 * p.u0;
  const double profile = z1 * (1.0 + 3.0 * u2 / (p.tip_speed * p.tip_speed));
  const double induced =
      z2 * std::sqrt(std::sqrt(1.0 + u2 * u2 / (4.0 * u0_2 * u0_2)) - u2 / (2.0 * u0_2));
  const double parasite =
      0.5 * p.drag_ratio * p.rho * p.varsigma * p.rotor_area * u2 * p.u_fwd;
  return profile + induced + parasite;
}

double vto_power_w(const PropulsionParams& p) {
  return blade_profile_power(p) + p.weight_n * p.u_to / 2.0 +
         p.weight_n / 2.0 *
             std::sqrt(p.u_to * p.u_to + 2.0 * p.weight_n / (p.rho * p.rotor_area));
}

double total_energy_j(double a, double b, double h, const channel::LinkBudget& link,
                      const channel::Environment& env, const PropulsionParams& p,
                      const MissionSpec& mission, TransitModel model) {
  const double snr_db = channel::min_snr_db(a, b, h, link, env);
  const double snr_lin = std::pow(10.0, snr_db / 10.0);
  const double rate = mission.bandwidth_hz * std::log2(1.0 + snr_lin);
  if (!(rate > 0.0))
    throw NonPositiveRateError("total_energy: boundary SNR gives a nonpositive rate");

  const double x0 = placement::center_offset(a, b, h);
  double transit_time = 0.0;
  switch (model) {
    case TransitModel::Horizontal:
      transit_time = x0 / p.u_fwd;
      break;
    case TransitModel::Slant:
      transit_time = std::hypot(h, x0) / p.u_fwd;
      break;
    case TransitModel::SlantOverB:
      transit_time =
          std::sqrt(h * h * b * b + (b * b + h * h) * (a * a - b * b)) / (p.u_fwd * b * b);
      break;
  }

  return vto_power_w(p) * h / p.u_to + forward_power_w(p) * transit_time +
         (hover_power_w(p) + mission.pt_watts) * mission.payload_bits / rate;
}

}  // namespace quadcover::energy

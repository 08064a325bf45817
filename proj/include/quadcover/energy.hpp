#pragma once

#include <string_view>

#include "quadcover/channel.hpp"
#include "quadcover/errors.hpp"

namespace quadcover::energy {

/// Rotary-wing propulsion constants.
struct PropulsionParams {
  double delta = 0.0;       ///< profile drag coefficient
  double rho = 0.0;         ///< air density (kg/m^3)
  double varsigma = 0.0;    ///< rotor solidity
  double rotor_area = 0.0;  ///< rotor disc area (m^2)
  double tip_speed = 0.0;   ///< blade tip speed (m/s)
  double k_ind = 0.0;       ///< induced-power correction
  double weight_n = 0.0;    ///< UAV weight (N)
  double u0 = 0.0;          ///< mean rotor induced velocity in hover (m/s)
  double drag_ratio = 0.0;  ///< fuselage drag ratio
  double u_fwd = 0.0;       ///< forward level-flight speed (m/s)
  double u_to = 0.0;        ///< vertical takeoff speed (m/s)

  void validate() const;  ///< throws ValidationError
};

struct MissionSpec {
  double bandwidth_hz = 0.0;
  double payload_bits = 0.0;  ///< throughput requirement (bits)
  double pt_watts = 0.0;      ///< transmit power, linear watts

  void validate() const;
};

/// Transit leg between the takeoff point above the footprint center and the
/// hover position:
///   horizontal   - climb to H, then fly the offset x0 level (default)
///   slant        - straight line sqrt(H^2 + x0^2)
///   slant-over-b - the composite form sqrt(H^2 b^2 + (b^2+H^2)(a^2-b^2))/b^2,
///                  i.e. the slant distance divided by b (kept selectable for
///                  reproduction studies)
enum class TransitModel { Horizontal, Slant, SlantOverB };

TransitModel transit_model_from_string(std::string_view s);
std::string_view to_string(TransitModel m);

/// Blade profile power Z1 plus induced power Z2.
double hover_power_w(const PropulsionParams& p);

/// Forward level-flight power at speed u_fwd.
double forward_power_w(const PropulsionParams& p);

/// Vertical takeoff power at climb speed u_to.
double vto_power_w(const PropulsionParams& p);

/// Total mission energy: vertical takeoff to H, transit, then hover while
/// transmitting payload_bits at the Shannon rate of the boundary SNR.
/// Throws NonPositiveRateError when the achievable rate vanishes.
double total_energy_j(double a, double b, double h, const channel::LinkBudget& link,
                      const channel::Environment& env, const PropulsionParams& p,
                      const MissionSpec& mission, TransitModel model);

}  // namespace quadcover::energy

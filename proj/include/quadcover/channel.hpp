#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "quadcover/errors.hpp"

namespace quadcover::channel {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Propagation-class parameters: mean excess losses and the sigmoid shape of
/// the LoS probability. eta and kappa act on elevation angles in degrees.
struct Environment {
  std::string name;
  double xi_los = 0.0;   ///< mean excess LoS loss (dB)
  double xi_nlos = 0.0;  ///< mean excess NLoS loss (dB)
  double eta = 0.0;      ///< sigmoid parameter (degrees domain)
  double kappa = 0.0;    ///< sigmoid parameter (1/degree)

  void validate() const;  ///< throws ValidationError
};

/// Presets: suburban, urban, dense-urban, highrise-urban.
const Environment& environment_preset(std::string_view name);
const std::vector<Environment>& environment_presets();

struct LinkBudget {
  double freq_hz = 0.0;
  double pt_dbm = 0.0;  ///< transmit power
  double pn_dbm = 0.0;  ///< noise power
  double g0_db = 0.0;   ///< peak transmit antenna gain
  double m = 0.0;       ///< directivity factor of the cos^m pattern
  double gr_db = 0.0;   ///< receiver gain

  void validate() const;
};

/// P(LoS) = 1 / (1 + eta exp(-kappa (phi_deg - eta))), phi_deg in (0, 90].
double los_probability(double phi_deg, const Environment& env);

struct PathLossPair {
  double los_db = 0.0;
  double nlos_db = 0.0;
};

/// 20 log10(d) + 20 log10(4 pi f / c) + xi for the LoS and NLoS excess losses.
PathLossPair path_loss_components(double d, const LinkBudget& link, const Environment& env);

/// Path loss at the far boundary of the (a, b) footprint seen from altitude H,
/// as the single unified expression (sigmoid-weighted excess-loss difference
/// plus the distance and free-space terms). Matches the composed
/// P(LoS)-weighted evaluation to well below 1e-9 dB.
double max_path_loss_db(double a, double b, double h, const LinkBudget& link,
                        const Environment& env);

/// dB gain of the cos^m pattern: g0_db + 10 m log10(cos theta), |theta| < pi/2.
double antenna_gain_db(double theta_rad, double g0_db, double m);

/// Boundary SNR: pt + G(theta) + gr - PL_max - pn, with theta the beam
/// semi-apex angle of the footprint.
double min_snr_db(double a, double b, double h, const LinkBudget& link,
                  const Environment& env);

}  // namespace quadcover::channel

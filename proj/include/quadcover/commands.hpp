#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "quadcover/scenario.hpp"

namespace quadcover::cli {

using Json = nlohmann::ordered_json;

enum class Mode { Inscribed, Circumscribed };
enum class ObjectiveKind { PathLoss, Snr, Energy };

Mode mode_from_string(std::string_view s);
ObjectiveKind objective_from_string(std::string_view s);
std::string_view to_string(Mode m);
std::string_view to_string(ObjectiveKind o);

/// Footprint ellipse report: canonical conic coefficients, geometric
/// parameters, area ratios and construction diagnostics.
Json ellipse_report(const Scenario& sc, Mode mode);

/// Optimal-altitude report for one objective and footprint mode.
Json altitude_report(const Scenario& sc, ObjectiveKind objective, Mode mode);

/// Altitude sweep, one row per altitude. Columns:
/// H_m,pl_max_db,snr_min_db,energy_J,psi_deg,theta_deg,phi_deg,x0_m,d_m,p_los
/// The energy column is left empty where the achievable rate is nonpositive.
std::string sweep_csv(const Scenario& sc, Mode mode, double h_min, double h_max, int steps);
Json sweep_json(const Scenario& sc, Mode mode, double h_min, double h_max, int steps);

/// Consolidated report: both ellipses, the altitude table over all
/// environment presets, and energy minima for the configured payload list.
Json full_report(const Scenario& sc);

/// Two-column key,value flattening of a report, for --format csv.
std::string flatten_csv(const Json& j);

/// Human-readable digest of a report, for terminal output.
std::string human_summary(const Json& j);

std::string format_double(double v);  ///< locale-independent shortest form

}  // namespace quadcover::cli

#pragma once

#include "quadcover/errors.hpp"

namespace quadcover::placement {

/// Beam geometry of a UAV at altitude H producing an elliptical footprint
/// with semi-axes (a, b). Angles in radians except `phi_deg`.
struct BeamGeometry {
  double h = 0.0;        ///< altitude (m)
  double psi = 0.0;      ///< beam-axis tilt vs ground normal
  double theta = 0.0;    ///< semi-apex angle of the beam cone
  double x0 = 0.0;       ///< horizontal offset UAV projection -> ellipse center (m)
  double phi_deg = 0.0;  ///< elevation angle of the far boundary, degrees
  double d = 0.0;        ///< slant distance to the far boundary (m)
};

struct BeamAngles {
  double psi = 0.0;
  double theta = 0.0;
};

/// psi = arccos(sqrt(b^2 H^2 + b^4) / sqrt(a^2 H^2 + b^4)),
/// theta = arcsin(b^2 / sqrt(a^2 H^2 + b^4)).
/// Requires a >= b > 0 and H > 0 (InvalidAxesError otherwise).
BeamAngles beam_angles(double a, double b, double h);

/// Unified offset x0 = sqrt((b^2 + H^2)(a^2 - b^2)) / b. Coincides with the
/// piecewise forms a -+ H tan(theta - psi) on both branches.
double center_offset(double a, double b, double h);

/// Elevation angle (degrees) of the far footprint boundary:
/// atan(H / (x0 + a)) converted to degrees.
double boundary_elevation_deg(double a, double b, double h);

/// Slant distance d = sqrt(H^2 + (x0 + a)^2) to the far boundary.
double boundary_distance(double a, double b, double h);

/// All of the above in one evaluation.
BeamGeometry beam_geometry(double a, double b, double h);

}  // namespace quadcover::placement

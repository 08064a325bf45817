#include "quadcover/placement.hpp"

#include <cmath>

namespace quadcover::placement {

namespace {

constexpr double kRadToDeg = 57.29577951308232;

void check_axes(double a, double b, double h) {
  if (!(a >= b) || !(b > 0.0) || !std::isfinite(a))
    throw InvalidAxesError("placement: requires a >= b > 0");
  if (!(h > 0.0) || !std::isfinite(h))
    throw InvalidAxesError("placement: requires H > 0");
}

}  // namespace

BeamAngles beam_angles(double a, double b, double h) {
  check_axes(a, b, h);
  const double root_big = std::sqrt(a * a * h * h + b * b * b * b);
  const double root_small = std::sqrt(b * b * h * h + b * b * b * b);
  BeamAngles r;
  r.psi = std::acos(std::fmin(1.0, root_small / root_big));
  r.theta = std::asin(std::fmin(1.0, b * b / root_big));
  return r;
}

double center_offset(double a, double b, double h) {
  check_axes(a, b, h);
  return std::sqrt((b * b + h * h) * (a * a - b * b)) / b;
}

double boundary_elevation_deg(double a, double b, double h) {
  check_axes(a, b, h);
  return kRadToDeg * std::atan(h / (center_offset(a, b, h) + a));
}

double boundary_distance(double a, double b, double h) {
  check_axes(a, b, h);
  return std::hypot(h, center_offset(a, b, h) + a);
}

BeamGeometry beam_geometry(double a, double b, double h) {
  check_axes(a, b, h);
  const BeamAngles ang = beam_angles(a, b, h);
  BeamGeometry g;
  g.h = h;
  g.psi = ang.psi;
  g.theta = ang.theta;
  g.x0 = center_offset(a, b, h);
  g.phi_deg = kRadToDeg * std::atan(h / (g.x0 + a));
  g.d = std::hypot(h, g.x0 + a);
  return g;
}

}  // namespace quadcover::placement

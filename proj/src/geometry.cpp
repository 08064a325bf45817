#include "quadcover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace quadcover::geometry {

namespace {

using Eigen::Vector3d;

constexpr double kPi = 3.14159265358979323846;

Vector3d homog(const Vector2d& p) { return {p.x(), p.y(), 1.0}; }

double cross2(const Vector2d& a, const Vector2d& b) {
  return a.x() * b.y() - a.y() * b.x();
}

Matrix3d sym_outer(const Vector3d& a, const Vector3d& b) {
  Matrix3d m = a * b.transpose();
  return m + m.transpose();
}

// Adjugate of a symmetric 3x3 matrix via cofactors.
Matrix3d adjugate3(const Matrix3d& m) {
  Matrix3d r;
  r(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  r(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  r(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  r(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  r(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  r(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  r(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  r(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  r(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return r;
}

// Area of an ellipse conic, or NaN when the coefficients do not describe a
// real ellipse. The conic has real points exactly when delta1 and c1 share
// their sign (the form value at the center is -delta1/delta2).
double ellipse_area_or_nan(const Conic& c) {
  const double d2 = c.delta2();
  if (!(d2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double d1 = c.c3 * c.c4 * c.c4 + c.c1 * c.c5 * c.c5 - c.c2 * c.c4 * c.c5 - c.c6 * d2;
  if (!(d1 * c.c1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * kPi * std::abs(d1) / (d2 * std::sqrt(d2));
}

// delta2 > 0 with a scale-free margin; family members at parameter-range
// endpoints produce exact or near cancellation and must classify as
// degenerate regardless of rounding direction.
bool robustly_elliptic(const Conic& c) {
  return c.delta2() > 1e-12 * (4.0 * std::abs(c.c1 * c.c3) + c.c2 * c.c2);
}

// One parabolic refinement through (x-delta, x, x+delta); comparison-based
// search stalls near a flat extremum where value differences drown in
// rounding, while the fit with well-separated samples does not. The candidate
// is kept only when it does not worsen the objective.
template <class F>
double parabolic_polish(F&& f, double x, double delta, double lo, double hi, bool maximize) {
  const double xl = std::max(lo, x - delta);
  const double xr = std::min(hi, x + delta);
  const double fl = f(xl), fm = f(x), fr = f(xr);
  if (std::isnan(fl) || std::isnan(fm) || std::isnan(fr)) return x;
  const double denom = fl - 2.0 * fm + fr;
  if (denom == 0.0 || !std::isfinite(denom)) return x;
  const double step = 0.5 * (fl - fr) / denom * delta;
  const double candidate = x + step;
  if (!(candidate > xl && candidate < xr)) return x;
  const double fc = f(candidate);
  if (std::isnan(fc)) return x;
  // within rounding noise the vertex still improves the extremum's location,
  // so only a clear worsening rejects the candidate
  const double margin = 1e-12 * std::abs(fm);
  if (maximize ? fc < fm - margin : fc > fm + margin) return x;
  return candidate;
}

// Golden-section refinement on [lo,hi]; maximizes f when maximize is set.
template <class F>
double golden_extremum(F&& f, double lo, double hi, bool maximize, int iters = 120) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    const bool move_right = maximize ? (f1 < f2) : (f1 > f2);
    if (move_right) {
      a = x1;
      x1 = x2; f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1; f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

// Scan n interior samples of (lo,hi), return the best index bracket for a
// subsequent golden refinement. `better(x,y)` returns true when x beats y.
template <class F, class Better>
std::pair<double, double> scan_bracket(F&& f, double lo, double hi, int n, Better&& better) {
  int best = -1;
  double best_val = 0.0;
  std::vector<double> xs(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * (i + 1.0) / (n + 1.0);
    xs[static_cast<size_t>(i)] = x;
    const double v = f(x);
    if (std::isnan(v)) continue;
    if (best < 0 || better(v, best_val)) {
      best = i;
      best_val = v;
    }
  }
  if (best < 0) throw NotAnEllipseError("no valid member found in family scan");
  const double blo = best > 0 ? xs[static_cast<size_t>(best - 1)] : lo;
  const double bhi = best + 1 < n ? xs[static_cast<size_t>(best + 1)] : hi;
  return {blo, bhi};
}

// Closed-form real roots of a3 x^3 + a2 x^2 + a1 x + a0, with degenerate
// leading coefficients handled and one Newton polish step per root.
std::vector<double> solve_cubic_real(double a3, double a2, double a1, double a0) {
  std::vector<double> roots;
  const double scale = std::max({std::abs(a3), std::abs(a2), std::abs(a1), std::abs(a0)});
  if (!(scale > 0.0)) return roots;
  const double tiny = 1e-14 * scale;
  if (std::abs(a3) <= tiny) {
    if (std::abs(a2) <= tiny) {
      if (std::abs(a1) <= tiny) return roots;
      roots.push_back(-a0 / a1);
      return roots;
    }
    const double disc = a1 * a1 - 4.0 * a2 * a0;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (a1 + std::copysign(sq, a1));
    if (std::abs(a1) <= tiny && std::abs(a0) <= tiny) {
      roots.push_back(0.0);
      roots.push_back(0.0);
      return roots;
    }
    roots.push_back(qq / a2);
    if (std::abs(qq) > 0.0) roots.push_back(a0 / qq);
    else roots.push_back(0.0);
  } else {
    const double b = a2 / a3, c = a1 / a3, d = a0 / a3;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      const double u = std::cbrt(-0.5 * q + sq);
      const double v = std::cbrt(-0.5 * q - sq);
      roots.push_back(u + v + shift);
    } else if (p == 0.0 && q == 0.0) {
      roots.push_back(shift);
    } else {
      const double m = 2.0 * std::sqrt(-p / 3.0);
      const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
      const double theta = std::acos(arg) / 3.0;
      for (int k = 0; k < 3; ++k)
        roots.push_back(m * std::cos(theta - 2.0 * kPi * k / 3.0) + shift);
    }
  }
  for (double& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const double f = ((a3 * r + a2) * r + a1) * r + a0;
      const double df = (3.0 * a3 * r + 2.0 * a2) * r + a1;
      if (std::abs(df) > 1e-30) r -= f / df;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Family coefficients of the circumscribed pencil in canonical coordinates,
// without the ellipse check.
Conic circ_family_unchecked(double s, double t, double v, double w, double u) {
  Conic k;
  k.c1 = s * v * (t - w) * u;
  k.c2 = s * w * w - t * t * v + v * t - w * s - s * v * (s - v) * u;
  k.c3 = s * v * (t - w);
  k.c4 = (v * (t - 1.0) + (1.0 - w) * s) * t * w - (v * t - w * s) * s * v * u;
  k.c5 = -s * v * (t - w);
  k.c6 = 0.0;
  return k;
}

// Cubic coefficients (in u) of the circumscribed family minimizer condition.
std::array<double, 4> circ_cubic_coeffs(double s, double t) {
  const double mixed = s * t + s + t - 1.0;
  return {
      s * s * s * (s - 1.0) * (s - 1.0),
      s * s * t * (2.0 * (s - 1.0) * (s - 1.0) + mixed),
      -s * t * t * (2.0 * (t - 1.0) * (t - 1.0) + mixed),
      -t * t * t * (t - 1.0) * (t - 1.0),
  };
}

// q of the closed-form inscribed-area maximizer. Reported as a diagnostic;
// for many quadrilaterals the value leaves [0,1].
double inscribed_closed_form_q(double s, double t) {
  const double g = s * t - t + 1.0;
  const double num = -g + std::sqrt(g * g + t * (s - 1.0) * (t - s + 2.0));
  const double den = (t - 1.0) * (t - s + 2.0);
  return num / den;
}

PlaneMap affine_from_points(const Vector2d& p1, const Vector2d& p2, const Vector2d& p4) {
  Matrix3d a;
  a.row(0) = homog(p1);
  a.row(1) = homog(p2);
  a.row(2) = homog(p4);
  Eigen::FullPivLU<Matrix3d> lu(a);
  if (!lu.isInvertible())
    throw SingularMapError("affine canonicalization: P1, P2, P4 are collinear");
  const Vector3d r1 = lu.solve(Vector3d{0.0, 0.0, 1.0});
  const Vector3d r2 = lu.solve(Vector3d{0.0, 1.0, 0.0});
  PlaneMap m;
  m.linear << r1.x(), r1.y(), r2.x(), r2.y();
  m.offset = {r1.z(), r2.z()};
  m.kind = PlaneMap::Kind::Affine;
  return m;
}

PlaneMap similarity_from_points(const Vector2d& p1, const Vector2d& p2) {
  const Vector2d e = p2 - p1;
  const double d12 = e.norm();
  if (!(d12 > 0.0)) throw SingularMapError("similarity canonicalization: P1 equals P2");
  const double phi = kPi / 2.0 - std::atan2(e.y(), e.x());
  PlaneMap m;
  m.linear << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  m.linear /= d12;
  m.offset = -(m.linear * p1);
  m.kind = PlaneMap::Kind::Similarity;
  return m;
}

// Vertex labels in clockwise traversal; the canonical-frame family formulas
// assume that orientation.
std::array<Vector2d, 4> clockwise_labels(const Quadrilateral& q) {
  const auto& v = q.labeled();
  if (q.labels_clockwise()) return v;
  return {v[0], v[3], v[2], v[1]};
}

struct FamilySolveContext {
  PlaneMap map;          // world -> canonical
  CanonicalQuad canon;
  CircumscribedUSolve solve;
};

FamilySolveContext circumscribed_solve_in_frame(const std::array<Vector2d, 4>& pts,
                                                bool similarity_frame) {
  FamilySolveContext ctx;
  if (similarity_frame) {
    ctx.map = similarity_from_points(pts[0], pts[1]);
    const Vector2d st = ctx.map.apply(pts[2]);
    ctx.canon = CanonicalQuad{st.x(), st.y(), ctx.map.apply(pts[3])};
  } else {
    ctx.map = affine_from_points(pts[0], pts[1], pts[3]);
    const Vector2d st = ctx.map.apply(pts[2]);
    ctx.canon = CanonicalQuad{st.x(), st.y(), Vector2d{1.0, 0.0}};
  }
  ctx.solve = solve_min_circumscribed_u_info(ctx.canon);
  return ctx;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadrilateral
// ---------------------------------------------------------------------------

Quadrilateral validate_quadrilateral(const std::array<Vector2d, 4>& pts) {
  for (const auto& p : pts)
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
      throw DegenerateError("quadrilateral: non-finite vertex coordinate");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((pts[static_cast<size_t>(i)] - pts[static_cast<size_t>(j)]).squaredNorm() < 1e-24)
        throw DegenerateError("quadrilateral: repeated vertex");

  double sign = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vector2d e1 = pts[static_cast<size_t>((i + 1) % 4)] - pts[static_cast<size_t>(i)];
    const Vector2d e2 = pts[static_cast<size_t>((i + 2) % 4)] - pts[static_cast<size_t>((i + 1) % 4)];
    const double z = cross2(e1, e2);
    if (z == 0.0) throw NonConvexError("quadrilateral: collinear consecutive vertices");
    if (sign == 0.0) sign = z > 0.0 ? 1.0 : -1.0;
    else if (z * sign < 0.0) throw NonConvexError("quadrilateral: edge turn changes sign");
  }

  double shoelace = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = pts[static_cast<size_t>(i)];
    const auto& b = pts[static_cast<size_t>((i + 1) % 4)];
    shoelace += a.x() * b.y() - b.x() * a.y();
  }
  if (std::abs(0.5 * shoelace) < 1e-9)
    throw DegenerateError("quadrilateral: area below 1e-9 m^2");

  Quadrilateral q;
  q.labeled_ = pts;
  q.labels_cw_ = shoelace < 0.0;
  return q;
}

std::array<Vector2d, 4> Quadrilateral::ccw() const {
  if (!labels_cw_) return labeled_;
  return {labeled_[0], labeled_[3], labeled_[2], labeled_[1]};
}

double Quadrilateral::area() const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto& a = labeled_[static_cast<size_t>(i)];
    const auto& b = labeled_[static_cast<size_t>((i + 1) % 4)];
    s += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(0.5 * s);
}

double Quadrilateral::diameter() const {
  double d = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      d = std::max(d, (labeled_[static_cast<size_t>(i)] - labeled_[static_cast<size_t>(j)]).norm());
  return d;
}

double Quadrilateral::signed_inside_distance(const Vector2d& p) const {
  const auto v = ccw();
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    const Vector2d e = v[static_cast<size_t>((i + 1) % 4)] - v[static_cast<size_t>(i)];
    dist = std::min(dist, cross2(e, p - v[static_cast<size_t>(i)]) / e.norm());
  }
  return dist;
}

double polygon_area(const Quadrilateral& q) { return q.area(); }

// ---------------------------------------------------------------------------
// Conic / EllipseGeo / PlaneMap
// ---------------------------------------------------------------------------

Matrix3d Conic::matrix() const {
  Matrix3d m;
  m << c1, c2 / 2.0, c4 / 2.0,
       c2 / 2.0, c3, c5 / 2.0,
       c4 / 2.0, c5 / 2.0, c6;
  return m;
}

Conic Conic::from_matrix(const Matrix3d& m) {
  Conic c;
  c.c1 = m(0, 0);
  c.c2 = m(0, 1) + m(1, 0);
  c.c3 = m(1, 1);
  c.c4 = m(0, 2) + m(2, 0);
  c.c5 = m(1, 2) + m(2, 1);
  c.c6 = m(2, 2);
  return c;
}

double Conic::evaluate(const Vector2d& p) const {
  const double x = p.x(), y = p.y();
  return c1 * x * x + c2 * x * y + c3 * y * y + c4 * x + c5 * y + c6;
}

Conic Conic::scaled(double k) const {
  return Conic{c1 * k, c2 * k, c3 * k, c4 * k, c5 * k, c6 * k};
}

double Conic::norm() const {
  return std::sqrt(c1 * c1 + c2 * c2 + c3 * c3 + c4 * c4 + c5 * c5 + c6 * c6);
}

Conic Conic::normalized() const {
  const double n = norm();
  if (!(n > 0.0)) throw DegenerateError("conic: all coefficients zero");
  double lead = c1 != 0.0 ? c1 : (c3 != 0.0 ? c3 : (c6 != 0.0 ? c6 : 1.0));
  return scaled(std::copysign(1.0, lead) / n);
}

double EllipseGeo::area() const { return kPi * a * b; }

Vector2d EllipseGeo::point_at(double phi) const {
  const double ca = std::cos(rotation), sa = std::sin(rotation);
  const double px = a * std::cos(phi), py = b * std::sin(phi);
  return {center.x() + ca * px - sa * py, center.y() + sa * px + ca * py};
}

Matrix3d PlaneMap::homogeneous() const {
  Matrix3d m = Matrix3d::Identity();
  m.topLeftCorner<2, 2>() = linear;
  m.topRightCorner<2, 1>() = offset;
  return m;
}

PlaneMap PlaneMap::inverse() const {
  const double d = det();
  if (!std::isfinite(d) || std::abs(d) < 1e-300)
    throw SingularMapError("plane map is not invertible");
  PlaneMap inv;
  inv.linear << linear(1, 1), -linear(0, 1), -linear(1, 0), linear(0, 0);
  inv.linear /= d;
  inv.offset = -(inv.linear * offset);
  inv.kind = kind;
  return inv;
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

std::pair<PlaneMap, CanonicalQuad> affine_to_canonical(const Quadrilateral& q) {
  const auto& v = q.labeled();
  PlaneMap m = affine_from_points(v[0], v[1], v[3]);
  const Vector2d st = m.apply(v[2]);
  return {m, CanonicalQuad{st.x(), st.y(), std::nullopt}};
}

std::pair<PlaneMap, CanonicalQuad> similarity_to_canonical(const Quadrilateral& q) {
  const auto& v = q.labeled();
  PlaneMap m = similarity_from_points(v[0], v[1]);
  const Vector2d st = m.apply(v[2]);
  return {m, CanonicalQuad{st.x(), st.y(), m.apply(v[3])}};
}

Conic transform_conic(const Conic& c, const PlaneMap& m) {
  const Matrix3d minv = m.inverse().homogeneous();
  return Conic::from_matrix(minv.transpose() * c.matrix() * minv);
}

EllipseGeo conic_to_geometric(const Conic& c) {
  const double d2 = c.delta2();
  if (!(d2 > 0.0)) throw NotAnEllipseError("conic: delta2 <= 0");
  double d1 = c.c3 * c.c4 * c.c4 + c.c1 * c.c5 * c.c5 - c.c2 * c.c4 * c.c5 - c.c6 * d2;
  if (!(d1 * c.c1 > 0.0))
    throw EmptyConicError("conic: no real ellipse points (delta1 sign)");
  Conic k = c;
  if (d1 < 0.0) {  // rewrite with positive-definite quadratic part
    k = c.scaled(-1.0);
    d1 = -d1;
  }

  const double mu = 4.0 * d1 / (d2 * d2);
  const double spread = std::hypot(k.c1 - k.c3, k.c2);
  EllipseGeo g;
  g.a = std::sqrt(mu * (k.c1 + k.c3 + spread) / 2.0);
  g.b = std::sqrt(std::max(0.0, mu * (k.c1 + k.c3 - spread) / 2.0));
  g.center = {(k.c2 * k.c5 - 2.0 * k.c3 * k.c4) / d2,
              (k.c2 * k.c4 - 2.0 * k.c1 * k.c5) / d2};

  if (spread <= 1e-12 * (k.c1 + k.c3)) {
    g.rotation = 0.0;  // circle: axis direction is arbitrary
    return g;
  }
  Matrix2d quad;
  quad << k.c1, k.c2 / 2.0, k.c2 / 2.0, k.c3;
  Eigen::SelfAdjointEigenSolver<Matrix2d> eig(quad);
  const Vector2d major = eig.eigenvectors().col(0);  // smaller eigenvalue
  double ang = std::atan2(major.y(), major.x());
  if (ang < 0.0) ang += kPi;
  if (ang >= kPi) ang -= kPi;
  g.rotation = ang;
  return g;
}

// ---------------------------------------------------------------------------
// Inscribed ellipses
// ---------------------------------------------------------------------------

Conic inscribed_family_conic(const CanonicalQuad& c, double q) {
  if (!(q >= 0.0 && q <= 1.0))
    throw OutOfRangeError("inscribed family: q must lie in [0,1]");
  if (c.vw && (*c.vw - Vector2d{1.0, 0.0}).norm() > 1e-9)
    throw OutOfRangeError("inscribed family: affine-form canonical quad required");
  const double s = c.s, t = c.t;
  const double mix = (1.0 - q) * s + q * t;
  Conic k;
  k.c1 = t * t;
  k.c2 = 4.0 * q * q * (s - 1.0) * t + 2.0 * q * t * (s - t + 2.0) - 2.0 * s * t;
  k.c3 = mix * mix;
  k.c4 = -2.0 * q * t * t;
  k.c5 = -2.0 * q * t * mix;
  k.c6 = q * q * t * t;
  if (!robustly_elliptic(k))
    throw NotAnEllipseError("inscribed family: member is degenerate (delta2 <= 0)");
  return k;
}

namespace {

struct InscribedPencil {
  Matrix3d d_ac;  // dual point pair on diagonal P1-P3
  Matrix3d d_bd;  // dual point pair on diagonal P2-P4

  Matrix3d dual_at(double lambda) const {
    return Matrix3d((1.0 - lambda) * d_bd + lambda * d_ac);
  }
  Conic member(double lambda) const {
    return Conic::from_matrix(adjugate3(dual_at(lambda)));
  }
};

InscribedPencil inscribed_pencil(const Quadrilateral& q) {
  const auto v = q.ccw();
  InscribedPencil p;
  p.d_ac = sym_outer(homog(v[0]), homog(v[2]));
  p.d_bd = sym_outer(homog(v[1]), homog(v[3]));
  p.d_ac /= p.d_ac.norm();
  p.d_bd /= p.d_bd.norm();
  return p;
}

}  // namespace

Conic inscribed_pencil_member(const Quadrilateral& q, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw OutOfRangeError("inscribed pencil: lambda must lie in (0,1)");
  return inscribed_pencil(q).member(lambda);
}

InscribedEllipse max_inscribed_ellipse(const Quadrilateral& q) {
  const InscribedPencil pencil = inscribed_pencil(q);
  const auto area_at = [&](double lam) { return ellipse_area_or_nan(pencil.member(lam)); };

  const auto [blo, bhi] =
      scan_bracket(area_at, 0.0, 1.0, 127, [](double x, double y) { return x > y; });
  double lam = golden_extremum(area_at, blo, bhi, /*maximize=*/true);
  lam = parabolic_polish(area_at, lam, 1e-6, 0.0, 1.0, /*maximize=*/true);
  lam = parabolic_polish(area_at, lam, 1e-7, 0.0, 1.0, /*maximize=*/true);

  InscribedEllipse out;
  out.conic = pencil.member(lam).normalized();
  out.geo = conic_to_geometric(out.conic);
  out.diagnostics.pencil_lambda = lam;

  // Tangency contacts: the dual conic maps each side line to its contact point.
  const auto v = q.ccw();
  const Matrix3d dual = pencil.dual_at(lam);
  for (int i = 0; i < 4; ++i) {
    const Vector3d line = homog(v[static_cast<size_t>(i)]).cross(homog(v[static_cast<size_t>((i + 1) % 4)]));
    Vector3d contact = dual * line;
    contact /= contact.z();
    const Vector2d e = v[static_cast<size_t>((i + 1) % 4)] - v[static_cast<size_t>(i)];
    out.diagnostics.tangency_params[static_cast<size_t>(i)] =
        (Vector2d(contact.x(), contact.y()) - v[static_cast<size_t>(i)]).dot(e) / e.squaredNorm();
  }

  // Closed-form family values, reported as diagnostics only.
  const auto [amap, acq] = affine_to_canonical(q);
  out.diagnostics.closed_form_q = inscribed_closed_form_q(acq.s, acq.t);
  out.diagnostics.closed_form_q_in_range =
      out.diagnostics.closed_form_q >= 0.0 && out.diagnostics.closed_form_q <= 1.0;
  out.diagnostics.closed_form_area = std::numeric_limits<double>::quiet_NaN();
  if (out.diagnostics.closed_form_q_in_range) {
    try {
      const Conic fam = inscribed_family_conic(acq, out.diagnostics.closed_form_q);
      out.diagnostics.closed_form_area =
          conic_to_geometric(transform_conic(fam, amap.inverse())).area();
    } catch (const Error&) {
      // leave NaN
    }
  }
  const Conic canon = transform_conic(out.conic, amap);
  out.diagnostics.family_q = -canon.c4 / (2.0 * canon.c1);
  return out;
}

// ---------------------------------------------------------------------------
// Circumscribed ellipses
// ---------------------------------------------------------------------------

Conic circumscribed_family_conic(const CanonicalQuad& c, double u) {
  if (!c.vw)
    throw OutOfRangeError("circumscribed family: similarity-form canonical quad required");
  const Conic k = circ_family_unchecked(c.s, c.t, c.vw->x(), c.vw->y(), u);
  if (!robustly_elliptic(k))
    throw NotAnEllipseError("circumscribed family: member is not an ellipse");
  return k;
}

CircumscribedUSolve solve_min_circumscribed_u_info(const CanonicalQuad& c) {
  const double s = c.s, t = c.t;
  const Vector2d vw = c.vw.value_or(Vector2d{1.0, 0.0});
  const double v = vw.x(), w = vw.y();

  const auto coeffs = circ_cubic_coeffs(s, t);
  const auto roots = solve_cubic_real(coeffs[0], coeffs[1], coeffs[2], coeffs[3]);

  CircumscribedUSolve out;
  out.real_roots = static_cast<int>(roots.size());
  double best_area = std::numeric_limits<double>::infinity();
  for (const double r : roots) {
    const double area = ellipse_area_or_nan(circ_family_unchecked(s, t, v, w, r));
    if (std::isnan(area)) continue;
    ++out.ellipse_roots;
    if (area < best_area) {
      best_area = area;
      out.u = r;
    }
  }
  if (out.ellipse_roots == 0)
    throw NoEllipseRootError("circumscribed cubic: no real root yields an ellipse");
  out.selected_area = best_area;

  const double max_coeff =
      std::max({std::abs(coeffs[0]), std::abs(coeffs[1]), std::abs(coeffs[2]), std::abs(coeffs[3])});
  const double p_at_u = ((coeffs[0] * out.u + coeffs[1]) * out.u + coeffs[2]) * out.u + coeffs[3];
  out.cubic_residual = std::abs(p_at_u) / max_coeff;

  // Direct numerical minimum over the family, used as a cross-check. The
  // ellipse window in u is where delta2(u) > 0, a concave quadratic (or
  // linear when s = v); the window must contain the selected root.
  const double alpha = s * v * (t - w);
  const double beta = s * w * w - t * t * v + v * t - w * s;
  const double gamma = s * v * (s - v);
  const auto area_of = [&](double u) {
    const double a = ellipse_area_or_nan(circ_family_unchecked(s, t, v, w, u));
    return std::isnan(a) ? std::numeric_limits<double>::infinity() : a;
  };
  double ulo, uhi;
  if (std::abs(gamma) > 1e-14 * std::max(1.0, std::abs(alpha))) {
    // roots of -gamma^2 u^2 + (4 alpha^2 + 2 beta gamma) u - beta^2,
    // via the cancellation-free quadratic formula
    const double qa = -gamma * gamma;
    const double qb = 4.0 * alpha * alpha + 2.0 * beta * gamma;
    const double qc = -beta * beta;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc <= 0.0) throw NoEllipseRootError("circumscribed family: empty ellipse window");
    const double qq = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    ulo = qq / qa;
    uhi = qc / qq;
    if (ulo > uhi) std::swap(ulo, uhi);
  } else {
    // window (beta^2 / (4 alpha^2), inf): expand until the area grows
    ulo = beta * beta / (4.0 * alpha * alpha);
    uhi = std::max(2.0 * std::abs(out.u), ulo + 1.0);
    while (area_of(uhi) < area_of(0.5 * (ulo + uhi)) && uhi < 1e12) uhi *= 2.0;
  }
  if (!(ulo < out.u && out.u < uhi)) {
    ulo = out.u - 1.0;
    uhi = out.u + 1.0;
    while (std::isinf(area_of(ulo)) && out.u - ulo > 1e-12) ulo = 0.5 * (ulo + out.u);
    while (std::isinf(area_of(uhi)) && uhi - out.u > 1e-12) uhi = 0.5 * (uhi + out.u);
  }
  const auto [blo, bhi] =
      scan_bracket(area_of, ulo, uhi, 255, [](double x, double y) { return x < y; });
  out.direct_min_u = golden_extremum(area_of, blo, bhi, /*maximize=*/false);
  out.direct_min_u = parabolic_polish(area_of, out.direct_min_u,
                                      1e-5 * std::max(1.0, std::abs(out.direct_min_u)),
                                      ulo, uhi, /*maximize=*/false);
  out.direct_min_area = area_of(out.direct_min_u);
  return out;
}

double solve_min_circumscribed_u(const CanonicalQuad& c) {
  return solve_min_circumscribed_u_info(c).u;
}

Conic circumscribed_pencil_member(const Quadrilateral& q, double tau) {
  const auto v = q.ccw();
  const auto line = [&](int i, int j) {
    return Vector3d(homog(v[static_cast<size_t>(i)]).cross(homog(v[static_cast<size_t>(j)])));
  };
  Matrix3d g1 = sym_outer(line(0, 1), line(2, 3));
  Matrix3d g2 = sym_outer(line(1, 2), line(3, 0));
  g1 /= g1.norm();
  g2 /= g2.norm();
  return Conic::from_matrix(Matrix3d(std::cos(tau) * g1 + std::sin(tau) * g2));
}

std::pair<Conic, EllipseGeo> min_area_circumscribed_pencil(const Quadrilateral& q) {
  const auto area_at = [&](double tau) { return ellipse_area_or_nan(circumscribed_pencil_member(q, tau)); };
  const auto [blo, bhi] =
      scan_bracket(area_at, 0.0, kPi, 511, [](double x, double y) { return x < y; });
  double tau = golden_extremum(area_at, blo, bhi, /*maximize=*/false);
  tau = parabolic_polish(area_at, tau, 1e-6, 0.0, kPi, /*maximize=*/false);
  tau = parabolic_polish(area_at, tau, 1e-7, 0.0, kPi, /*maximize=*/false);
  const Conic c = circumscribed_pencil_member(q, tau).normalized();
  return {c, conic_to_geometric(c)};
}

std::pair<Conic, EllipseGeo> min_area_circumscribed_cubic(const Quadrilateral& q) {
  const auto ctx = circumscribed_solve_in_frame(clockwise_labels(q), /*similarity_frame=*/false);
  const Conic member = circ_family_unchecked(ctx.canon.s, ctx.canon.t, 1.0, 0.0, ctx.solve.u);
  const Conic world = transform_conic(member, ctx.map.inverse()).normalized();
  return {world, conic_to_geometric(world)};
}

CircumscribedEllipse min_circumscribed_ellipse(const Quadrilateral& q) {
  const auto pts = clockwise_labels(q);
  const auto ctx = circumscribed_solve_in_frame(pts, /*similarity_frame=*/true);
  const auto& vw = *ctx.canon.vw;
  const Conic member =
      circ_family_unchecked(ctx.canon.s, ctx.canon.t, vw.x(), vw.y(), ctx.solve.u);

  CircumscribedEllipse out;
  out.conic = transform_conic(member, ctx.map.inverse()).normalized();
  out.geo = conic_to_geometric(out.conic);
  out.diagnostics.u = ctx.solve.u;
  out.diagnostics.real_roots = ctx.solve.real_roots;
  out.diagnostics.ellipse_roots = ctx.solve.ellipse_roots;
  out.diagnostics.direct_min_u = ctx.solve.direct_min_u;
  // canonical-frame areas scale by |det| of the inverse map
  const double det_inv = std::abs(ctx.map.inverse().det());
  out.diagnostics.direct_min_area = ctx.solve.direct_min_area * det_inv;

  out.diagnostics.pencil_min_area = min_area_circumscribed_pencil(q).second.area();
  out.diagnostics.cubic_min_area = min_area_circumscribed_cubic(q).second.area();
  out.diagnostics.area_vs_pencil_rel =
      (out.geo.area() - out.diagnostics.pencil_min_area) / out.diagnostics.pencil_min_area;

  double worst = 0.0;
  for (const auto& p : q.labeled()) {
    const double denom = out.conic.norm() * (1.0 + p.squaredNorm());
    worst = std::max(worst, std::abs(out.conic.evaluate(p)) / denom);
  }
  out.diagnostics.max_vertex_residual = worst;
  return out;
}

}  // namespace quadcover::geometry

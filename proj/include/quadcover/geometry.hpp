#pragma once

#include <array>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "quadcover/errors.hpp"

namespace quadcover::geometry {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Strictly convex planar quadrilateral, coordinates in meters.
///
/// Vertices keep the labeling they were supplied with (P1..P4), because the
/// canonicalization maps are defined in terms of those roles. A
/// counter-clockwise traversal is available separately; the label order may
/// be clockwise.
class Quadrilateral {
 public:
  /// Vertices in the original P1..P4 labeling.
  const std::array<Vector2d, 4>& labeled() const { return labeled_; }

  /// Vertices in counter-clockwise traversal, starting at P1.
  std::array<Vector2d, 4> ccw() const;

  bool labels_clockwise() const { return labels_cw_; }

  /// Positive shoelace area in m^2.
  double area() const;

  /// Largest vertex-to-vertex distance.
  double diameter() const;

  /// Signed distance of a point to the boundary, positive inside.
  double signed_inside_distance(const Vector2d& p) const;

 private:
  friend Quadrilateral validate_quadrilateral(const std::array<Vector2d, 4>& pts);
  std::array<Vector2d, 4> labeled_;
  bool labels_cw_ = false;
};

/// Conic in quadratic form c1 x^2 + c2 xy + c3 y^2 + c4 x + c5 y + c6 = 0.
/// Coefficients are an equivalence class under nonzero scaling.
struct Conic {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0;

  /// Symmetric 3x3 matrix representation.
  Matrix3d matrix() const;
  static Conic from_matrix(const Matrix3d& m);

  double evaluate(const Vector2d& p) const;

  /// Ellipse discriminant delta2 = 4 c1 c3 - c2^2.
  double delta2() const { return 4.0 * c1 * c3 - c2 * c2; }
  bool is_ellipse() const { return delta2() > 0.0; }

  Conic scaled(double k) const;
  double norm() const;
  /// Canonical representative: unit Euclidean norm, c1 > 0 (c3 > 0 if c1 = 0).
  Conic normalized() const;
};

/// Geometric view of an ellipse conic.
struct EllipseGeo {
  Vector2d center{0.0, 0.0};
  double a = 0.0;         ///< semi-major (m)
  double b = 0.0;         ///< semi-minor (m)
  double rotation = 0.0;  ///< major-axis angle vs x-axis, in [0, pi)

  double area() const;
  /// Boundary point at parameter angle phi (radians).
  Vector2d point_at(double phi) const;
};

/// Invertible 2-D affine map x -> linear * x + offset.
struct PlaneMap {
  enum class Kind { Affine, Similarity };

  Matrix2d linear = Matrix2d::Identity();
  Vector2d offset = Vector2d::Zero();
  Kind kind = Kind::Affine;

  Vector2d apply(const Vector2d& p) const { return linear * p + offset; }
  double det() const { return linear.determinant(); }
  Matrix3d homogeneous() const;
  PlaneMap inverse() const;  ///< throws SingularMapError
};

/// Canonical quadrilateral (0,0), (0,1), (s,t), (1,0) -- affine form -- or
/// (0,0), (0,1), (s,t), (v,w) -- similarity form, with (v,w) stored in `vw`.
struct CanonicalQuad {
  double s = 0.0;
  double t = 0.0;
  std::optional<Vector2d> vw;

  bool similarity_form() const { return vw.has_value(); }
};

// ---------------------------------------------------------------------------
// Validation and canonicalization
// ---------------------------------------------------------------------------

/// Validates four points as a strictly convex quadrilateral.
/// Throws NonConvexError or DegenerateError.
Quadrilateral validate_quadrilateral(const std::array<Vector2d, 4>& pts);

/// Positive shoelace area.
double polygon_area(const Quadrilateral& q);

/// Affine map sending P1 -> (0,0), P2 -> (0,1), P4 -> (1,0); the canonical
/// quad records (s,t), the image of P3.
std::pair<PlaneMap, CanonicalQuad> affine_to_canonical(const Quadrilateral& q);

/// Direct similarity sending P1 -> (0,0), P2 -> (0,1): rotation
/// pi/2 - atan2(P2-P1), uniform scale 1/|P2-P1|. The canonical quad records
/// (s,t) and (v,w), the images of P3 and P4.
std::pair<PlaneMap, CanonicalQuad> similarity_to_canonical(const Quadrilateral& q);

/// Conic of the member of an affine map: coefficients of c under the map m,
/// i.e. the conic satisfied by m(x) exactly when x satisfies c.
Conic transform_conic(const Conic& c, const PlaneMap& m);

/// Semi-axes, center and rotation of an ellipse conic.
/// Throws NotAnEllipseError (delta2 <= 0) or EmptyConicError (no real points).
EllipseGeo conic_to_geometric(const Conic& c);

// ---------------------------------------------------------------------------
// Inscribed ellipses
// ---------------------------------------------------------------------------

/// One-parameter family of conics tangent to all four side lines of the
/// affine canonical quadrilateral, parameter q in [0,1]. The restrictions to
/// x'=0 and y'=0 are perfect squares by construction (tangency at
/// y' = qt/((1-q)s+qt) and x' = q).
Conic inscribed_family_conic(const CanonicalQuad& c, double q);

/// Member of the dual pencil of conics tangent to the four side lines of q,
/// in world coordinates. lambda in (0,1) sweeps the inscribed ellipses; the
/// endpoints collapse onto the diagonals.
Conic inscribed_pencil_member(const Quadrilateral& q, double lambda);

struct InscribedDiagnostics {
  double closed_form_q = 0.0;          ///< q from the closed-form maximizer expression
  bool closed_form_q_in_range = false; ///< whether it landed in [0,1]
  double closed_form_area = 0.0;       ///< area of its conic (NaN when invalid)
  double family_q = 0.0;               ///< canonical tangency abscissa of the result
  double pencil_lambda = 0.0;          ///< pencil parameter of the result
  std::array<double, 4> tangency_params{};  ///< tangency position within each ccw edge, in [0,1]
};

struct InscribedEllipse {
  Conic conic;  ///< canonical normalization
  EllipseGeo geo;
  InscribedDiagnostics diagnostics;
};

/// Maximal-area ellipse inscribed in q, tangent to all four sides.
/// Computed by 1-D area maximization over the dual pencil in world
/// coordinates; closed-form family values are reported as diagnostics only.
InscribedEllipse max_inscribed_ellipse(const Quadrilateral& q);

// ---------------------------------------------------------------------------
// Circumscribed ellipses
// ---------------------------------------------------------------------------

/// Family of conics through the four canonical vertices, parameter u.
/// Requires (v,w) present. Throws NotAnEllipseError for degenerate members.
Conic circumscribed_family_conic(const CanonicalQuad& c, double u);

struct CircumscribedUSolve {
  double u = 0.0;               ///< selected root: minimal-area ellipse root
  int real_roots = 0;
  int ellipse_roots = 0;
  double cubic_residual = 0.0;  ///< |p(u)| / max coefficient magnitude
  double selected_area = 0.0;   ///< canonical-frame area at u
  double direct_min_u = 0.0;    ///< numerical area minimum over the family
  double direct_min_area = 0.0; ///< canonical-frame area at direct_min_u
};

/// Root of the family cubic in u, restricted to roots whose conic is an
/// ellipse, minimal area among those. Throws NoEllipseRootError when no real
/// root yields an ellipse. When `vw` is absent the affine-form fourth vertex
/// (1,0) is used.
CircumscribedUSolve solve_min_circumscribed_u_info(const CanonicalQuad& c);
double solve_min_circumscribed_u(const CanonicalQuad& c);

struct CircumscribedDiagnostics {
  double u = 0.0;
  int real_roots = 0;
  int ellipse_roots = 0;
  double direct_min_u = 0.0;      ///< family-parameter area minimum (canonical frame)
  double direct_min_area = 0.0;   ///< world-frame area at direct_min_u
  double pencil_min_area = 0.0;   ///< numerical oracle over the 4-point pencil
  double cubic_min_area = 0.0;    ///< closed-form minimum via the affine frame
  double area_vs_pencil_rel = 0.0;///< (area - pencil_min_area) / pencil_min_area
  double max_vertex_residual = 0.0;
};

struct CircumscribedEllipse {
  Conic conic;  ///< canonical normalization
  EllipseGeo geo;
  CircumscribedDiagnostics diagnostics;
};

/// Circumscribed ellipse through all four vertices, selected by the
/// similarity-frame cubic (the reference construction). For asymmetric
/// quadrilaterals this selection can exceed the true area optimum; the
/// diagnostics carry the pencil optimum and the achieved gap.
CircumscribedEllipse min_circumscribed_ellipse(const Quadrilateral& q);

/// Member of the pencil of conics through the four vertices, spanned by the
/// two opposite-side line-pair conics; tau parameterizes [0, pi).
Conic circumscribed_pencil_member(const Quadrilateral& q, double tau);

/// Area-minimal circumscribed ellipse by numerical minimization over the
/// 4-point pencil. Never fails on a valid convex quadrilateral.
std::pair<Conic, EllipseGeo> min_area_circumscribed_pencil(const Quadrilateral& q);

/// Area-minimal circumscribed ellipse via the cubic applied in the affine
/// canonical frame (area ratios are affine-invariant, so the minimizer
/// transfers). Agrees with the pencil route to ~1e-12 relative area.
std::pair<Conic, EllipseGeo> min_area_circumscribed_cubic(const Quadrilateral& q);

}  // namespace quadcover::geometry

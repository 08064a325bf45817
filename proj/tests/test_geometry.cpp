#include <doctest.h>

#include <cmath>
#include <cstring>

#include "quadcover/geometry.hpp"
#include "test_support.hpp"

using namespace quadcover;
using namespace quadcover::geometry;
using testsupport::case_study_quad;
using testsupport::case_study_vertices;
using testsupport::unit_square;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Discriminant of the conic restricted to the segment v0 -> v1, normalized by
// the largest coefficient of the restricted quadratic. Zero iff tangent.
double restricted_discriminant(const Conic& c, const Vector2d& v0, const Vector2d& v1) {
  const Vector2d e = v1 - v0;
  const double A = c.c1 * e.x() * e.x() + c.c2 * e.x() * e.y() + c.c3 * e.y() * e.y();
  const double B = 2.0 * c.c1 * v0.x() * e.x() + c.c2 * (v0.x() * e.y() + v0.y() * e.x()) +
                   2.0 * c.c3 * v0.y() * e.y() + c.c4 * e.x() + c.c5 * e.y();
  const double C = c.evaluate(v0);
  const double scale = std::max({A * A, std::abs(A * C), B * B, 1e-300});
  return (B * B - 4.0 * A * C) / scale;
}

// Interpolation residual of a point on a conic, scale-free.
double vertex_residual(const Conic& c, const Vector2d& p) {
  return std::abs(c.evaluate(p)) / (c.norm() * (1.0 + p.squaredNorm()));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("validate_quadrilateral accepts the case study and normalizes orientation") {
  const Quadrilateral q = case_study_quad();
  CHECK(q.area() == 126000.0);
  CHECK(q.labels_clockwise());  // the case-study labeling runs clockwise
  const auto ccw = q.ccw();
  double shoelace = 0.0;
  for (int i = 0; i < 4; ++i)
    shoelace += ccw[i].x() * ccw[(i + 1) % 4].y() - ccw[(i + 1) % 4].x() * ccw[i].y();
  CHECK(shoelace > 0.0);
  CHECK(ccw[0] == q.labeled()[0]);  // traversal starts at P1
}

TEST_CASE("validate_quadrilateral rejects degenerate input") {
  CHECK_THROWS_AS(validate_quadrilateral({Vector2d{0, 0}, Vector2d{2, 2}, Vector2d{1, 1},
                                          Vector2d{0, 1}}),
                  NonConvexError);
  CHECK_THROWS_AS(validate_quadrilateral({Vector2d{0, 0}, Vector2d{1, 1}, Vector2d{1, 0},
                                          Vector2d{0, 1}}),
                  NonConvexError);  // bowtie
  CHECK_THROWS_AS(validate_quadrilateral({Vector2d{0, 0}, Vector2d{0, 0}, Vector2d{1, 1},
                                          Vector2d{0, 1}}),
                  DegenerateError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(validate_quadrilateral({Vector2d{nan, 0}, Vector2d{0, 1}, Vector2d{1, 1},
                                          Vector2d{1, 0}}),
                  DegenerateError);
  CHECK_THROWS_AS(validate_quadrilateral({Vector2d{0, 0}, Vector2d{1e-6, 0}, Vector2d{1e-6, 1e-6},
                                          Vector2d{0, 1e-6}}),
                  DegenerateError);  // area below 1e-9
}

TEST_CASE("polygon_area") {
  CHECK(polygon_area(case_study_quad()) == 126000.0);
  CHECK(polygon_area(unit_square()) == doctest::Approx(1.0));
  const Quadrilateral scaled = validate_quadrilateral(
      {Vector2d{0, 0}, Vector2d{3, 0}, Vector2d{3, 3}, Vector2d{0, 3}});
  CHECK(polygon_area(scaled) == doctest::Approx(9.0));
}

TEST_CASE("affine_to_canonical reproduces the case-study coordinates exactly") {
  const auto [map, canon] = affine_to_canonical(case_study_quad());
  CHECK(std::abs(canon.s - 235.0 / 307.0) < 1e-12);
  CHECK(std::abs(canon.t - 269.0 / 307.0) < 1e-12);
  CHECK(!canon.vw.has_value());
  CHECK(map.kind == PlaneMap::Kind::Affine);

  const auto v = case_study_vertices();
  CHECK((map.apply(v[0]) - Vector2d{0, 0}).norm() < 1e-12);
  CHECK((map.apply(v[1]) - Vector2d{0, 1}).norm() < 1e-12);
  CHECK((map.apply(v[3]) - Vector2d{1, 0}).norm() < 1e-12);
}

TEST_CASE("affine_to_canonical maps the canonical square to itself") {
  const Quadrilateral sq = validate_quadrilateral(
      {Vector2d{0, 0}, Vector2d{0, 1}, Vector2d{1, 1}, Vector2d{1, 0}});
  const auto [map, canon] = affine_to_canonical(sq);
  CHECK(canon.s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(canon.t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((map.linear - Matrix2d::Identity()).norm() < 1e-12);
  CHECK(map.offset.norm() < 1e-12);
}

TEST_CASE("affine_to_canonical defining constraints hold on random quadrilaterals") {
  testsupport::RandomQuadGen gen(41);
  for (int i = 0; i < 50; ++i) {
    const Quadrilateral q = gen.next();
    const auto [map, canon] = affine_to_canonical(q);
    const auto& v = q.labeled();
    CHECK((map.apply(v[0]) - Vector2d{0, 0}).norm() < 1e-10);
    CHECK((map.apply(v[1]) - Vector2d{0, 1}).norm() < 1e-10);
    CHECK((map.apply(v[3]) - Vector2d{1, 0}).norm() < 1e-10);
    CHECK((map.apply(v[2]) - Vector2d{canon.s, canon.t}).norm() < 1e-12);
  }
}

TEST_CASE("similarity_to_canonical reproduces the case-study coordinates exactly") {
  const auto [map, canon] = similarity_to_canonical(case_study_quad());
  CHECK(std::abs(canon.s - 47.0 / 65.0) < 1e-12);
  CHECK(std::abs(canon.t - 79.0 / 65.0) < 1e-12);
  REQUIRE(canon.vw.has_value());
  CHECK(std::abs(canon.vw->x() - 307.0 / 325.0) < 1e-12);
  CHECK(std::abs(canon.vw->y() - 144.0 / 325.0) < 1e-12);
  CHECK(map.kind == PlaneMap::Kind::Similarity);
}

TEST_CASE("similarity_to_canonical is a direct similarity with P2 -> (0,1)") {
  testsupport::RandomQuadGen gen(42);
  for (int i = 0; i < 50; ++i) {
    const Quadrilateral q = gen.next();
    const auto [map, canon] = similarity_to_canonical(q);
    CHECK((map.apply(q.labeled()[1]) - Vector2d{0, 1}).norm() < 1e-12);
    (void)canon;
    // equal diagonal, antisymmetric off-diagonal linear part
    CHECK(map.linear(0, 0) == doctest::Approx(map.linear(1, 1)).epsilon(1e-14));
    CHECK(map.linear(0, 1) == doctest::Approx(-map.linear(1, 0)).epsilon(1e-14));
    CHECK(map.det() > 0.0);
  }
  const auto [map, canon] = similarity_to_canonical(unit_square());
  CHECK(canon.s == doctest::Approx(1.0));
  CHECK(canon.t == doctest::Approx(1.0));
  CHECK(canon.vw->x() == doctest::Approx(1.0));
  CHECK(std::abs(canon.vw->y()) < 1e-12);
}

TEST_CASE("inscribed_family_conic has the guaranteed tangencies") {
  const auto [map, canon] = affine_to_canonical(case_study_quad());
  (void)map;
  const Conic c = inscribed_family_conic(canon, 0.4);

  // restriction to y'=0 is t^2 (x-q)^2: tangency at x' = 0.4
  const double disc_bottom = c.c4 * c.c4 - 4.0 * c.c1 * c.c6;
  CHECK(std::abs(disc_bottom) < 1e-9);
  CHECK(-c.c4 / (2.0 * c.c1) == doctest::Approx(0.4).epsilon(1e-12));

  // restriction to x'=0 is a perfect square: tangency at y' = qt/((1-q)s+qt)
  const double disc_left = c.c5 * c.c5 - 4.0 * c.c3 * c.c6;
  CHECK(std::abs(disc_left) < 1e-9);
  const double expect_y = 0.4 * canon.t / (0.6 * canon.s + 0.4 * canon.t);
  CHECK(-c.c5 / (2.0 * c.c3) == doctest::Approx(expect_y).epsilon(1e-12));
}

TEST_CASE("inscribed_family_conic rejects bad parameters") {
  const auto [map, canon] = affine_to_canonical(case_study_quad());
  (void)map;
  CHECK_THROWS_AS(inscribed_family_conic(canon, -0.1), OutOfRangeError);
  CHECK_THROWS_AS(inscribed_family_conic(canon, 1.1), OutOfRangeError);
  // q = 0 degenerates to the double line (t x - s y)^2 = 0
  CHECK_THROWS_AS(inscribed_family_conic(canon, 0.0), NotAnEllipseError);
}

TEST_CASE("conic_to_geometric on reference conics") {
  const EllipseGeo circle = conic_to_geometric(Conic{1, 0, 1, 0, 0, -1});
  CHECK(circle.center.norm() < 1e-15);
  CHECK(circle.a == doctest::Approx(1.0));
  CHECK(circle.b == doctest::Approx(1.0));

  const EllipseGeo axis = conic_to_geometric(Conic{1, 0, 4, 0, 0, -4});
  CHECK(axis.a == doctest::Approx(2.0));
  CHECK(axis.b == doctest::Approx(1.0));
  CHECK(axis.rotation == doctest::Approx(0.0));

  CHECK_THROWS_AS(conic_to_geometric(Conic{1, 0, -1, 0, 0, -1}), NotAnEllipseError);
  CHECK_THROWS_AS(conic_to_geometric(Conic{1, 0, 1, 0, 0, 1}), EmptyConicError);
}

TEST_CASE("conic_to_geometric round-trips a synthesized rotated ellipse") {
  // Build coefficients from (center, axes, angle) the long way and recover them.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    const double cx = 50.0 * u(rng), cy = 50.0 * u(rng);
    const double a = 5.0 + 10.0 * std::abs(u(rng));
    const double b = 1.0 + std::abs(u(rng)) * (a - 1.0) * 0.99;
    const double ang = kPi * 0.499 * std::abs(u(rng));
    const double si = std::sin(ang), co = std::cos(ang);
    Conic c;
    c.c1 = a * a * si * si + b * b * co * co;
    c.c2 = 2.0 * (b * b - a * a) * si * co;
    c.c3 = a * a * co * co + b * b * si * si;
    c.c4 = -2.0 * c.c1 * cx - c.c2 * cy;
    c.c5 = -c.c2 * cx - 2.0 * c.c3 * cy;
    c.c6 = c.c1 * cx * cx + c.c2 * cx * cy + c.c3 * cy * cy - a * a * b * b;
    const EllipseGeo g = conic_to_geometric(c);
    CHECK(g.a == doctest::Approx(std::max(a, b)).epsilon(1e-9));
    CHECK(g.b == doctest::Approx(std::min(a, b)).epsilon(1e-9));
    CHECK(g.center.x() == doctest::Approx(cx).epsilon(1e-7));
    CHECK(g.center.y() == doctest::Approx(cy).epsilon(1e-7));
    if (a / b > 1.001)
      CHECK(std::abs(std::remainder(g.rotation - ang, kPi)) < 1e-7);
    // consistency: pi a b equals 2 pi delta1 / delta2^(3/2)
    const double d2 = c.delta2();
    const double d1 = c.c3 * c.c4 * c.c4 + c.c1 * c.c5 * c.c5 - c.c2 * c.c4 * c.c5 - c.c6 * d2;
    CHECK(g.area() == doctest::Approx(2.0 * kPi * std::abs(d1) / std::pow(d2, 1.5)).epsilon(1e-9));
  }
}

TEST_CASE("conic_to_geometric is stable under coefficient rescaling") {
  const InscribedEllipse e = max_inscribed_ellipse(case_study_quad());
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const double k = std::pow(10.0, u(rng));
    const EllipseGeo g = conic_to_geometric(e.conic.scaled(k));
    CHECK(g.a == doctest::Approx(e.geo.a).epsilon(1e-9));
    CHECK(g.b == doctest::Approx(e.geo.b).epsilon(1e-9));
    CHECK((g.center - e.geo.center).norm() < 1e-9);
    const EllipseGeo gn = conic_to_geometric(e.conic.scaled(-k));
    CHECK(gn.a == doctest::Approx(e.geo.a).epsilon(1e-9));
  }
}

TEST_CASE("conic_to_geometric evaluates the frozen reference column") {
  // Reference inscribed-ellipse coefficients for the case study, as printed
  // with limited precision; derived quantities recomputed from them.
  const Conic b_col{5.073e-6, -2.291e-6, 4.449e-6, 0.00033, -0.00129, -0.04999};
  const EllipseGeo g = conic_to_geometric(b_col);
  CHECK(g.a * g.b == doctest::Approx(31087.0).epsilon(5e-3));
  CHECK(std::abs(g.center.x() - 0.2) < 0.1);
  CHECK(std::abs(g.center.y() - 145.0) < 0.5);
}

TEST_CASE("conic normalization: unit norm and leading-sign convention") {
  const Conic raw{-2.0, 0.5, -3.0, 1.0, 4.0, -7.0};
  const Conic n = raw.normalized();
  CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(n.c1 > 0.0);  // sign flipped so the leading coefficient is positive
  CHECK(n.c2 / n.c1 == doctest::Approx(raw.c2 / raw.c1).epsilon(1e-14));

  const Conic no_x2{0.0, 0.0, -5.0, 0.0, 1.0, 2.0};
  CHECK(no_x2.normalized().c3 > 0.0);  // falls back to c3 when c1 = 0
  CHECK_THROWS_AS((Conic{0, 0, 0, 0, 0, 0}.normalized()), DegenerateError);
}

TEST_CASE("plane map inverse keeps the kind and round-trips points") {
  const auto [smap, scanon] = similarity_to_canonical(case_study_quad());
  (void)scanon;
  const PlaneMap inv = smap.inverse();
  CHECK(inv.kind == PlaneMap::Kind::Similarity);
  CHECK(inv.linear(0, 0) == doctest::Approx(inv.linear(1, 1)).epsilon(1e-13));
  CHECK(inv.linear(0, 1) == doctest::Approx(-inv.linear(1, 0)).epsilon(1e-13));
  const Quadrilateral q = case_study_quad();
  for (const auto& p : q.labeled())
    CHECK((inv.apply(smap.apply(p)) - p).norm() < 1e-9);

  PlaneMap singular;
  singular.linear << 1.0, 2.0, 2.0, 4.0;
  CHECK_THROWS_AS(singular.inverse(), SingularMapError);
}

TEST_CASE("transform_conic preserves membership") {
  const Conic circle{1, 0, 1, 0, 0, -1};

  PlaneMap identity;
  const Conic same = transform_conic(circle, identity);
  CHECK(same.normalized().c1 == doctest::Approx(circle.normalized().c1));
  CHECK(same.normalized().c6 == doctest::Approx(circle.normalized().c6));

  PlaneMap scale2;
  scale2.linear = 2.0 * Matrix2d::Identity();
  const EllipseGeo g = conic_to_geometric(transform_conic(circle, scale2));
  CHECK(g.a == doctest::Approx(2.0));
  CHECK(g.b == doctest::Approx(2.0));

  std::mt19937 rng(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  testsupport::RandomQuadGen gen(14);
  for (int i = 0; i < 20; ++i) {
    const Conic c = max_inscribed_ellipse(gen.next()).conic;
    PlaneMap m;
    do {
      m.linear << u(rng), u(rng), u(rng), u(rng);
    } while (std::abs(m.det()) < 0.1);
    m.offset = {100.0 * u(rng), 100.0 * u(rng)};
    const Conic cm = transform_conic(c, m);
    const EllipseGeo g0 = conic_to_geometric(c);
    for (int k = 0; k < 16; ++k) {
      const Vector2d p = g0.point_at(2.0 * kPi * k / 16.0);
      CHECK(vertex_residual(cm, m.apply(p)) < 1e-10);
    }
  }
}

TEST_CASE("transform_conic pullback preserves area ratios") {
  const Quadrilateral q = case_study_quad();
  const auto [map, canon] = affine_to_canonical(q);
  const Conic world = max_inscribed_ellipse(q).conic;
  const Conic canonical = transform_conic(world, map);
  const double world_ratio = conic_to_geometric(world).area() / q.area();
  // canonical quad (0,0),(0,1),(s,t),(1,0) shoelace area
  const double canon_quad_area = 0.5 * (canon.s + canon.t);
  const double canon_ratio = conic_to_geometric(canonical).area() / canon_quad_area;
  CHECK(world_ratio == doctest::Approx(canon_ratio).epsilon(1e-9));
}

TEST_CASE("max_inscribed_ellipse reproduces the case study") {
  const InscribedEllipse e = max_inscribed_ellipse(case_study_quad());
  CHECK(std::abs(e.geo.a - 200.3) < 0.5);
  CHECK(std::abs(e.geo.b - 155.2) < 0.5);
  const double ratio = e.geo.area() / 126000.0;
  CHECK(std::abs(ratio - 0.7747) < 0.001);
  CHECK(e.geo.a * e.geo.b == doctest::Approx(200.3 * 155.2).epsilon(5e-3));

  // recovered tangency parameter matches the reference maximizer value
  CHECK(std::abs(e.diagnostics.family_q - 0.527) < 0.005);
  // the closed-form expression leaves [0,1] for this quadrilateral
  CHECK(std::abs(e.diagnostics.closed_form_q - 1.34) < 0.01);
  CHECK(!e.diagnostics.closed_form_q_in_range);
  CHECK(std::isnan(e.diagnostics.closed_form_area));
}

TEST_CASE("max_inscribed_ellipse of the unit square is its incircle") {
  const InscribedEllipse e = max_inscribed_ellipse(unit_square());
  CHECK((e.geo.center - Vector2d{0.5, 0.5}).norm() < 1e-9);
  CHECK(e.geo.a == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(e.geo.b == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(e.geo.a - e.geo.b < 1e-8);
}

TEST_CASE("inscribed certificates hold on random quadrilaterals") {
  testsupport::RandomQuadGen gen(2024);
  for (int trial = 0; trial < 30; ++trial) {
    const Quadrilateral q = gen.next();
    const InscribedEllipse e = max_inscribed_ellipse(q);
    const auto v = q.ccw();

    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(restricted_discriminant(e.conic, v[i], v[(i + 1) % 4])) < 1e-7);
      CHECK(e.diagnostics.tangency_params[i] > 1e-9);
      CHECK(e.diagnostics.tangency_params[i] < 1.0 - 1e-9);
    }

    for (int k = 0; k < 720; ++k) {
      const Vector2d p = e.geo.point_at(2.0 * kPi * k / 720.0);
      CHECK(q.signed_inside_distance(p) >= -1e-6 * q.diameter());
    }

    // vertices on or outside: conic value has the non-interior sign
    const double center_val = e.conic.evaluate(e.geo.center);
    for (const auto& p : q.labeled())
      CHECK(e.conic.evaluate(p) * center_val <= 1e-9 * std::abs(center_val));

    // extremality of the returned pencil parameter
    const double lam = e.diagnostics.pencil_lambda;
    const double area_at = e.geo.area();
    for (const double d : {-1e-3, 1e-3}) {
      const Conic nb = inscribed_pencil_member(q, lam + d);
      CHECK(conic_to_geometric(nb).area() < area_at);
    }
  }
}

TEST_CASE("inscribed area ratio is affine-invariant") {
  testsupport::RandomQuadGen gen(77);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Quadrilateral q = gen.next();
    const double ratio = max_inscribed_ellipse(q).geo.area() / q.area();

    Matrix2d a;
    do {
      a << u(gen.rng()), u(gen.rng()), u(gen.rng()), u(gen.rng());
    } while (std::abs(a.determinant()) < 0.1);
    const Vector2d t{100.0 * u(gen.rng()), 100.0 * u(gen.rng())};
    std::array<Vector2d, 4> mapped;
    for (int i = 0; i < 4; ++i) mapped[i] = a * q.labeled()[i] + t;
    const Quadrilateral qm = validate_quadrilateral(mapped);
    const double ratio_m = max_inscribed_ellipse(qm).geo.area() / qm.area();
    CHECK(ratio_m == doctest::Approx(ratio).epsilon(1e-6));
  }
}

TEST_CASE("maximal inscribed ellipse of a parallelogram covers pi/4 of it") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 15; ++trial) {
    const Quadrilateral q = testsupport::random_parallelogram(rng);
    const double ratio = max_inscribed_ellipse(q).geo.area() / q.area();
    CHECK(ratio == doctest::Approx(kPi / 4.0).epsilon(1e-9));
  }
}

TEST_CASE("circumscribed_family_conic on the canonical square") {
  const CanonicalQuad square{1.0, 1.0, Vector2d{1.0, 0.0}};
  const Conic circ = circumscribed_family_conic(square, 1.0).normalized();
  const Conic expect = Conic{1, 0, 1, -1, -1, 0}.normalized();
  CHECK(circ.c1 == doctest::Approx(expect.c1).epsilon(1e-12));
  CHECK(std::abs(circ.c2) < 1e-12);
  CHECK(circ.c4 == doctest::Approx(expect.c4).epsilon(1e-12));

  CHECK_THROWS_AS(circumscribed_family_conic(square, 0.0), NotAnEllipseError);

  const CanonicalQuad no_vw{1.0, 1.0, std::nullopt};
  CHECK_THROWS_AS(circumscribed_family_conic(no_vw, 1.0), OutOfRangeError);
}

TEST_CASE("circumscribed family interpolates the canonical vertices") {
  const auto [map, canon] = similarity_to_canonical(case_study_quad());
  (void)map;
  const Conic c = circumscribed_family_conic(canon, 1.610).normalized();
  const std::array<Vector2d, 4> verts = {Vector2d{0, 0}, Vector2d{0, 1},
                                         Vector2d{canon.s, canon.t}, *canon.vw};
  for (const auto& p : verts) CHECK(std::abs(c.evaluate(p)) < 1e-6);
}

TEST_CASE("solve_min_circumscribed_u on the case study and the square") {
  const auto [map, canon] = similarity_to_canonical(case_study_quad());
  (void)map;
  const CircumscribedUSolve info = solve_min_circumscribed_u_info(canon);
  CHECK(std::abs(info.u - 1.610) < 0.005);
  CHECK(info.real_roots == 3);
  CHECK(info.ellipse_roots == 1);
  CHECK(info.cubic_residual < 1e-9);
  // For this quadrilateral the similarity-frame root is not the family-area
  // minimum; the direct minimization lands strictly below it.
  CHECK(info.direct_min_area < info.selected_area);
  CHECK((info.selected_area - info.direct_min_area) / info.direct_min_area > 1e-3);

  const CanonicalQuad square{1.0, 1.0, Vector2d{1.0, 0.0}};
  const CircumscribedUSolve sq = solve_min_circumscribed_u_info(square);
  CHECK(sq.u == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sq.real_roots == 2);  // the cubic degenerates to 2u^2 - 2u = 0
  CHECK(sq.ellipse_roots == 1);
  // symmetric case: the root is the family minimum
  CHECK(sq.direct_min_u == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sq.direct_min_area == doctest::Approx(sq.selected_area).epsilon(1e-9));
  CHECK(solve_min_circumscribed_u(square) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("min_circumscribed_ellipse reproduces the case study") {
  const CircumscribedEllipse e = min_circumscribed_ellipse(case_study_quad());
  CHECK(std::abs(e.geo.a - 294.3) < 0.5);
  CHECK(std::abs(e.geo.b - 223.5) < 0.5);
  CHECK(e.geo.area() == doctest::Approx(206536.8).epsilon(2e-3));
  CHECK(std::abs(e.diagnostics.u - 1.610) < 0.005);
  CHECK(e.geo.a * e.geo.b == doctest::Approx(294.3 * 223.5).epsilon(5e-3));

  const Quadrilateral q = case_study_quad();
  for (const auto& p : q.labeled())
    CHECK(vertex_residual(e.conic, p) < 1e-8);

  // The independent pencil optimum is strictly below the reference-frame
  // selection for this quadrilateral; the diagnostics expose the gap.
  CHECK(e.diagnostics.pencil_min_area < e.geo.area());
  CHECK(e.diagnostics.area_vs_pencil_rel == doctest::Approx(0.0173).epsilon(0.05));
  CHECK(e.diagnostics.cubic_min_area ==
        doctest::Approx(e.diagnostics.pencil_min_area).epsilon(1e-9));
  CHECK(e.diagnostics.direct_min_area ==
        doctest::Approx(e.diagnostics.pencil_min_area).epsilon(1e-6));
}

TEST_CASE("min_circumscribed_ellipse of the unit square is its circumcircle") {
  const CircumscribedEllipse e = min_circumscribed_ellipse(unit_square());
  CHECK((e.geo.center - Vector2d{0.5, 0.5}).norm() < 1e-9);
  CHECK(e.geo.a == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(e.geo.b == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(e.diagnostics.area_vs_pencil_rel < 1e-9);
}

TEST_CASE("pencil oracle and affine-frame cubic route agree on random quadrilaterals") {
  testsupport::RandomQuadGen gen(31337);
  for (int trial = 0; trial < 100; ++trial) {
    const Quadrilateral q = gen.next();
    const auto [pc, pgeo] = min_area_circumscribed_pencil(q);
    (void)pc;
    const auto [cc, cgeo] = min_area_circumscribed_cubic(q);
    CHECK(std::abs(cgeo.area() - pgeo.area()) / pgeo.area() <= 1e-6);

    for (const auto& p : q.labeled()) CHECK(vertex_residual(cc, p) < 1e-8);

    // quadrilateral boundary (vertices-free points) inside the ellipse
    const double center_val = cc.evaluate(cgeo.center);
    const auto v = q.ccw();
    for (int i = 0; i < 4; ++i) {
      for (int k = 1; k < 8; ++k) {
        const Vector2d p = v[i] + (v[(i + 1) % 4] - v[i]) * (k / 8.0);
        CHECK(cc.evaluate(p) * center_val > 0.0);
      }
    }
  }
}

TEST_CASE("minimal circumscribed ellipse of a parallelogram covers pi/2 of it") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const Quadrilateral q = testsupport::random_parallelogram(rng);
    const auto [c, geo] = min_area_circumscribed_cubic(q);
    (void)c;
    CHECK(geo.area() / q.area() == doctest::Approx(kPi / 2.0).epsilon(1e-8));
    const auto [pc, pgeo] = min_area_circumscribed_pencil(q);
    (void)pc;
    CHECK(pgeo.area() / q.area() == doctest::Approx(kPi / 2.0).epsilon(1e-6));
  }
}

TEST_CASE("circumscribed extremality at the area-minimal family parameter") {
  testsupport::RandomQuadGen gen(555);
  for (int trial = 0; trial < 20; ++trial) {
    const Quadrilateral q = gen.next();
    // area-invariant frame: fourth vertex (1,0)
    const auto& v = q.labeled();
    const std::array<Vector2d, 4> pts =
        q.labels_clockwise() ? v : std::array<Vector2d, 4>{v[0], v[3], v[2], v[1]};
    const Quadrilateral qcw = validate_quadrilateral(pts);
    const auto [map, canon0] = affine_to_canonical(qcw);
    (void)map;
    const CanonicalQuad canon{canon0.s, canon0.t, Vector2d{1.0, 0.0}};
    const CircumscribedUSolve info = solve_min_circumscribed_u_info(canon);
    const double area_at = conic_to_geometric(circumscribed_family_conic(canon, info.u)).area();
    for (const double d : {-1e-3, 1e-3}) {
      const double area_nb =
          conic_to_geometric(circumscribed_family_conic(canon, info.u + d)).area();
      CHECK(area_nb > area_at);
    }
    // in this frame the cubic root is the family minimum
    CHECK(info.direct_min_area == doctest::Approx(info.selected_area).epsilon(1e-9));
  }
}

TEST_CASE("cubic residual property at returned roots") {
  testsupport::RandomQuadGen gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto [map, canon] = similarity_to_canonical(gen.next());
    (void)map;
    try {
      const CircumscribedUSolve info = solve_min_circumscribed_u_info(canon);
      CHECK(info.cubic_residual < 1e-9);
    } catch (const NoEllipseRootError&) {
      // the similarity-frame cubic has no ellipse root for a sizable share
      // of quadrilaterals; that is a reported condition, not a failure here
    }
  }
}

TEST_CASE("geometry results are deterministic") {
  const Quadrilateral q = case_study_quad();
  const InscribedEllipse e1 = max_inscribed_ellipse(q);
  const InscribedEllipse e2 = max_inscribed_ellipse(q);
  CHECK(std::memcmp(&e1.geo.a, &e2.geo.a, sizeof(double)) == 0);
  CHECK(std::memcmp(&e1.diagnostics.pencil_lambda, &e2.diagnostics.pencil_lambda,
                    sizeof(double)) == 0);
  const CircumscribedEllipse c1 = min_circumscribed_ellipse(q);
  const CircumscribedEllipse c2 = min_circumscribed_ellipse(q);
  CHECK(std::memcmp(&c1.geo.a, &c2.geo.a, sizeof(double)) == 0);
  CHECK(std::memcmp(&c1.diagnostics.u, &c2.diagnostics.u, sizeof(double)) == 0);
}

}  // TEST_SUITE

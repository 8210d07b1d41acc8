#include "doctest.h"

#include "caustics/errors.hpp"
#include "caustics/parse.hpp"
#include "caustics/projective.hpp"

using namespace caustics;

namespace {
GaussianRational Q(long n) { return GaussianRational(n); }
ProjPoint pt(long x, long y, long z) { return ProjPoint(Q(x), Q(y), Q(z)); }
}

TEST_CASE("join and meet on rational points") {
  ProjLine l = join(pt(1, 0, 1), pt(0, 1, 1));
  CHECK(same_line(l, ProjLine(Q(-1), Q(-1), Q(1))));
  CHECK(incident(pt(1, 0, 1), l));
  CHECK(incident(pt(0, 1, 1), l));
  ProjPoint p = meet(l, line_at_infinity());
  CHECK(same_point(p, pt(1, -1, 0)));
  CHECK_THROWS_AS(join(pt(2, 4, 6), pt(1, 2, 3)), DegenerateError);
  CHECK_THROWS_AS(meet(l, l), DegenerateError);
}

TEST_CASE("the cyclic points span the line at infinity") {
  ProjLine l = join(cyclic_point_first(), cyclic_point_second());
  CHECK(same_line(l, line_at_infinity()));
  CHECK(incident(cyclic_point_first(), line_at_infinity()));
}

TEST_CASE("normalized coordinates scale the first nonzero entry to one") {
  ProjPoint p(Q(-2), Q(4), Q(6));
  CHECK(p.str() == "[1:-2:-3]");
  ProjPoint q(Q(0), Q(0), Q(5));
  CHECK(q.str() == "[0:0:1]");
  CHECK_THROWS_AS(ProjPoint(Q(0), Q(0), Q(0)), DegenerateError);
}

TEST_CASE("reflection across a vertical mirror flips x") {
  ProjLine mirror(Q(1), Q(0), Q(0));  // V(x)
  ProjPoint img = reflect_point(mirror, pt(1, 2, 3));
  CHECK(same_point(img, pt(-1, 2, 3)));
}

TEST_CASE("reflection across x = z moves the origin") {
  ProjLine mirror(Q(1), Q(0), Q(-1));  // V(x - z)
  ProjPoint img = reflect_point(mirror, pt(0, 0, 1));
  CHECK(same_point(img, pt(2, 0, 1)));
}

TEST_CASE("reflection is an involution fixing the mirror") {
  ProjLine mirror(Q(3), Q(-2), Q(5));
  const ProjPoint samples[] = {pt(1, 2, 3), pt(-4, 0, 1), pt(7, 7, 1), pt(1, 0, 0),
                               pt(0, 1, 0)};
  for (const ProjPoint& p : samples) {
    ProjPoint back = reflect_point(mirror, reflect_point(mirror, p));
    CHECK(same_point(back, p));
  }
  // Points on the mirror are fixed: [0 : 5 : 2] satisfies 3*0 - 2*5 + 5*2 = 0.
  ProjPoint on(Q(0), Q(5), Q(2));
  CHECK(same_point(reflect_point(mirror, on), on));
  CHECK_THROWS_AS(reflect_point(line_at_infinity(), pt(1, 2, 3)), DegenerateError);
}

TEST_CASE("tangent and normal of the unit circle") {
  MPoly circle = parse_poly("x^2 + y^2 - z^2");
  ProjPoint m = pt(1, 0, 1);
  ProjLine t = tangent_line(circle, m);
  CHECK(same_line(t, ProjLine(Q(1), Q(0), Q(-1))));  // x = z
  ProjLine n = normal_line(circle, m);
  CHECK(same_line(n, ProjLine(Q(0), Q(1), Q(0))));  // y = 0
  CHECK(incident(m, t));
  CHECK(incident(m, n));
  // The tangent at a singular point does not exist.
  MPoly cusp = parse_poly("y^2*z - x^3");
  CHECK_THROWS_AS(tangent_line(cusp, pt(0, 0, 1)), DegenerateError);
}

TEST_CASE("reflective locus excludes cyclic points and singularities") {
  MPoly circle = parse_poly("x^2 + y^2 - z^2");
  CHECK(in_reflective_locus(circle, pt(1, 0, 1)));
  CHECK(in_reflective_locus(circle, pt(0, 1, 1)));
  CHECK_FALSE(in_reflective_locus(circle, pt(1, 1, 1)));  // not on the curve
  CHECK_FALSE(in_reflective_locus(circle, cyclic_point_first()));
  CHECK_FALSE(in_reflective_locus(circle, cyclic_point_second()));
  MPoly cusp = parse_poly("y^2*z - x^3");
  CHECK_FALSE(in_reflective_locus(cusp, pt(0, 0, 1)));  // singular
  CHECK(in_reflective_locus(cusp, pt(1, 1, 1)));
}

TEST_CASE("a central ray reflects back through the center of the circle") {
  MPoly circle = parse_poly("x^2 + y^2 - z^2");
  // Source at the center: every reflected ray is the normal, here y = 0.
  ProjLine r = reflected_line(circle, pt(0, 0, 1), pt(1, 0, 1));
  CHECK(same_line(r, ProjLine(Q(0), Q(1), Q(0))));
}

TEST_CASE("reflected ray for an off-center source on the circle") {
  MPoly circle = parse_poly("x^2 + y^2 - z^2");
  // Mirror image of [2:1:1] in the tangent x = z is [0:1:1]; the reflected
  // line joins the contact point with it: x + y - z = 0.
  ProjLine r = reflected_line(circle, pt(2, 1, 1), pt(1, 0, 1));
  CHECK(same_line(r, ProjLine(Q(1), Q(1), Q(-1))));
  CHECK(incident(pt(1, 0, 1), r));
}

TEST_CASE("reflected line preconditions") {
  MPoly circle = parse_poly("x^2 + y^2 - z^2");
  CHECK_THROWS_AS(reflected_line(circle, pt(2, 1, 1), pt(1, 1, 1)), DegenerateError);
  CHECK_THROWS_AS(reflected_line(circle, pt(2, 1, 1), cyclic_point_first()),
                  DegenerateError);
  CHECK_THROWS_AS(reflected_line(circle, pt(1, 0, 1), pt(1, 0, 1)), DegenerateError);
}

TEST_CASE("reflection law on a parabola point") {
  // y = x^2 at the point (1, 1): gradient of y z - x^2 is (-2x, z, y).
  MPoly parab = parse_poly("y*z - x^2");
  ProjPoint m = pt(1, 1, 1);
  ProjLine t = tangent_line(parab, m);
  CHECK(same_line(t, ProjLine(Q(-2), Q(1), Q(1))));
  // The incident ray through the focus [0:1:4] reflects to a line parallel to
  // the axis: the classical mirror property run backwards.  Reflecting the
  // focus in the tangent must land on the vertical line through m.
  ProjPoint focus(Q(0), GaussianRational(1, 4), Q(1));
  ProjLine r = reflected_line(parab, focus, m);
  // Vertical direction [0:1:0] lies on the reflected line.
  CHECK(incident(pt(0, 1, 0), r));
}

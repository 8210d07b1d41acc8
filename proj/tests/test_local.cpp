#include "doctest.h"

#include <vector>

#include "caustics/errors.hpp"
#include "caustics/local.hpp"
#include "caustics/parse.hpp"
#include "caustics/projective.hpp"

using namespace caustics;

namespace {

GaussianRational Q(long n) { return GaussianRational(n); }
ProjPoint pt(long x, long y, long z) { return ProjPoint(Q(x), Q(y), Q(z)); }

const MPoly kCircle = parse_poly("x^2 + y^2 - z^2");
const MPoly kEllipse = parse_poly("x^2 + 2*y^2 - z^2");
const MPoly kParabola = parse_poly("y*z - x^2");
const MPoly kCuspCubic = parse_poly("y^2*z - x^3");
const MPoly kNodalCubic = parse_poly("y^2*z - x^2*z - x^3");
const MPoly kSmoothCubic = parse_poly("y^2*z - x^3 + x*z^2");
const MPoly kFermatCubic = parse_poly("x^3 + y^3 + z^3");
const MPoly kSurdQuartic = parse_poly("(x^2 - 2*z^2)^2 - y^3*z");

bool has_class(const std::vector<BranchClass>& v, int count, int mult, int contact,
               bool tan_inf) {
  for (const auto& b : v) {
    if (b.count == count && b.mult == mult && b.tangent_contact == contact &&
        b.tangent_at_infinity == tan_inf) {
      return true;
    }
  }
  return false;
}

bool has_class(const std::vector<InfinityPointClass>& v, int count, int contact,
               int mult) {
  for (const auto& c : v) {
    if (c.count == count && c.line_contact == contact && c.multiplicity == mult) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("multiplicity at smooth, singular, and absent points") {
  CHECK(multiplicity_at(kCircle, pt(1, 0, 1)) == 1);
  CHECK(multiplicity_at(kCircle, pt(0, 0, 1)) == 0);  // not on the curve
  CHECK(multiplicity_at(kCircle, cyclic_point_first()) == 1);
  CHECK(multiplicity_at(kCircle, cyclic_point_second()) == 1);
  CHECK(multiplicity_at(kCuspCubic, pt(0, 0, 1)) == 2);
  CHECK(multiplicity_at(kNodalCubic, pt(0, 0, 1)) == 2);
  CHECK(multiplicity_at(kSurdQuartic, pt(0, 1, 0)) == 1);
}

TEST_CASE("branches at a smooth point with ordinary tangent") {
  auto v = branches_at(kCircle, pt(1, 0, 1));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 1, 1, 2, false));
}

TEST_CASE("branches at a smooth point tangent to the line at infinity") {
  // The parabola touches z = 0 at [0:1:0] with contact 2.
  auto v = branches_at(kParabola, pt(0, 1, 0));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 1, 1, 2, true));

  // An inflexional tangency: contact 3 at the flex of the cuspidal cubic.
  auto w = branches_at(kCuspCubic, pt(0, 1, 0));
  REQUIRE(w.size() == 1);
  CHECK(has_class(w, 1, 1, 3, true));

  // Contact 4 on a quartic.
  auto u = branches_at(parse_poly("x^4 - y^3*z"), pt(0, 1, 0));
  REQUIRE(u.size() == 1);
  CHECK(has_class(u, 1, 1, 4, true));
}

TEST_CASE("branch data of an ordinary cusp") {
  auto v = branches_at(kCuspCubic, pt(0, 0, 1));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 1, 2, 3, false));
}

TEST_CASE("branch data of a rational node") {
  auto v = branches_at(kNodalCubic, pt(0, 0, 1));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 2, 1, 2, false));
}

TEST_CASE("branch data of a higher-order cusp needs a ramified expansion") {
  // y^3 = x^4 at the origin: one branch with multiplicity 3 and contact 4.
  auto v = branches_at(parse_poly("x^4 - y^3*z"), pt(0, 0, 1));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 1, 3, 4, false));
}

TEST_CASE("conjugate branch tangents live in a quadratic extension") {
  // y^2 = 2x^2 - x^3 at the origin: a node whose tangents y = +-sqrt(2) x
  // are conjugate over Q(i); the pair is reported as one class of size two.
  auto v = branches_at(parse_poly("y^2*z - 2*x^2*z + x^3"), pt(0, 0, 1));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 2, 1, 2, false));
}

TEST_CASE("singular point at infinity tangent to the infinite line") {
  // In the chart at [0:1:0] the curve is z^2 - x^3 + x^4: a cusp whose
  // tangent is the line z = 0.
  const MPoly f = parse_poly("z^2*y^2 - x^3*y + x^4");
  auto v = branches_at(f, pt(0, 1, 0));
  REQUIRE(v.size() == 1);
  CHECK(has_class(v, 1, 2, 3, true));
  CHECK(multiplicity_at(f, pt(0, 1, 0)) == 2);
  CHECK(tangency_count_at(f, pt(0, 1, 0)) == 2);
}

TEST_CASE("branches at a point off the curve fail loudly") {
  CHECK_THROWS_AS(branches_at(kCircle, pt(0, 0, 1)), DegenerateError);
}

TEST_CASE("tangency counts at the cyclic points") {
  CHECK(tangency_count_at(kCircle, cyclic_point_first()) == 0);
  CHECK(tangency_count_at(kCircle, cyclic_point_second()) == 0);
  CHECK(tangency_count_at(kParabola, pt(0, 1, 0)) == 1);

  // A conic through [1:i:0] tangent to z = 0 there.
  const MPoly conic = parse_poly("(x + i*y)^2 - y*z");
  CHECK(tangency_count_at(conic, cyclic_point_first()) == 1);
  CHECK(tangency_count_at(conic, cyclic_point_second()) == 0);  // not on curve

  // Cubics tangent to z = 0 at [1:i:0] with contact 2 and 3.
  CHECK(tangency_count_at(parse_poly("(x + i*y)^2*(x - i*y) + x^2*z"),
                          cyclic_point_first()) == 1);
  CHECK(tangency_count_at(parse_poly("(x + i*y)^3 + x^2*z"), cyclic_point_first()) == 1);
}

TEST_CASE("stratification of the points on the line at infinity") {
  auto circle = infinity_profile(kCircle);
  REQUIRE(circle.size() == 1);
  CHECK(has_class(circle, 2, 1, 1));

  auto ellipse = infinity_profile(kEllipse);
  REQUIRE(ellipse.size() == 1);
  CHECK(has_class(ellipse, 2, 1, 1));

  auto parabola = infinity_profile(kParabola);
  REQUIRE(parabola.size() == 1);
  CHECK(has_class(parabola, 1, 2, 1));

  auto cusp = infinity_profile(kCuspCubic);
  REQUIRE(cusp.size() == 1);
  CHECK(has_class(cusp, 1, 3, 1));

  auto quartic = infinity_profile(kSurdQuartic);
  REQUIRE(quartic.size() == 1);
  CHECK(has_class(quartic, 1, 4, 1));

  // [1:0:0] lies on x*z = y^2 with contact 2.
  auto sideways = infinity_profile(parse_poly("x*z - y^2"));
  REQUIRE(sideways.size() == 1);
  CHECK(has_class(sideways, 1, 2, 1));

  // A singular point on z = 0 together with a transverse smooth point.
  auto mixed = infinity_profile(parse_poly("z^2*y^2 - x^3*y + x^4"));
  REQUIRE(mixed.size() == 2);
  CHECK(has_class(mixed, 1, 1, 1));
  CHECK(has_class(mixed, 1, 3, 2));
}

TEST_CASE("defect of the intersection with the line at infinity") {
  CHECK(infinity_defect(kCircle) == 0);
  CHECK(infinity_defect(kEllipse) == 0);
  CHECK(infinity_defect(kParabola) == 1);
  CHECK(infinity_defect(kCuspCubic) == 2);
  CHECK(infinity_defect(kNodalCubic) == 2);
  CHECK(infinity_defect(kSurdQuartic) == 3);
  CHECK(infinity_defect(parse_poly("x*z - y^2")) == 1);
  CHECK(infinity_defect(parse_poly("z^2*y^2 - x^3*y + x^4")) == 1);
}

TEST_CASE("weighted inflection count of smooth curves") {
  // Conics have no inflections.
  CHECK(flex_excess(kCircle) == 0);
  CHECK(flex_excess(kEllipse) == 0);
  CHECK(flex_excess(kParabola) == 0);
  // A smooth cubic has nine simple inflections; one of the nine lies at
  // [0:1:0] with tangent z = 0 and is discarded here.
  CHECK(flex_excess(kFermatCubic) == 9);
  CHECK(flex_excess(kSmoothCubic) == 8);
}

TEST_CASE("weighted inflection count of singular curves") {
  CHECK(flex_excess(kCuspCubic) == 0);
  CHECK(flex_excess(kNodalCubic) == 2);
  // Both singular points have conjugate abscissae x = +-sqrt(2), handled in
  // the quadratic extension.
  CHECK(flex_excess(kSurdQuartic) == 6);
}

TEST_CASE("degenerate inputs are rejected") {
  CHECK_THROWS_AS(flex_excess(parse_poly("x^2 + y")), DegenerateError);
  CHECK_THROWS_AS(flex_excess(parse_poly("z*(x^2 + y^2 - z^2)")), DegenerateError);
  CHECK_THROWS_AS(flex_excess(parse_poly("(x^2 + y^2 - z^2)^2")), DegenerateError);
  CHECK_THROWS_AS(flex_excess(parse_poly("x^2 - 2*y^2")), DegenerateError);
  // A line pair is square-free but splits into lines.
  CHECK_THROWS_AS(flex_excess(parse_poly("(x - z)^2 - y^2")), DegenerateError);
  CHECK_THROWS_AS(invariant_bundle(parse_poly("x*y - z*y")), DegenerateError);
}

TEST_CASE("intersection multiplicity of transverse and tangent pairs") {
  CHECK(local_intersection_multiplicity(parse_poly("x"), parse_poly("y"), pt(0, 0, 1)) == 1);
  CHECK(local_intersection_multiplicity(kCircle, parse_poly("x - z"), pt(1, 0, 1)) == 2);
  CHECK(local_intersection_multiplicity(kParabola, parse_poly("z"), pt(0, 1, 0)) == 2);
  CHECK(local_intersection_multiplicity(kCuspCubic, parse_poly("z"), pt(0, 1, 0)) == 3);
  // Off the intersection the multiplicity vanishes.
  CHECK(local_intersection_multiplicity(kCircle, parse_poly("x - z"), pt(0, 1, 0)) == 0);
}

TEST_CASE("intersection multiplicity through a cusp and a node") {
  const ProjPoint o = pt(0, 0, 1);
  CHECK(local_intersection_multiplicity(kCuspCubic, parse_poly("x"), o) == 2);
  CHECK(local_intersection_multiplicity(kCuspCubic, parse_poly("y"), o) == 3);
  CHECK(local_intersection_multiplicity(kCuspCubic, parse_poly("x*y^2"), o) == 8);
  CHECK(local_intersection_multiplicity(kNodalCubic, parse_poly("x*y^2"), o) == 6);
}

TEST_CASE("intersection multiplicity rejects shared components") {
  CHECK_THROWS_AS(local_intersection_multiplicity(kCircle, kCircle, pt(1, 0, 1)),
                  DegenerateError);
  CHECK_THROWS_AS(
      local_intersection_multiplicity(kParabola, parse_poly("z*(y*z - x^2)"), pt(0, 1, 0)),
      DegenerateError);
}

TEST_CASE("invariant bundle of the circle") {
  InvariantReport r = invariant_bundle(kCircle);
  CHECK(r.degree == 2);
  CHECK(r.flex_excess == 0);
  CHECK(r.tangency_first == 0);
  CHECK(r.tangency_second == 0);
  CHECK(r.infinity_defect == 0);
  CHECK(r.mult_first == 1);
  CHECK(r.mult_second == 1);
  CHECK(r.predicted_degree == 6);
  CHECK(r.predicted_class(2) == 4);
}

TEST_CASE("invariant bundle of the ellipse") {
  InvariantReport r = invariant_bundle(kEllipse);
  CHECK(r.degree == 2);
  CHECK(r.flex_excess == 0);
  CHECK(r.infinity_defect == 0);
  CHECK(r.mult_first == 0);
  CHECK(r.mult_second == 0);
  CHECK(r.predicted_degree == 6);
  CHECK(r.predicted_class(2) == 6);
}

TEST_CASE("invariant bundle of the parabola") {
  InvariantReport r = invariant_bundle(kParabola);
  CHECK(r.degree == 2);
  CHECK(r.flex_excess == 0);
  CHECK(r.tangency_first == 0);
  CHECK(r.infinity_defect == 1);
  CHECK(r.mult_first == 0);
  CHECK(r.predicted_degree == 6);
  CHECK(r.predicted_class(2) == 5);
}

TEST_CASE("invariant bundle of the cuspidal cubic") {
  InvariantReport r = invariant_bundle(kCuspCubic);
  CHECK(r.degree == 3);
  CHECK(r.flex_excess == 0);
  CHECK(r.tangency_first == 0);
  CHECK(r.infinity_defect == 2);
  CHECK(r.mult_first == 0);
  CHECK(r.predicted_degree == 9);
  CHECK(r.predicted_class(3) == 7);
}

TEST_CASE("invariant bundle of the nodal cubic") {
  InvariantReport r = invariant_bundle(kNodalCubic);
  CHECK(r.degree == 3);
  CHECK(r.flex_excess == 2);
  CHECK(r.tangency_first == 0);
  CHECK(r.infinity_defect == 2);
  CHECK(r.predicted_degree == 11);
  CHECK(r.predicted_class(4) == 9);
}

TEST_CASE("invariant bundle of a quartic with conjugate cusps") {
  InvariantReport r = invariant_bundle(kSurdQuartic);
  CHECK(r.degree == 4);
  CHECK(r.flex_excess == 6);
  CHECK(r.tangency_first == 0);
  CHECK(r.tangency_second == 0);
  CHECK(r.infinity_defect == 3);
  CHECK(r.mult_first == 0);
  CHECK(r.mult_second == 0);
  CHECK(r.predicted_degree == 18);
}

TEST_CASE("invariant bundle of a cubic tangent to z = 0 at a cyclic point") {
  InvariantReport r = invariant_bundle(parse_poly("(x + i*y)^3 + x^2*z"));
  CHECK(r.degree == 3);
  CHECK(r.flex_excess == 0);
  CHECK(r.tangency_first == 1);
  CHECK(r.tangency_second == 0);
  CHECK(r.infinity_defect == 2);
  CHECK(r.mult_first == 1);
  CHECK(r.mult_second == 0);
  CHECK(r.predicted_degree == 8);
}

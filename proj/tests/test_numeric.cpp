#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "caustics/errors.hpp"
#include "caustics/numeric.hpp"
#include "caustics/parse.hpp"
#include "caustics/projective.hpp"

using namespace caustics;

namespace {

using Complex = std::complex<double>;

GaussianRational Q(long n) { return GaussianRational(n); }
ProjPoint pt(long x, long y, long z) { return ProjPoint(Q(x), Q(y), Q(z)); }

const MPoly kCircle = parse_poly("x^2 + y^2 - z^2");
const MPoly kEllipse = parse_poly("x^2 + 2*y^2 - z^2");
const MPoly kParabola = parse_poly("y*z - x^2");
const MPoly kCusp = parse_poly("y^2*z - x^3");

std::vector<Complex> sorted_roots(std::vector<Complex> r) {
  std::sort(r.begin(), r.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return r;
}

bool close(const Complex& a, const Complex& b, double tol) { return std::abs(a - b) < tol; }

double curve_residual(const MPoly& f, const NumericPoint& p) {
  return std::abs(f.eval_complex(
      {p.coords[0], p.coords[1], p.coords[2], Complex(0.0), Complex(0.0), Complex(0.0)}));
}

}  // namespace

TEST_CASE("generator streams are deterministic and splittable") {
  Rng a(42), b(42);
  for (int k = 0; k < 100; ++k) CHECK(a.next() == b.next());
  Rng base(7);
  CHECK(base.split(0).next() != base.split(1).next());
  // Splitting twice with the same index reproduces the same child stream.
  CHECK(base.split(3).next() == base.split(3).next());
  for (int k = 0; k < 1000; ++k) {
    double u = Rng(std::uint64_t(k)).uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(9);
  bool saw_lo = false, saw_hi = false;
  for (int k = 0; k < 300; ++k) {
    long v = c.uniform_int(-2, 2);
    CHECK(v >= -2);
    CHECK(v <= 2);
    saw_lo = saw_lo || v == -2;
    saw_hi = saw_hi || v == 2;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
}

TEST_CASE("root finder solves factored cubics and quadratics exactly") {
  // (t - 1)(t - 2)(t - 3) = t^3 - 6 t^2 + 11 t - 6
  auto r = sorted_roots(polynomial_roots({{-6, 0}, {11, 0}, {-6, 0}, {1, 0}}));
  REQUIRE(r.size() == 3);
  CHECK(close(r[0], {1, 0}, 1e-9));
  CHECK(close(r[1], {2, 0}, 1e-9));
  CHECK(close(r[2], {3, 0}, 1e-9));

  // t^2 + 1 = 0
  auto im = sorted_roots(polynomial_roots({{1, 0}, {0, 0}, {1, 0}}));
  REQUIRE(im.size() == 2);
  CHECK(close(im[0], {0, -1}, 1e-10));
  CHECK(close(im[1], {0, 1}, 1e-10));
}

TEST_CASE("root finder handles multiple roots, scaling, and degenerate inputs") {
  // (t - 1)^2: double roots converge with reduced accuracy.
  auto dbl = polynomial_roots({{1, 0}, {-2, 0}, {1, 0}});
  REQUIRE(dbl.size() == 2);
  for (const auto& z : dbl) CHECK(close(z, {1, 0}, 1e-5));

  // (t - 1)(t - 2)...(t - 5) scaled by 7: same roots.
  std::vector<Complex> c{{1, 0}};
  for (int root = 1; root <= 5; ++root) {
    std::vector<Complex> next(c.size() + 1, Complex(0, 0));
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= double(root) * c[k];
    }
    c = next;
  }
  for (auto& ck : c) ck *= 7.0;
  auto quint = sorted_roots(polynomial_roots(c));
  REQUIRE(quint.size() == 5);
  for (int root = 1; root <= 5; ++root)
    CHECK(close(quint[std::size_t(root - 1)], {double(root), 0}, 1e-6));

  CHECK(polynomial_roots({{5, 0}}).empty());
  CHECK(close(polynomial_roots({{4, 0}, {2, 0}}).at(0), {-2, 0}, 1e-14));
  CHECK_THROWS_AS(polynomial_roots({{0, 0}, {0, 0}}), NumericError);
  // A tiny leading coefficient is trimmed instead of amplified.
  auto trimmed = polynomial_roots({{4, 0}, {2, 0}, {1e-17, 0}});
  REQUIRE(trimmed.size() == 1);
  CHECK(close(trimmed[0], {-2, 0}, 1e-12));
}

TEST_CASE("curve samples satisfy the residual and reflectivity contracts") {
  auto pts = sample_curve(kCircle, 10, 5);
  REQUIRE(pts.size() == 10);
  for (const auto& p : pts) {
    CHECK(p.residual < 1e-10);
    CHECK(curve_residual(kCircle, p) < 1e-10);
    double m = std::max({std::abs(p.coords[0]), std::abs(p.coords[1]), std::abs(p.coords[2])});
    CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("curve sampling is bit-identical for a fixed seed") {
  auto a = sample_curve(kParabola, 25, 99);
  auto b = sample_curve(kParabola, 25, 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (int j = 0; j < 3; ++j) {
      CHECK(a[k].coords[j].real() == b[k].coords[j].real());
      CHECK(a[k].coords[j].imag() == b[k].coords[j].imag());
    }
  auto c = sample_curve(kParabola, 25, 100);
  bool all_same = true;
  for (std::size_t k = 0; k < c.size(); ++k)
    all_same = all_same && std::abs(c[k].coords[0] - a[k].coords[0]) < 1e-15;
  CHECK(!all_same);
}

TEST_CASE("cusp samples stay clear of the singular point") {
  auto pts = sample_curve(kCusp, 30, 11);
  const MPoly fx = kCusp.derivative(VX);
  const MPoly fy = kCusp.derivative(VY);
  for (const auto& p : pts) {
    Complex gx = fx.eval_complex({p.coords[0], p.coords[1], p.coords[2], 0, 0, 0});
    Complex gy = fy.eval_complex({p.coords[0], p.coords[1], p.coords[2], 0, 0, 0});
    CHECK(std::abs(gx * gx + gy * gy) > 1e-8);
    // The cusp sits at [0:0:1]; the reflectivity floor keeps samples away.
    double dist = std::hypot(std::abs(p.coords[0] / p.coords[2]),
                             std::abs(p.coords[1] / p.coords[2]));
    CHECK(dist > 1e-4);
  }
}

TEST_CASE("a curve with no reflective points cannot be sampled") {
  // x^2 + y^2 factors into the two isotropic lines through the origin;
  // F_x^2 + F_y^2 = 4(x^2 + y^2) vanishes on every point of the curve.
  CHECK_THROWS_AS(sample_curve(parse_poly("x^2 + y^2"), 5, 3), NumericError);
  CHECK_THROWS_AS(sample_curve(parse_poly("3"), 5, 3), DegenerateError);
}

TEST_CASE("reflection data on conics is injective for a generic source") {
  auto report = birationality_test(kCircle, pt(2, 1, 1), 200, 17, 1e-8);
  CHECK(report.verdict == BirationalityVerdict::injective);
  CHECK(report.collisions.empty());
  CHECK(report.sample_count >= 100);
  CHECK(report.distinct_images == report.sample_count);
  CHECK(report.phi_collisions == 0);

  auto ell = birationality_test(kEllipse, pt(3, 1, 1), 200, 23, 1e-8);
  CHECK(ell.verdict == BirationalityVerdict::injective);
  CHECK(ell.distinct_images == ell.sample_count);
}

TEST_CASE("a parabola lit from its focus collapses the envelope but not the lines") {
  // Rays from the focus [0:1:4] of y z = x^2 reflect into parallel vertical
  // lines: all envelope points coincide at the vertical direction while the
  // reflected lines stay pairwise distinct.
  ProjPoint focus(Q(0), Q(1), Q(4));
  auto report = birationality_test(kParabola, focus, 40, 29, 1e-8);
  CHECK(report.verdict == BirationalityVerdict::injective);
  CHECK(report.phi_collisions > 0);
  long used = report.sample_count;
  CHECK(report.phi_collisions == used * (used - 1) / 2);
}

TEST_CASE("birationality reports are deterministic") {
  auto a = birationality_test(kCircle, pt(2, 1, 1), 60, 31, 1e-8);
  auto b = birationality_test(kCircle, pt(2, 1, 1), 60, 31, 1e-8);
  CHECK(a.sample_count == b.sample_count);
  CHECK(a.distinct_images == b.distinct_images);
  CHECK(a.phi_collisions == b.phi_collisions);
  CHECK(verdict_name(a.verdict) == std::string(verdict_name(b.verdict)));
}

TEST_CASE("real trace of a mirrored circle stays on a curve-shaped set") {
  Window win{-2, 2, -2, 2};
  auto segments = real_trace(kCircle, pt(2, 1, 1), win, 400);
  REQUIRE(!segments.empty());
  std::size_t total = 0;
  for (const auto& s : segments) {
    CHECK(s.points.size() >= 2);
    total += s.points.size();
  }
  CHECK(total >= 50);
  auto again = real_trace(kCircle, pt(2, 1, 1), win, 400);
  CHECK(trace_csv(again) == trace_csv(segments));
}

TEST_CASE("real trace collapses to the center for a source at the center") {
  Window win{-2, 2, -2, 2};
  auto segments = real_trace(kCircle, pt(0, 0, 1), win, 200);
  REQUIRE(!segments.empty());
  for (const auto& s : segments)
    for (const auto& p : s.points) CHECK(std::hypot(p[0], p[1]) < 1e-6);
}

TEST_CASE("real trace of a parabola lit along its axis collapses to the focus") {
  Window win{-3, 3, -3, 3};
  auto segments = real_trace(kParabola, pt(0, 1, 0), win, 300);
  REQUIRE(!segments.empty());
  for (const auto& s : segments)
    for (const auto& p : s.points) {
      CHECK(std::abs(p[0]) < 1e-6);
      CHECK(std::abs(p[1] - 0.25) < 1e-6);
    }
}

TEST_CASE("trace errors are reported for empty windows and complex curves") {
  Window far{10, 11, 10, 11};
  CHECK_THROWS_AS(real_trace(kCircle, pt(2, 1, 1), far, 50), NumericError);
  MPoly complex_curve = parse_poly("x^2 + i*y^2 - z^2");
  Window win{-2, 2, -2, 2};
  CHECK_THROWS_AS(real_trace(complex_curve, pt(2, 1, 1), win, 50), DegenerateError);
  CHECK_THROWS_AS(real_trace(kCircle, pt(2, 1, 1), win, 1), DegenerateError);
}

TEST_CASE("trace serializations carry every segment") {
  Window win{-2, 2, -2, 2};
  auto segments = real_trace(kCircle, pt(2, 1, 1), win, 120);
  std::string csv = trace_csv(segments);
  CHECK(csv.rfind("x,y,segment_id\n", 0) == 0);
  std::size_t rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  std::size_t total = 0;
  for (const auto& s : segments) total += s.points.size();
  CHECK(rows == total);

  std::string svg = trace_svg(segments, win);
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t paths = 0;
  for (std::size_t at = svg.find("<path"); at != std::string::npos;
       at = svg.find("<path", at + 1))
    ++paths;
  CHECK(paths == segments.size());
  CHECK(svg.find("viewBox=\"-2 -2 4 4\"") != std::string::npos);
}

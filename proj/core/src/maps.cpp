#include "caustics/maps.hpp"

#include "caustics/errors.hpp"
#include "caustics/polyops.hpp"

namespace caustics {

namespace {

using Components = std::array<MPoly, 3>;

Components cross_maps(const Components& a, const Components& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

Components point_polys(const ProjPoint& p) {
  return {MPoly(p.h[0]), MPoly(p.h[1]), MPoly(p.h[2])};
}

Components position_polys() {
  return {MPoly::variable(VX), MPoly::variable(VY), MPoly::variable(VZ)};
}

/// Mirror image of `target` (a polynomial triple) in the line whose dual
/// coordinates are the polynomial triple `mirror`:
///   (a^2 + b^2) p - 2 <mirror, p> (a, b, 0).
Components reflect_in(const Components& mirror, const Components& target) {
  const MPoly& a = mirror[0];
  const MPoly& b = mirror[1];
  MPoly s = a * a + b * b;
  MPoly inc = mirror[0] * target[0] + mirror[1] * target[1] + mirror[2] * target[2];
  MPoly two_inc = inc.scaled(GaussianRational(2));
  return {s * target[0] - two_inc * a, s * target[1] - two_inc * b, s * target[2]};
}

Components gradient_polys(const MPoly& f) {
  return {f.derivative(VX), f.derivative(VY), f.derivative(VZ)};
}

/// (Jacobian of m) * t: component i gets sum_j d m_i / d x_j * t_j.
Components jacobian_times(const Components& m, const Components& t) {
  Components out;
  const Var vars[3] = {VX, VY, VZ};
  for (int i = 0; i < 3; ++i) {
    MPoly acc;
    for (int j = 0; j < 3; ++j) acc += m[static_cast<size_t>(i)].derivative(vars[j]) * t[static_cast<size_t>(j)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

void require_plane_curve(const MPoly& f, const char* who) {
  if (f.is_zero() || f.degree() < 1 || !f.is_homogeneous_in({VX, VY, VZ}))
    throw DegenerateError(std::string(who) + " requires a homogeneous curve in x, y, z");
}

}  // namespace

RationalMapP2::RationalMapP2(Components components) : comp_(std::move(components)) {
  validate(nullptr);
}

RationalMapP2::RationalMapP2(Components components, const MPoly& curve)
    : comp_(std::move(components)) {
  validate(&curve);
}

void RationalMapP2::validate(const MPoly* curve) {
  int deg = kZeroPolyDegree;
  bool any = false;
  for (const MPoly& c : comp_) {
    if (c.is_zero()) continue;
    if (!c.is_homogeneous_in({VX, VY, VZ}))
      throw DegenerateError("map components must be homogeneous in x, y, z");
    if (any && c.degree() != deg)
      throw DegenerateError("map components must share one degree");
    deg = c.degree();
    any = true;
  }
  if (!any) throw DegenerateError("the zero triple is not a projective map");
  if (curve) {
    bool alive = false;
    for (const MPoly& c : comp_)
      if (!c.is_zero() && !nf_mod(c, *curve).is_zero()) {
        alive = true;
        break;
      }
    if (!alive)
      throw DegenerateError("map vanishes identically on the curve");
  }
}

int RationalMapP2::degree() const {
  for (const MPoly& c : comp_)
    if (!c.is_zero()) return c.degree();
  return kZeroPolyDegree;
}

RationalMapP2 RationalMapP2::content_removed() const {
  MPoly g = mpoly_gcd(mpoly_gcd(comp_[0], comp_[1]), comp_[2]);
  if (g.is_zero() || g.degree() <= 0) return *this;
  return RationalMapP2(
      {divide_exact(comp_[0], g), divide_exact(comp_[1], g), divide_exact(comp_[2], g)});
}

RationalMapP2 RationalMapP2::linearly_transformed(
    const std::array<std::array<GaussianRational, 3>, 3>& a) const {
  Components out;
  for (size_t i = 0; i < 3; ++i) {
    MPoly acc;
    for (size_t j = 0; j < 3; ++j) acc += comp_[j].scaled(a[i][j]);
    out[i] = acc;
  }
  return RationalMapP2(std::move(out));
}

RationalMapP2 RationalMapP2::precomposed_linear(
    const std::array<std::array<GaussianRational, 3>, 3>& a) const {
  Components out;
  for (size_t i = 0; i < 3; ++i) out[i] = comp_[i].linear_change_xyz(a);
  return RationalMapP2(std::move(out));
}

ProjPoint RationalMapP2::apply(const ProjPoint& m) const {
  std::array<GaussianRational, 6> at{m.h[0], m.h[1], m.h[2], GaussianRational(0),
                                     GaussianRational(0), GaussianRational(0)};
  std::array<GaussianRational, 3> img{comp_[0].eval(at), comp_[1].eval(at),
                                      comp_[2].eval(at)};
  if (img[0].is_zero() && img[1].is_zero() && img[2].is_zero())
    throw DegenerateError("point is a base point of the map");
  return ProjPoint(std::move(img));
}

std::array<std::complex<double>, 3> RationalMapP2::apply_complex(
    const std::array<std::complex<double>, 3>& m) const {
  std::array<std::complex<double>, 6> at{m[0], m[1], m[2], 0.0, 0.0, 0.0};
  return {comp_[0].eval_complex(at), comp_[1].eval_complex(at), comp_[2].eval_complex(at)};
}

std::string RationalMapP2::str() const {
  return "[" + comp_[0].str() + " : " + comp_[1].str() + " : " + comp_[2].str() + "]";
}

RationalMapP2 gradient_map(const MPoly& f) {
  require_plane_curve(f, "gradient map");
  return RationalMapP2(gradient_polys(f), f);
}

RationalMapP2 tangent_direction_map(const MPoly& f) {
  require_plane_curve(f, "tangent direction map");
  return RationalMapP2(cross_maps(gradient_polys(f), position_polys()), f);
}

RationalMapP2 orthotomic_map(const MPoly& f, const ProjPoint& source) {
  require_plane_curve(f, "orthotomic map");
  return RationalMapP2(reflect_in(gradient_polys(f), point_polys(source)), f);
}

RationalMapP2 reflected_line_map(const MPoly& f, const ProjPoint& source) {
  require_plane_curve(f, "reflected line map");
  Components sigma = reflect_in(gradient_polys(f), point_polys(source));
  return RationalMapP2(cross_maps(position_polys(), sigma), f);
}

RationalMapP2 caustic_map(const MPoly& f, const ProjPoint& source) {
  require_plane_curve(f, "caustic map");
  Components rho = reflected_line_map(f, source).components();
  Components t = tangent_direction_map(f).components();
  Components envelope = cross_maps(rho, jacobian_times(rho, t));
  RationalMapP2 raw({envelope[0], envelope[1], envelope[2]}, f);
  return raw.content_removed();
}

RationalMapP2 source_candidate_map(const MPoly& f, const ProjPoint& base_point) {
  require_plane_curve(f, "source candidate map");
  if (!in_reflective_locus(f, base_point))
    throw DegenerateError(
        "source candidate map needs a base point in the reflective locus");
  const ProjLine t0 = tangent_line(f, base_point);
  Components t0_polys{MPoly(t0.h[0]), MPoly(t0.h[1]), MPoly(t0.h[2])};
  Components here = point_polys(base_point);
  // Reflected ray at the base point, of the ray coming from m'.
  Components first = cross_maps(here, reflect_in(t0_polys, position_polys()));
  // Reflected ray at m', of the ray coming from the base point.
  Components second =
      cross_maps(position_polys(), reflect_in(gradient_polys(f), here));
  return RationalMapP2(cross_maps(first, second), f);
}

RationalMapP2 normal_envelope_map(const MPoly& g) {
  require_plane_curve(g, "normal envelope map");
  Components grad = gradient_polys(g);
  Components foot{grad[0], grad[1], MPoly()};
  Components nu = cross_maps(position_polys(), foot);
  Components t = tangent_direction_map(g).components();
  Components envelope = cross_maps(nu, jacobian_times(nu, t));
  RationalMapP2 raw({envelope[0], envelope[1], envelope[2]}, g);
  return raw.content_removed();
}

}  // namespace caustics

#include "caustics/projective.hpp"

#include "caustics/errors.hpp"

namespace caustics {

namespace {

using Triple = std::array<GaussianRational, 3>;

bool all_zero(const Triple& t) {
  return t[0].is_zero() && t[1].is_zero() && t[2].is_zero();
}

Triple cross(const Triple& a, const Triple& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

GaussianRational dot(const Triple& a, const Triple& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Triple normalize_triple(const Triple& t) {
  for (const GaussianRational& c : t) {
    if (!c.is_zero()) {
      const GaussianRational inv = c.inverse();
      return {t[0] * inv, t[1] * inv, t[2] * inv};
    }
  }
  return t;
}

std::string triple_text(const Triple& t) {
  return "[" + t[0].str() + ":" + t[1].str() + ":" + t[2].str() + "]";
}

}  // namespace

ProjPoint::ProjPoint(Triple coords) : h(std::move(coords)) {
  if (all_zero(h)) throw DegenerateError("projective point coordinates must not all vanish");
}

ProjPoint::ProjPoint(GaussianRational x, GaussianRational y, GaussianRational z)
    : ProjPoint(Triple{std::move(x), std::move(y), std::move(z)}) {}

ProjPoint ProjPoint::normalized() const { return ProjPoint(normalize_triple(h)); }

std::string ProjPoint::str() const { return triple_text(normalize_triple(h)); }

ProjLine::ProjLine(Triple coeffs) : h(std::move(coeffs)) {
  if (all_zero(h)) throw DegenerateError("projective line coefficients must not all vanish");
}

ProjLine::ProjLine(GaussianRational a, GaussianRational b, GaussianRational c)
    : ProjLine(Triple{std::move(a), std::move(b), std::move(c)}) {}

ProjLine ProjLine::normalized() const { return ProjLine(normalize_triple(h)); }

std::string ProjLine::str() const { return triple_text(normalize_triple(h)); }

ProjPoint cyclic_point_first() {
  return ProjPoint(GaussianRational(1), GaussianRational::i(), GaussianRational(0));
}

ProjPoint cyclic_point_second() {
  return ProjPoint(GaussianRational(1), -GaussianRational::i(), GaussianRational(0));
}

ProjLine line_at_infinity() {
  return ProjLine(GaussianRational(0), GaussianRational(0), GaussianRational(1));
}

bool same_point(const ProjPoint& p, const ProjPoint& q) { return all_zero(cross(p.h, q.h)); }

bool same_line(const ProjLine& l, const ProjLine& m) { return all_zero(cross(l.h, m.h)); }

bool incident(const ProjPoint& p, const ProjLine& l) { return dot(p.h, l.h).is_zero(); }

ProjLine join(const ProjPoint& p, const ProjPoint& q) {
  Triple c = cross(p.h, q.h);
  if (all_zero(c)) throw DegenerateError("join of coincident points is undefined");
  return ProjLine(std::move(c));
}

ProjPoint meet(const ProjLine& l, const ProjLine& m) {
  Triple c = cross(l.h, m.h);
  if (all_zero(c)) throw DegenerateError("meet of coincident lines is undefined");
  return ProjPoint(std::move(c));
}

ProjPoint reflect_point(const ProjLine& mirror, const ProjPoint& p) {
  const GaussianRational& a = mirror.h[0];
  const GaussianRational& b = mirror.h[1];
  if (a.is_zero() && b.is_zero())
    throw DegenerateError("reflection across the line at infinity is undefined");
  const GaussianRational s = a * a + b * b;
  const GaussianRational t = GaussianRational(2) * dot(mirror.h, p.h);
  Triple img{s * p.h[0] - t * a, s * p.h[1] - t * b, s * p.h[2]};
  if (all_zero(img))
    throw DegenerateError("reflection undefined: point collapses on an isotropic mirror");
  return ProjPoint(std::move(img));
}

GaussianRational eval_at(const MPoly& f, const ProjPoint& m) {
  return f.eval({m.h[0], m.h[1], m.h[2], GaussianRational(0), GaussianRational(0),
                 GaussianRational(0)});
}

std::array<GaussianRational, 3> gradient_at(const MPoly& f, const ProjPoint& m) {
  return {eval_at(f.derivative(VX), m), eval_at(f.derivative(VY), m),
          eval_at(f.derivative(VZ), m)};
}

bool on_curve(const MPoly& f, const ProjPoint& m) { return eval_at(f, m).is_zero(); }

ProjLine tangent_line(const MPoly& f, const ProjPoint& m) {
  auto g = gradient_at(f, m);
  if (g[0].is_zero() && g[1].is_zero() && g[2].is_zero())
    throw DegenerateError("tangent line undefined at a singular point");
  return ProjLine(std::move(g[0]), std::move(g[1]), std::move(g[2]));
}

ProjLine normal_line(const MPoly& f, const ProjPoint& m) {
  auto g = gradient_at(f, m);
  if (g[0].is_zero() && g[1].is_zero()) {
    if (g[2].is_zero()) throw DegenerateError("normal line undefined at a singular point");
    throw DegenerateError("normal line undefined: gradient has no affine part");
  }
  ProjPoint dir(std::move(g[0]), std::move(g[1]), GaussianRational(0));
  if (same_point(m, dir))
    throw DegenerateError("normal line undefined: point is its own gradient direction");
  return join(m, dir);
}

bool in_reflective_locus(const MPoly& f, const ProjPoint& m) {
  if (!on_curve(f, m)) return false;
  const GaussianRational fx = eval_at(f.derivative(VX), m);
  const GaussianRational fy = eval_at(f.derivative(VY), m);
  return !(fx * fx + fy * fy).is_zero();
}

ProjLine reflected_line(const MPoly& f, const ProjPoint& source, const ProjPoint& m) {
  if (!on_curve(f, m)) throw DegenerateError("reflection point does not lie on the curve");
  if (!in_reflective_locus(f, m))
    throw DegenerateError("reflection undefined: isotropic tangent at the curve point");
  if (same_point(source, m))
    throw DegenerateError("reflected line undefined: source coincides with the curve point");
  const ProjLine t = tangent_line(f, m);
  const ProjPoint mirrored = reflect_point(t, source);
  return join(m, mirrored);
}

}  // namespace caustics

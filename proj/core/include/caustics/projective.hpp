#pragma once

#include <array>
#include <string>

#include "caustics/mpoly.hpp"
#include "caustics/rational.hpp"

namespace caustics {

/// Point of P^2 over Q(i), by homogeneous coordinates (never all zero).
struct ProjPoint {
  std::array<GaussianRational, 3> h;
  explicit ProjPoint(std::array<GaussianRational, 3> coords);
  ProjPoint(GaussianRational x, GaussianRational y, GaussianRational z);
  /// Scaled so the first nonzero coordinate is 1.
  ProjPoint normalized() const;
  std::string str() const;
};

/// Line of P^2 by dual coordinates: V(a x + b y + c z).
struct ProjLine {
  std::array<GaussianRational, 3> h;
  explicit ProjLine(std::array<GaussianRational, 3> coeffs);
  ProjLine(GaussianRational a, GaussianRational b, GaussianRational c);
  ProjLine normalized() const;
  std::string str() const;
};

/// The cyclic points [1:i:0], [1:-i:0] and the line at infinity V(z).
ProjPoint cyclic_point_first();
ProjPoint cyclic_point_second();
ProjLine line_at_infinity();

bool same_point(const ProjPoint& p, const ProjPoint& q);
bool same_line(const ProjLine& l, const ProjLine& m);
bool incident(const ProjPoint& p, const ProjLine& l);

/// Line through two distinct points.
ProjLine join(const ProjPoint& p, const ProjPoint& q);
/// Common point of two distinct lines.
ProjPoint meet(const ProjLine& l, const ProjLine& m);

/// Reflection of p across the mirror line D = V(a x + b y + c z):
///   (a^2 + b^2) p - 2 (a p_x + b p_y + c p_z) (a, b, 0).
/// Undefined for the line at infinity and for points on an isotropic mirror
/// whose image would vanish.
ProjPoint reflect_point(const ProjLine& mirror, const ProjPoint& p);

/// F evaluated at m (u, v, w set to zero).
GaussianRational eval_at(const MPoly& f, const ProjPoint& m);
/// (F_x, F_y, F_z) at m.
std::array<GaussianRational, 3> gradient_at(const MPoly& f, const ProjPoint& m);

bool on_curve(const MPoly& f, const ProjPoint& m);
ProjLine tangent_line(const MPoly& f, const ProjPoint& m);
/// Line through m and [F_x : F_y : 0], perpendicular to the tangent.
ProjLine normal_line(const MPoly& f, const ProjPoint& m);

/// True when m lies on the curve and its tangent is not isotropic:
/// the open locus where reflection of lines across the normal is defined.
bool in_reflective_locus(const MPoly& f, const ProjPoint& m);

/// The reflection of the ray from `source` through m across the normal at m:
/// the line joining m with the mirror image of the source in the tangent.
ProjLine reflected_line(const MPoly& f, const ProjPoint& source, const ProjPoint& m);

}  // namespace caustics

#pragma once

#include <array>
#include <complex>
#include <string>

#include "caustics/mpoly.hpp"
#include "caustics/projective.hpp"

namespace caustics {

/// Rational self-map of P^2: three homogeneous components of one common
/// degree in x, y, z.  When a curve is supplied at construction, the map must
/// not vanish identically on it.
class RationalMapP2 {
public:
  explicit RationalMapP2(std::array<MPoly, 3> components);
  RationalMapP2(std::array<MPoly, 3> components, const MPoly& curve);

  const MPoly& operator[](int k) const { return comp_[static_cast<size_t>(k)]; }
  const std::array<MPoly, 3>& components() const { return comp_; }
  /// Common homogeneous degree of the components.
  int degree() const;

  /// Divide out the gcd of the three components.
  RationalMapP2 content_removed() const;
  /// Post-compose with the linear automorphism A: components become A * M.
  RationalMapP2 linearly_transformed(
      const std::array<std::array<GaussianRational, 3>, 3>& a) const;
  /// Pre-compose with the linear change of coordinates: M(A x).
  RationalMapP2 precomposed_linear(
      const std::array<std::array<GaussianRational, 3>, 3>& a) const;

  /// Exact image of a point; DegenerateError at a base point.
  ProjPoint apply(const ProjPoint& m) const;
  /// Floating-point image (no base-point check; caller inspects magnitudes).
  std::array<std::complex<double>, 3> apply_complex(
      const std::array<std::complex<double>, 3>& m) const;

  std::string str() const;

private:
  void validate(const MPoly* curve);
  std::array<MPoly, 3> comp_;
};

/// m -> [F_x : F_y : F_z], the tangent line as a point of the dual plane.
RationalMapP2 gradient_map(const MPoly& f);

/// m -> grad F(m) x m: a point of the tangent line at m, moving with m.
RationalMapP2 tangent_direction_map(const MPoly& f);

/// m -> the mirror image of the source in the tangent line at m
/// (components of degree 2 deg F - 2).
RationalMapP2 orthotomic_map(const MPoly& f, const ProjPoint& source);

/// m -> the reflected line at m of the ray from the source, as a point of the
/// dual plane (components of degree 2 deg F - 1).
RationalMapP2 reflected_line_map(const MPoly& f, const ProjPoint& source);

/// m -> the envelope point of the reflected lines: the caustic map
/// (components of degree 5 deg F - 3 before content removal).
RationalMapP2 caustic_map(const MPoly& f, const ProjPoint& source);

/// m' -> meet of the reflected ray at the fixed base point (source m') with
/// the reflected ray at m' (source the base point); components of degree
/// 2 deg F.  The image over the curve is the locus of candidate sources with
/// colliding reflection data at the base point.
RationalMapP2 source_candidate_map(const MPoly& f, const ProjPoint& base_point);

/// m -> the envelope point of the normal lines of G: the evolute map
/// (components of degree 3 deg G - 1).
RationalMapP2 normal_envelope_map(const MPoly& g);

}  // namespace caustics

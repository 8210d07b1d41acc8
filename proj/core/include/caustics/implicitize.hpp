#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "caustics/errors.hpp"
#include "caustics/maps.hpp"
#include "caustics/mpoly.hpp"
#include "caustics/projective.hpp"

namespace caustics {

/// The image of the curve under the map collapses to a single point, so no
/// image curve exists (all reflected lines concurrent, evolute of a circle,
/// dual of a line, ...).
class DegenerateImageError : public EliminationError {
public:
  using EliminationError::EliminationError;
};

/// An eliminated factor that was discarded, with the reason.
struct StrippedFactor {
  MPoly factor;  // monic, in (u, v, w)
  std::string reason;
};

/// Implicit equation of the Zariski closure of the image of a curve under a
/// rational self-map of the projective plane, in target variables (u, v, w).
struct ImageCurve {
  /// Monic and square-free; the minimal-degree curve through the image.
  MPoly equation;
  /// Total degree of `equation`.
  int degree = 0;
  /// True when the independent fiber count over random lines agrees with
  /// `degree` (the count equals the image degree for maps that are
  /// generically one-to-one on the curve).
  bool certified = false;
  std::vector<StrippedFactor> stripped_factors;
};

/// Minimal-degree implicit equation of the image of V(f) under `m`, by exact
/// linear algebra: the kernel of coefficient-vectors G with G(M) = 0 modulo f,
/// scanned over candidate degrees (a fiber count seeds the scan; the
/// kernel dimension certifies minimality exactly).  The returned equation
/// satisfies f | equation(M) exactly.  Throws DegenerateImageError when the
/// image is a point and EliminationError when no minimal equation exists
/// below the Bezout bound (a reducible input curve, typically).
ImageCurve image_curve(const MPoly& f, const RationalMapP2& m, std::uint64_t seed = 1);

/// The same equation through iterated resultants in random affine charts with
/// gcd-cascade factor stripping: the independent cross-check oracle for
/// image_curve on small inputs.  Factors that fail the exact vanishing
/// certificate are returned in stripped_factors.
ImageCurve image_curve_resultant(const MPoly& f, const RationalMapP2& m, std::uint64_t seed = 1);

/// Independent degree oracle: counts, for random target lines, the curve
/// points whose image lands on the line (excluding base points of the map)
/// and returns the majority count across `trials` lines.  Each count is an
/// exact resultant computation in a random complex chart.  Equals the image
/// degree when the map is generically one-to-one on the curve.  Throws
/// NumericError when the counts do not stabilize across the trials.
int fiber_degree(const MPoly& f, const RationalMapP2& m, int trials, std::uint64_t seed);

/// Dual curve: the image under the gradient map.  Accepts a source curve in
/// (x, y, z) or an image curve in (u, v, w).  Rejects lines (their dual is a
/// point).
ImageCurve dual_curve(const MPoly& g, std::uint64_t seed = 1);

/// Implicit equation of the reflective caustic: the image of the curve under
/// the envelope-point map of the reflected lines.
ImageCurve caustic_implicit(const MPoly& f, const ProjPoint& source, std::uint64_t seed = 1);

/// Implicit equation of the dual of the caustic: the image under the
/// reflected-line map itself.  Its degree is the class of the caustic.
ImageCurve caustic_dual_implicit(const MPoly& f, const ProjPoint& source, std::uint64_t seed = 1);

/// The orthotomic: locus of reflections of the source across the tangent
/// lines of the curve.  Requires a source not at infinity.
ImageCurve orthotomic(const MPoly& f, const ProjPoint& source, std::uint64_t seed = 1);

/// The evolute: envelope of the normal lines.  Accepts (x, y, z) or (u, v, w)
/// input, so it can chain directly onto another image curve.
ImageCurve evolute(const MPoly& g, std::uint64_t seed = 1);

/// Rename an image-plane polynomial (u, v, w) into source variables
/// (x, y, z); polynomials already in (x, y, z) pass through unchanged.
/// Errors on mixed-variable input.
MPoly image_to_source(const MPoly& p);

}  // namespace caustics

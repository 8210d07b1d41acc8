#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "caustics/implicitize.hpp"
#include "caustics/local.hpp"
#include "caustics/mpoly.hpp"
#include "caustics/numeric.hpp"
#include "caustics/projective.hpp"

namespace caustics {

/// A mirror curve of the built-in verification catalog.
struct CatalogEntry {
  std::string name;
  /// Homogeneous in x, y, z; irreducible over Q(i) of degree >= 2 (input
  /// contract, documented per entry).
  MPoly curve;
  std::string notes;
  /// Exact rational smooth points of the curve inside the reflective locus,
  /// for checks that need concrete mirror points (ten per entry).
  std::vector<ProjPoint> stored_points;
};

/// circle, ellipse, parabola, cuspidal cubic, nodal cubic.
const std::vector<CatalogEntry>& default_catalog();

/// True when `s` lies on no tangent line of the curve through either cyclic
/// point.  `s` sits on such a tangent exactly when the join of `s` with the
/// cyclic point is a tangent line, i.e. when the dual curve vanishes on that
/// join; `dual_source` is the dual equation rewritten in the source
/// variables (image_to_source of dual_curve(f).equation).
bool avoids_isotropic_tangents(const MPoly& dual_source, const ProjPoint& s);

/// A real rational source [a : b : 1] with coordinate height <= 50 that
/// avoids the curve and every isotropic tangent (both checked exactly).
/// Rejection-samples the seeded stream; throws NumericError when 100 draws
/// all fail.  The overload taking `dual_equation` (= dual_curve(f).equation)
/// skips recomputing the dual curve.
ProjPoint generic_source(const MPoly& f, std::uint64_t seed);
ProjPoint generic_source(const MPoly& f, const MPoly& dual_equation, std::uint64_t seed);

/// Two-path comparison of the degree and class predictions for one source:
/// the invariant formulas against the elimination-computed equations.
struct FormulaCheck {
  ProjPoint source{GaussianRational(0), GaussianRational(0), GaussianRational(1)};
  InvariantReport invariants{};
  int dual_degree = 0;
  int predicted_degree = 0;
  int predicted_class = 0;
  int computed_degree = 0;
  int computed_class = 0;
  bool degree_match = false;
  bool class_match = false;
  /// Both eliminations were confirmed by the independent fiber count.
  bool certified = false;
  MPoly caustic_equation;
  MPoly dual_equation;
  std::vector<std::string> warnings;
};

/// Runs the two-path comparison for `source`; on a mismatch or a degenerate
/// caustic, retries with up to two fresh generic sources (derived from
/// `seed`) before reporting the failing comparison.
FormulaCheck verify_formulas(const MPoly& f, const ProjPoint& source, std::uint64_t seed = 1);

/// The curve of bad sources for the mirror point m: the square-free product
/// of the image of the source-candidate map at m with the tangent and the
/// normal at m.  Its degree never exceeds 2 d^2 + 2.
struct BadSourceReport {
  /// Square-free, monic, in the source variables.
  MPoly equation;
  int degree = 0;
  int bound = 0;  // 2 d^2 + 2
};

/// Requires m inside the reflective locus of the curve.  Throws
/// EliminationError if the computed degree ever exceeded the bound.
BadSourceReport bad_source_curve(const MPoly& f, const ProjPoint& m, std::uint64_t seed = 1);

/// One verified source slot of a catalog entry.
struct EntrySourceRun {
  FormulaCheck check;
  BirationalityReport birationality;
  /// Independent sources drawn for this slot (> 1 when a mismatch or a
  /// collision forced a redraw).
  int source_draws = 1;
};

struct EntryResult {
  std::string name;
  std::vector<EntrySourceRun> runs;
  /// The caustic equation was cross-checked against the evolute of the
  /// orthotomic (degree-2 entries with a finite source).
  bool quetelet_dandelin_checked = false;
  bool quetelet_dandelin_match = false;
  /// Human-readable failure descriptions; empty iff passed.
  std::vector<std::string> failures;
  bool passed = false;
};

struct CatalogReport {
  std::uint64_t seed = 0;
  std::vector<EntryResult> entries;
  bool all_passed = false;
};

/// Full verification sweep: for every catalog entry, three source slots
/// (formula checks with redraws on mismatch, at most three sources per
/// slot for the formulas and five for a persistent reflected-line
/// collision), a 200-point birationality scan per slot, and the
/// evolute-of-orthotomic cross-check on degree-2 entries.  Failures are
/// collected per entry; the run always completes.  Deterministic in `seed`.
CatalogReport run_catalog(std::uint64_t seed);

}  // namespace caustics

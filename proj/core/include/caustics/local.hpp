#pragma once

#include <vector>

#include "caustics/mpoly.hpp"
#include "caustics/projective.hpp"

namespace caustics {

/// One conjugacy class of local branches of a curve at a point.
struct BranchClass {
  int count;            // number of conjugate branches represented
  int mult;             // multiplicity e of each branch
  int tangent_contact;  // contact order i of each branch with its tangent
  bool tangent_at_infinity;  // the branch tangent is the line z = 0
};

/// One conjugacy class of points of the curve on the line z = 0.
struct InfinityPointClass {
  int count;         // number of conjugate points represented
  int line_contact;  // intersection multiplicity with z = 0 at each point
  int multiplicity;  // multiplicity of the curve at each point
};

/// The local data entering the degree and class formulas for the caustic.
struct InvariantReport {
  int degree;           // d
  int flex_excess;      // total excess tangency of branches away from z = 0
  int tangency_first;   // weighted tangency to z = 0 at [1:i:0]
  int tangency_second;  // weighted tangency to z = 0 at [1:-i:0]
  int infinity_defect;  // d minus the total curve multiplicity on z = 0
  int mult_first;       // multiplicity at [1:i:0], 0 when off the curve
  int mult_second;      // multiplicity at [1:-i:0]
  int predicted_degree;  // 3d + flex_excess - both tangencies
  int predicted_class(int dual_degree) const {
    return 2 * dual_degree + degree - infinity_defect - mult_first - mult_second;
  }
};

/// Multiplicity of the curve at a rational point (0 when off the curve).
int multiplicity_at(const MPoly& f, const ProjPoint& p);

/// Branch classes of the curve at a rational point on it.
std::vector<BranchClass> branches_at(const MPoly& f, const ProjPoint& p);

/// Sum of branch multiplicities over branches tangent to z = 0 at p.
int tangency_count_at(const MPoly& f, const ProjPoint& p);

/// Conjugacy classes of the points of the curve on z = 0, with their line
/// contact and curve multiplicity.  Exact over Q(i): no splitting field is
/// built; conjugate points stay bundled.
std::vector<InfinityPointClass> infinity_profile(const MPoly& f);

/// degree(f) - sum of multiplicities at the points on z = 0.
int infinity_defect(const MPoly& f);

/// Sum over branches B (at any point, including unreachable conjugate
/// clusters) with tangent distinct from z = 0 of the excess
/// contact(B) - 2 mult(B), counted only when positive.
int flex_excess(const MPoly& f);

/// Intersection multiplicity of two curves at a rational common point.
int local_intersection_multiplicity(const MPoly& f, const MPoly& g, const ProjPoint& p);

/// All invariants of the degree/class formulas in one pass.
InvariantReport invariant_bundle(const MPoly& f);

}  // namespace caustics

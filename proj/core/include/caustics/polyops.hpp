#pragma once

#include <utility>
#include <vector>

#include "caustics/mpoly.hpp"

namespace caustics {

/// Resultant of f and g with respect to `var`, by the subresultant PRS.
/// Errors when both inputs are constant in `var`; zero input gives zero.
MPoly resultant(const MPoly& f, const MPoly& g, Var var);

/// Same value via a fraction-free Sylvester determinant; cross-check oracle
/// for small inputs (result agrees up to the PRS's nonzero rational factor --
/// this one IS the Sylvester determinant, the reference normalization).
MPoly sylvester_resultant(const MPoly& f, const MPoly& g, Var var);

/// Pseudo-remainder lc_var(g)^(delta+1) * f mod g, delta = deg f - deg g.
MPoly pseudo_remainder(const MPoly& f, const MPoly& g, Var var);

/// Monic multivariate gcd over Q(i) (primitive PRS with content recursion and
/// an evaluation-based coprimality certificate).  gcd(0,0) = 0.
MPoly mpoly_gcd(const MPoly& f, const MPoly& g);

/// Content of f as a polynomial in `var`: gcd of its coefficients.
MPoly content_in(const MPoly& f, Var var);
/// f divided by content_in(f, var).
MPoly primitive_part_in(const MPoly& f, Var var);

/// Product of the distinct irreducible factors, monic.
MPoly square_free_part(const MPoly& p);

/// Split p into pairwise-coprime factors by gcd cascades against the given
/// seeds (used by elimination stripping); factors returned monic.
std::vector<MPoly> coprime_split(const std::vector<MPoly>& polys);

/// Binary form F(u*A + v*B) in (u, v) for the line through A and B.
/// Errors when A, B are proportional or F vanishes identically on the line.
MPoly restrict_to_line(const MPoly& f, const std::array<GaussianRational, 3>& a,
                       const std::array<GaussianRational, 3>& b);

/// Multiplicity of the projective root [s0:t0] in a binary form in (u, v),
/// counted by repeated exact division by the vanishing linear form.
int multiplicity_at_root(const MPoly& binary_form, const GaussianRational& s0,
                         const GaussianRational& t0);

// ---------------------------------------------------------------------------
// Dense univariate layer over Q(i) (coefficient index = exponent).

using UPoly = std::vector<GaussianRational>;

UPoly upoly_from(const MPoly& p, Var var);
MPoly upoly_to(const UPoly& p, Var var);
void upoly_trim(UPoly& p);
int upoly_deg(const UPoly& p);  // -1 for zero
UPoly upoly_derivative(const UPoly& p);
/// Quotient and remainder over the field Q(i).
std::pair<UPoly, UPoly> upoly_divrem(const UPoly& f, const UPoly& g);
UPoly upoly_gcd(UPoly f, UPoly g);  // monic
UPoly upoly_mul(const UPoly& a, const UPoly& b);

/// Yun square-free decomposition: list of (monic factor, multiplicity) with
/// distinct-root factors; product of factor^multiplicity = monic input.
std::vector<std::pair<UPoly, int>> upoly_squarefree_decomposition(const UPoly& p);

}  // namespace caustics

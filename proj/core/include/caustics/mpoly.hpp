#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "caustics/rational.hpp"

namespace caustics {

/// Fixed variable universe.  Source curves live in (x,y,z), image curves in
/// (u,v,w); mixed polynomials (elimination intermediates) may use both.
enum Var : int { VX = 0, VY = 1, VZ = 2, VU = 3, VV = 4, VW = 5 };
inline constexpr int kNumVars = 6;
extern const char* const kVarNames[kNumVars];

using Exponents = std::array<std::uint16_t, 6>;

inline int total_degree(const Exponents& e) {
  int t = 0;
  for (auto k : e) t += k;
  return t;
}

/// Graded lexicographic order, x > y > z > u > v > w.
inline bool grlex_greater(const Exponents& a, const Exponents& b) {
  int ta = total_degree(a), tb = total_degree(b);
  if (ta != tb) return ta > tb;
  for (int k = 0; k < kNumVars; ++k) {
    if (a[k] != b[k]) return a[k] > b[k];
  }
  return false;
}

inline std::uint64_t pack_exponents(const Exponents& e) {
  std::uint64_t k = 0;
  for (int j = 0; j < kNumVars; ++j) k = (k << 10) | (e[j] & 0x3ff);
  return k;
}

/// Sentinel value returned by MPoly::degree() for the zero polynomial.
inline constexpr int kZeroPolyDegree = -1;

/// Sparse polynomial over Q(i) in up to six variables.  Terms are kept
/// grlex-sorted (leading term first) with nonzero coefficients.
class MPoly {
public:
  struct Term {
    Exponents exp;
    GaussianRational coeff;
  };

  MPoly() = default;
  explicit MPoly(const GaussianRational& c);
  /// Monomial c * prod(var^e).
  static MPoly monomial(const GaussianRational& c, const Exponents& e);
  static MPoly variable(Var v);
  static MPoly constant(long n) { return MPoly(GaussianRational(n)); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && total_degree(terms_[0].exp) == 0); }
  /// Total degree; kZeroPolyDegree for the zero polynomial.
  int degree() const { return terms_.empty() ? kZeroPolyDegree : total_degree(terms_[0].exp); }
  int degree_in(Var v) const;
  std::size_t term_count() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  const Term& leading_term() const;
  const GaussianRational& leading_coeff() const { return leading_term().coeff; }

  /// Coefficient of the given exponent vector (zero if absent).
  GaussianRational coeff(const Exponents& e) const;

  bool uses_var(Var v) const { return degree_in(v) > 0; }
  /// True when every term has the same total degree in the given variables
  /// and zero exponents elsewhere.
  bool is_homogeneous_in(std::initializer_list<Var> vars) const;

  MPoly operator-() const;
  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
  MPoly scaled(const GaussianRational& c) const;
  MPoly pow(unsigned n) const;
  friend bool operator==(const MPoly& a, const MPoly& b);
  friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

  MPoly derivative(Var v) const;
  /// Coefficient conjugation (i -> -i).
  MPoly conjugated() const;

  /// Dense coefficient list in var v: result[k] = coefficient of v^k
  /// (an MPoly free of v).  Empty vector for the zero polynomial.
  std::vector<MPoly> coeffs_in(Var v) const;
  static MPoly from_coeffs(const std::vector<MPoly>& cs, Var v);

  /// Substitute each variable by the matching polynomial in `images`
  /// (size 6; identity substitutions may map a var to itself).
  MPoly substituted(const std::array<MPoly, 6>& images) const;
  /// p(A * (x,y,z)^T) for a 3x3 matrix acting on the source variables only.
  MPoly linear_change_xyz(const std::array<std::array<GaussianRational, 3>, 3>& a) const;
  /// Substitute a single variable by a constant.
  MPoly evaluated_var(Var v, const GaussianRational& c) const;
  /// Rename variable occurrences: exponents of `from` move to `to`
  /// (`to` must be absent).
  MPoly renamed(Var from, Var to) const;

  /// Exact evaluation at a full point (vars absent from the polynomial ignore
  /// their slot).
  GaussianRational eval(const std::array<GaussianRational, 6>& pt) const;
  std::complex<double> eval_complex(const std::array<std::complex<double>, 6>& pt) const;

  /// Positive rational c such that (1/c) * this has Gaussian-integer
  /// coefficients whose collective integer content is 1.  Zero poly -> 0.
  mpq_class scalar_content() const;
  /// Divide by scalar_content(); canonical up to Gaussian units.
  MPoly primitive_scaled() const;
  /// Divide by the leading coefficient.
  MPoly monic() const;

  /// Largest coefficient height (for diagnostics).
  mpz_class height() const;

  std::string str() const;

  /// Construct directly from terms (unsorted, may contain duplicates/zeros).
  static MPoly from_terms(std::vector<Term> terms);

private:
  void normalize();
  std::vector<Term> terms_;
};

/// Exact quotient; throws ArithmeticError if g does not divide f exactly.
MPoly divide_exact(const MPoly& f, const MPoly& g);
/// True iff g | f (g != 0).  divides(0, f) is true only for f = 0.
bool divides(const MPoly& g, const MPoly& f);
/// Remainder of multivariate division of f by the single divisor g (grlex).
MPoly nf_mod(const MPoly& f, const MPoly& g);

}  // namespace caustics
